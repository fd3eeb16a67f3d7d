#include "mfol/entropy.hpp"
#include "mfol/markov_io.hpp"
#include "mfol/models.hpp"
#include "mfol/surgery.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mfol;

namespace {

const double kLog2 = std::log(2.0);

MarkovSystem half_coin() { return bernoulli({Rational(1, 2), Rational(1, 2)}); }

// Geometric return times of a fair coin to {0}: P(T = t) = 2^-t.
double geometric_expected_return(int R) {
  double e = 0;
  for (int t = 1; t <= R; ++t) e += t * std::ldexp(1.0, -t);
  return e;
}

// Exact return law of the rational golden mean to {1}: 1 → 0, then stay in 0
// with probability p each step.
Rational golden_expected_return(const Rational& p, int R) {
  Rational e = 0, stay = 1;
  for (int t = 2; t <= R; ++t) {
    e += t * stay * (1 - p);
    stay *= p;
  }
  return e;
}

double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Markov, ValidationRejectsBadRows) {
  Eigen::MatrixXd P(2, 2);
  P << 0.5, 0.6, 1, 0;
  EXPECT_THROW(make_markov("bad", P), ValidationError);
  P << 1.5, -0.5, 1, 0;
  EXPECT_THROW(make_markov("neg", P), ValidationError);
  EXPECT_THROW(make_markov("rat", std::vector<std::vector<Rational>>{{Rational(1, 3), Rational(1, 3)}, {1, 0}}),
               ValidationError);
}

TEST(Markov, StationaryDistributionIsStationary) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto M = random_irreducible(5, seed);
    EXPECT_TRUE(is_irreducible(M.P));
    EXPECT_LT((M.pi.transpose() * M.P - M.pi.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(M.pi.sum(), 1, 1e-12);
  }
  auto G = golden_mean();
  const double phi = (1 + std::sqrt(5.0)) / 2;
  EXPECT_NEAR(G.pi(0), phi * phi / (1 + phi * phi), 1e-12);
}

TEST(Markov, ReducibleChainIsDetected) {
  Eigen::MatrixXd P(2, 2);
  P << 1, 0, 0.5, 0.5;
  EXPECT_FALSE(is_irreducible(P));
}

TEST(KsEntropy, FairCoinIsLog2) { EXPECT_NEAR(ks_entropy(half_coin()), kLog2, 1e-15); }

TEST(KsEntropy, CycleIsZero) {
  for (int n : {1, 2, 5}) EXPECT_EQ(ks_entropy(cyclic_permutation(n)), 0.0);
}

TEST(KsEntropy, GoldenMeanMatchesBlockEstimate) {
  auto G = golden_mean();
  EXPECT_NEAR(ks_entropy(G), std::log((1 + std::sqrt(5.0)) / 2), 1e-12);
  EXPECT_NEAR(ks_entropy(G), block_entropy_estimate(G, 8, 1000000, 7), 1e-3);
}

TEST(KsEntropy, ProductIsAdditive) {
  auto G = golden_mean();
  auto R = random_irreducible(3, 11);
  auto C = half_coin();
  EXPECT_NEAR(ks_entropy(product_system(G, R)), ks_entropy(G) + ks_entropy(R), 1e-12);
  EXPECT_NEAR(ks_entropy(product_system(product_system(C, G), R)), ks_entropy(C) + ks_entropy(G) + ks_entropy(R),
              1e-12);
}

TEST(BlockEntropy, FairCoinLongBlocks) {
  EXPECT_NEAR(block_entropy_estimate(half_coin(), 8, 1000000, 1), kLog2, 1e-2);
}

TEST(BlockEntropy, CycleIsZero) {
  auto C = cyclic_permutation(3);
  for (int n = 2; n <= 5; ++n) EXPECT_NEAR(block_entropy_estimate(C, n, required_sample(C, n), 3), 0.0, 1e-12);
}

TEST(BlockEntropy, GoldenMeanWithinTolerance) {
  auto G = golden_mean();
  EXPECT_NEAR(block_entropy_estimate(G, 6, 200000, 5), ks_entropy(G), 1e-2);
}

TEST(BlockEntropy, ShortSampleReportsRequiredLength) {
  try {
    block_entropy_estimate(half_coin(), 10, 1000, 1);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find(std::to_string(required_sample(half_coin(), 10))), std::string::npos);
  }
}

TEST(BlockEntropy, IsReproducible) {
  auto R = random_irreducible(3, 4);
  EXPECT_EQ(block_entropy_estimate(R, 4, 5000, 9), block_entropy_estimate(R, 4, 5000, 9));
}

TEST(Induce, EmptySubsetIsAnError) {
  EXPECT_THROW(induce(half_coin(), {}, 10), PreconditionError);
  EXPECT_THROW(induce(half_coin(), {3}, 10), PreconditionError);
  EXPECT_THROW(induce(half_coin(), {0}, 0), PreconditionError);
}

TEST(Induce, WholeSpaceIsTheChainItself) {
  auto M = random_irreducible(4, 2);
  auto I = induce(M, {0, 1, 2, 3}, 5);
  EXPECT_EQ(I.leftover(), 0.0);
  EXPECT_NEAR(I.expected_return(), 1.0, 1e-15);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) EXPECT_NEAR(I.hop[a][b], M.pi(a) * M.P(a, b), 1e-15);
  EXPECT_NEAR(I.entropy(), ks_entropy(M), 1e-14);
  EXPECT_NEAR(abramov_invariant(M, {0, 1, 2, 3}, 1), ks_entropy(M), 1e-14);
}

TEST(Induce, FairCoinGeometricReturns) {
  auto I = induce(half_coin(), {0}, 40);
  for (int t = 1; t <= 40; ++t) EXPECT_NEAR(I.return_mass[t], std::ldexp(1.0, -t), 1e-15);
  EXPECT_NEAR(I.expected_return(), geometric_expected_return(40), 1e-12);
  EXPECT_NEAR(I.expected_return(), 2, 1e-9);
}

TEST(Induce, GoldenMeanKacExact) {
  auto G = golden_mean(Rational(1, 2));
  Rational left;
  for (int R : {5, 20, 60}) {
    auto e = expected_return_exact(G, {1}, R, &left);
    EXPECT_EQ(e, golden_expected_return(Rational(1, 2), R));
    EXPECT_LE(e, 3);
    EXPECT_NEAR(to_double(e), induce(G, {1}, R).expected_return(), 1e-12);
  }
  EXPECT_LT(3 - to_double(expected_return_exact(G, {1}, 60, &left)), 1e-15);
  EXPECT_GT(left, 0);
}

TEST(Induce, KacForAnySubset) {
  auto M = random_irreducible(5, 8);
  for (std::vector<int> A : {std::vector<int>{0}, {1, 3}, {0, 2, 4}}) {
    Rational left;
    auto e = expected_return_exact(M, A, 80, &left);
    auto I = induce(M, A, 80);
    EXPECT_NEAR(to_double(e), I.expected_return(), 1e-10);
    EXPECT_NEAR(to_double(left), I.leftover(), 1e-12);
    EXPECT_NEAR(induce(M, A, 800).expected_return(), 1 / I.measure, 1e-9);
  }
}

TEST(Induce, MassBalancesAndKacIsMonotone) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto M = random_irreducible(3 + static_cast<int>(seed % 4), seed);
    for (int a = 0; a < M.size(); ++a) {
      double prev = 0;
      for (int R : {1, 2, 4, 8, 16, 32}) {
        auto I = induce(M, {a}, R);
        EXPECT_NEAR(I.returned() + I.leftover(), 1, 1e-12);
        EXPECT_GE(I.expected_return(), prev);
        EXPECT_LE(I.expected_return(), 1 / I.measure + 1e-12);
        prev = I.expected_return();
      }
    }
  }
}

TEST(Induce, ExactNeedsRationalChain) {
  EXPECT_THROW(expected_return_exact(golden_mean(), {1}, 5), PreconditionError);
}

TEST(Abramov, FairCoinClosedForm) {
  auto I = induce(half_coin(), {0}, 64);
  double words = 0;
  for (int t = 1; t <= 64; ++t) words += t * kLog2 * std::ldexp(1.0, -t);
  EXPECT_NEAR(I.entropy(), words, 1e-12);
  EXPECT_NEAR(I.entropy(), 2 * kLog2, 1e-9);
  EXPECT_NEAR(abramov_invariant(half_coin(), {0}, 64), kLog2, 1e-9);
}

TEST(Abramov, GoldenMeanSingletonsAgree) {
  auto G = golden_mean();
  EXPECT_NEAR(abramov_invariant(G, {0}, 80), abramov_invariant(G, {1}, 80), 1e-6);
  EXPECT_NEAR(abramov_invariant(G, {1}, 80), ks_entropy(G), 1e-9);
}

TEST(Abramov, AllSingletonsOnSmallChains) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto M = random_irreducible(2 + static_cast<int>(seed % 5), 100 + seed);
    for (int a = 0; a < M.size(); ++a) {
      double gap = ks_entropy(M) - abramov_invariant(M, {a}, 200);
      double bound = abramov_truncation_bound(M, {a}, 200);
      EXPECT_GE(gap, -1e-12);
      EXPECT_LE(gap, bound + 1e-12);
    }
  }
}

TEST(Abramov, TruncationBoundShrinks) {
  auto M = random_irreducible(4, 2);
  double b200 = abramov_truncation_bound(M, {0}, 200), b400 = abramov_truncation_bound(M, {0}, 400);
  EXPECT_GT(b200, ks_entropy(M) - abramov_invariant(M, {0}, 200));
  EXPECT_LT(b400, b200);
  EXPECT_NEAR(abramov_invariant(M, {0}, 400), ks_entropy(M), 1e-9);
}

TEST(Abramov, LargerSubsets) {
  auto M = random_irreducible(5, 21);
  for (std::vector<int> A : {std::vector<int>{0, 1}, {2, 3, 4}, {0, 2}})
    EXPECT_NEAR(abramov_invariant(M, A, 200), ks_entropy(M), 1e-9);
}

TEST(Kakutani, PeriodTwoIsExact) {
  auto C = cyclic_permutation(2);
  auto r = kakutani_pairing_check(C, {0}, {1}, {0}, {1}, 4);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.crossing_defect, 0.0);
  EXPECT_EQ(r.law_defect, 0.0);
  EXPECT_EQ(r.leftover, 0.0);
}

TEST(Kakutani, OverlapIsAnError) {
  auto C = cyclic_permutation(2);
  EXPECT_THROW(kakutani_pairing_check(C, {0, 1}, {1}, {0, 1}, {1}, 4), PreconditionError);
  EXPECT_THROW(kakutani_pairing_check(C, {0}, {1}, {1}, {0}, 4), PreconditionError);
}

TEST(Kakutani, AlternatingTowerPairs) {
  auto M = alternating_tower(Rational(1, 2));
  auto r = kakutani_pairing_check(M, {2, 3}, {0, 1}, {2}, {0}, 40);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.crossing_defect, 0.0);
  EXPECT_LE(r.leftover, 1e-9);
  EXPECT_LE(r.law_defect, 1e-9);
}

TEST(Kakutani, SquaredLawMatchesDirectWordByWord) {
  auto M = alternating_tower(Rational(1, 3));
  auto onU = return_words(M, {0, 2}, 12);
  auto direct = return_words(M, {0}, 24);
  // s u^j t v^k s has probability (1/3)^j (2/3) (1/3)^k (2/3)
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      Word w{0};
      w.insert(w.end(), j, 1);
      w.push_back(2);
      w.insert(w.end(), k, 3);
      w.push_back(0);
      double expect = std::pow(1.0 / 3, j + k) * 4.0 / 9;
      EXPECT_NEAR(direct[0][w], expect, 1e-15);
    }
  EXPECT_EQ(onU[0].size(), 12u);
}

TEST(Kakutani, FailsWithoutAlternation) {
  auto r = kakutani_pairing_check(half_coin(), {0}, {1}, {0}, {1}, 30);
  EXPECT_FALSE(r.holds);
  EXPECT_NEAR(r.crossing_defect, 0.5, 1e-12);
}

TEST(Kakutani, WordEnumerationLimit) {
  EXPECT_THROW(return_words(random_irreducible(4, 1), {0}, 30, 1000), PreconditionError);
}

TEST(ProductStructure, AnnulusChainsAreProducts) {
  for (int n = 1; n <= 4; ++n) {
    auto F = annulus_chain(n, Rational(n, 3), Rational(1, 5));
    auto ps = verify_product_structure(F);
    EXPECT_TRUE(ps.product) << ps.reason;
    EXPECT_EQ(ps.cycle0_incoming.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(ps.links.size(), F.gluings.size());
    Rational total = 0;
    for (const auto& l : ps.links) total += l.measure;
    EXPECT_EQ(total, Rational(n, 3) * n);
  }
}

TEST(ProductStructure, GraftBreaksIt) {
  auto F = annulus_chain(3, 1, Rational(2, 7), 4, 2);
  auto G = graft_handles(F, {{{1, 5, Rational(1, 4)}}});
  auto ps = verify_product_structure(G);
  EXPECT_FALSE(ps.product);
  EXPECT_NE(ps.reason.find("not an annulus"), std::string::npos);
}

TEST(ProductStructure, NonAnnulusPileFails) {
  auto ps = verify_product_structure(four_holed_grid(1, Rational(1, 3), Rational(1, 5)));
  EXPECT_FALSE(ps.product);
  EXPECT_FALSE(verify_product_structure(sphere_foliation()).product);
}

TEST(ProductStructure, InconsistentTwistPattern) {
  PrismaticFoliation F{"twisted", {}, {}, Ends::Two};
  for (const char* name : {"A", "B"}) {
    auto P = make_pile(name, grid_annulus(4, 1), 1);
    for (auto& cyc : P.blocks) cyc = {Block{"x", Rational(1, 2)}, Block{"y", Rational(1, 2)}};
    F.piles.push_back(P);
  }
  F.gluings.push_back({{0, 0, "x"}, {1, 0, "x"}, 0});
  F.gluings.push_back({{0, 0, "y"}, {1, 1, "x"}, 0});
  ASSERT_TRUE(validate_foliation(F).violations.empty());
  auto ps = verify_product_structure(F);
  EXPECT_FALSE(ps.product);
  EXPECT_NE(ps.reason.find("consistently"), std::string::npos);
}

TEST(ProductStructure, FlippedPilesStillConsistent) {
  PrismaticFoliation F{"flipped", {}, {}, Ends::Two};
  F.piles.push_back(make_pile("A", grid_annulus(4, 1), 1));
  F.piles.push_back(make_pile("B", grid_annulus(4, 1), 1));
  add_identity(F, 0, 1, 1, 1);
  add_identity(F, 1, 0, 0, 0);
  auto ps = verify_product_structure(F);
  EXPECT_TRUE(ps.product) << ps.reason;
  EXPECT_NE(ps.cycle0_incoming[0], ps.cycle0_incoming[1]);
}

TEST(MarkovIo, RoundTripExact) {
  MarkovFile f{random_irreducible(3, 5), {{{0}, 64}, {{1, 2}, 10}}};
  auto text = serialize_markov(f);
  auto g = parse_markov(text);
  EXPECT_TRUE(g.system.exact.has_value());
  EXPECT_EQ(*g.system.exact, *f.system.exact);
  EXPECT_EQ(g.experiments, f.experiments);
  EXPECT_EQ(serialize_markov(g), text);
}

TEST(MarkovIo, RoundTripDecimal) {
  MarkovFile f{golden_mean(), {{{1}, 64}}};
  auto g = parse_markov(serialize_markov(f));
  EXPECT_FALSE(g.system.exact.has_value());
  EXPECT_EQ(max_abs(g.system.P - f.system.P), 0.0);
  EXPECT_EQ(serialize_markov(g), serialize_markov(f));
}

TEST(MarkovIo, Errors) {
  auto line_of = [](const std::string& text) {
    try {
      parse_markov(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of(""), 1u);
  EXPECT_EQ(line_of("row 0 1\n"), 1u);
  EXPECT_EQ(line_of("markov m\nrow 0 1/2 1/2\nrow 1 1\n"), 3u);
  EXPECT_EQ(line_of("markov m\nrow 0 1/2 1/2\nrow 0 1 0\n"), 3u);
  EXPECT_EQ(line_of("markov m\nrow 0 1/2 1/3\nrow 1 1 0\n"), 1u);
  EXPECT_EQ(line_of("markov m\nrow 0 1\ninduce A=2 R=4\n"), 3u);
  EXPECT_EQ(line_of("markov m\nrow 0 1\ninduce A=0 R=0\n"), 3u);
  EXPECT_EQ(line_of("markov m\nrow 0 1\nbogus\n"), 3u);
  EXPECT_EQ(line_of("markov m\nrow 0 abc\n"), 2u);
  EXPECT_EQ(line_of("markov m\nrow 1 1\n"), 2u);
}
