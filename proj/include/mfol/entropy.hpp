#pragma once

// Markov shifts as symbolic models of first-return maps: Kolmogorov-Sinai
// entropy, first-return (induced) maps on subsets of states, the Abramov
// product h(γ_A)·μ(A), the Kakutani pairing identity, and the product
// structure test for foliations by annuli.

#include "mfol/foliation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <random>

namespace mfol {

struct MarkovSystem {
  std::string name;
  Eigen::MatrixXd P;
  /// Exact transition matrix when the input was rational.
  std::optional<std::vector<std::vector<Rational>>> exact;
  Eigen::VectorXd pi;

  int size() const { return static_cast<int>(P.rows()); }
};

inline std::vector<std::string> markov_errors(const Eigen::MatrixXd& P) {
  std::vector<std::string> out;
  if (P.rows() == 0 || P.rows() != P.cols()) {
    out.push_back("transition matrix must be square and nonempty");
    return out;
  }
  for (int i = 0; i < P.rows(); ++i) {
    if ((P.row(i).array() < 0).any()) out.push_back("row " + std::to_string(i) + " has a negative entry");
    if (std::abs(P.row(i).sum() - 1) > 1e-12) out.push_back("row " + std::to_string(i) + " does not sum to 1");
  }
  return out;
}

inline bool is_irreducible(const Eigen::MatrixXd& P) {
  const int n = static_cast<int>(P.rows());
  auto reach = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v)
        if ((transpose ? P(v, u) : P(u, v)) > 0 && !seen[v]) seen[v] = true, stack.push_back(v);
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return n > 0 && reach(false) && reach(true);
}

/// Solves πP = π, Σπ = 1.
inline Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P) {
  const auto n = P.rows();
  Eigen::MatrixXd A(n + 1, n);
  A.topRows(n) = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b(n) = 1;
  Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);
  if ((pi.transpose() * P - pi.transpose()).cwiseAbs().maxCoeff() > 1e-12 || std::abs(pi.sum() - 1) > 1e-12)
    throw Error("no unique stationary distribution");
  return pi;
}

inline MarkovSystem make_markov(std::string name, Eigen::MatrixXd P) {
  auto errs = markov_errors(P);
  if (!errs.empty()) throw ValidationError("markov '" + name + "': " + errs.front());
  MarkovSystem M{std::move(name), std::move(P), std::nullopt, {}};
  M.pi = stationary_distribution(M.P);
  return M;
}

inline MarkovSystem make_markov(std::string name, const std::vector<std::vector<Rational>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd P(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n)
      throw ValidationError("markov '" + name + "': row " + std::to_string(i) + " has the wrong length");
    Rational sum = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      P(i, j) = to_double(rows[i][j]);
      sum += rows[i][j];
    }
    if (sum != 1) throw ValidationError("markov '" + name + "': row " + std::to_string(i) + " does not sum to 1");
  }
  auto M = make_markov(std::move(name), P);
  M.exact = rows;
  return M;
}

inline MarkovSystem bernoulli(const std::vector<Rational>& p) {
  return make_markov("bernoulli", std::vector<std::vector<Rational>>(p.size(), p));
}

inline MarkovSystem cyclic_permutation(int n) {
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, 0));
  for (int i = 0; i < n; ++i) rows[i][(i + 1) % n] = 1;
  return make_markov("cycle" + std::to_string(n), rows);
}

/// Golden-mean shift (no two consecutive 1s) with its Parry measure.
inline MarkovSystem golden_mean() {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  Eigen::MatrixXd P(2, 2);
  P << 1 / phi, 1 / (phi * phi), 1, 0;
  return make_markov("golden-mean", P);
}

/// Golden-mean shift with the rational measure p(0→0) = p.
inline MarkovSystem golden_mean(const Rational& p) {
  return make_markov("golden-mean", std::vector<std::vector<Rational>>{{p, 1 - p}, {1, 0}});
}

inline MarkovSystem random_irreducible(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
  for (auto& row : rows) {
    std::vector<int> w(n);
    int total = 0;
    for (auto& x : w) total += (x = 1 + static_cast<int>(rng() % 9));
    for (int j = 0; j < n; ++j) row[j] = Rational(w[j], total);
  }
  return make_markov("random" + std::to_string(n), rows);
}

/// Four states s=0, u=1, t=2, v=3 driven by a coin of bias p: from s or u
/// stay in u with probability p, else jump to t; from t or v stay in v with
/// probability p, else jump to s. First returns to {s, t} alternate sides.
inline MarkovSystem alternating_tower(const Rational& p) {
  if (p < 0 || p >= 1) throw PreconditionError("coin bias must lie in [0, 1)");
  Rational q = 1 - p;
  return make_markov("alternating-tower", std::vector<std::vector<Rational>>{
                                              {0, p, q, 0}, {0, p, q, 0}, {q, 0, 0, p}, {q, 0, 0, p}});
}

inline MarkovSystem product_system(const MarkovSystem& a, const MarkovSystem& b) {
  Eigen::MatrixXd P(a.size() * b.size(), a.size() * b.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) P.block(i * b.size(), j * b.size(), b.size(), b.size()) = a.P(i, j) * b.P;
  return make_markov(a.name + "x" + b.name, P);
}

inline double plogp(double p) { return p > 0 ? -p * std::log(p) : 0.0; }

/// h = −Σ π_i Σ p_ij log p_ij, in nats.
inline double ks_entropy(const MarkovSystem& M) {
  auto errs = markov_errors(M.P);
  if (!errs.empty()) throw ValidationError("markov '" + M.name + "': " + errs.front());
  double h = 0;
  for (int i = 0; i < M.size(); ++i)
    for (int j = 0; j < M.size(); ++j) h += M.pi(i) * plogp(M.P(i, j));
  return h;
}

inline std::size_t required_sample(const MarkovSystem& M, int n) {
  return static_cast<std::size_t>(16 * std::pow(static_cast<double>(M.size()), n));
}

/// H_n − H_(n−1) of n-block frequencies along one sampled trajectory
/// started from π.
inline double block_entropy_estimate(const MarkovSystem& M, int n, std::size_t length, std::uint64_t seed = 1) {
  if (n < 1) throw PreconditionError("block length must be at least 1");
  if (!is_irreducible(M.P)) throw PreconditionError("block estimate needs an irreducible chain");
  auto need = required_sample(M, n);
  if (length < need)
    throw PreconditionError("sample of " + std::to_string(length) + " is too short for blocks of length " +
                            std::to_string(n) + "; need at least " + std::to_string(need));
  std::mt19937_64 rng(seed);
  std::vector<std::discrete_distribution<int>> step(M.size());
  for (int i = 0; i < M.size(); ++i) {
    std::vector<double> row(M.size());
    for (int j = 0; j < M.size(); ++j) row[j] = M.P(i, j);
    step[i] = std::discrete_distribution<int>(row.begin(), row.end());
  }
  std::vector<double> pi(M.pi.data(), M.pi.data() + M.size());
  std::discrete_distribution<int> start(pi.begin(), pi.end());
  std::vector<int> x(length);
  x[0] = start(rng);
  for (std::size_t t = 1; t < length; ++t) x[t] = step[x[t - 1]](rng);
  std::map<std::vector<int>, std::size_t> blocks, prefixes;
  std::size_t windows = length - static_cast<std::size_t>(n) + 1;
  for (std::size_t t = 0; t < windows; ++t) {
    std::vector<int> w(x.begin() + static_cast<std::ptrdiff_t>(t), x.begin() + static_cast<std::ptrdiff_t>(t) + n);
    ++blocks[w];
    w.pop_back();
    ++prefixes[w];
  }
  auto H = [&](const std::map<std::vector<int>, std::size_t>& counts) {
    double h = 0;
    for (auto& [w, c] : counts) h += plogp(static_cast<double>(c) / static_cast<double>(windows));
    return h;
  };
  return H(blocks) - H(prefixes);
}

inline std::vector<int> normalized_subset(const MarkovSystem& M, std::vector<int> A) {
  std::sort(A.begin(), A.end());
  A.erase(std::unique(A.begin(), A.end()), A.end());
  if (A.empty()) throw PreconditionError("subset is empty");
  for (int a : A)
    if (a < 0 || a >= M.size()) throw PreconditionError("state " + std::to_string(a) + " is not in '" + M.name + "'");
  return A;
}

inline double subset_measure(const MarkovSystem& M, const std::vector<int>& A) {
  double m = 0;
  for (int a : normalized_subset(M, A)) m += M.pi(a);
  return m;
}

/// First-return map to A, truncated at return time R. Words run from a
/// start in A through states outside A to the first state back in A
/// (both ends included); their laws are tracked per start state.
struct InducedMap {
  std::vector<int> subset;
  int max_return = 0;
  double measure = 0;
  /// μ̂(a) = π_a / μ(A).
  std::vector<double> start_weight;
  /// Entropy of the return word given its start state, truncated at R.
  std::vector<double> word_entropy;
  /// Probability, given the start, that no return happened by time R.
  std::vector<double> start_leftover;
  /// μ̂-weighted mass of returns at time t = 1..R (index t).
  std::vector<double> return_mass;
  /// μ̂-weighted probability of returning from a to b, by [a][b] position in subset.
  std::vector<std::vector<double>> hop;
  /// max −log p over positive transitions.
  double max_surprisal = 0;

  double leftover() const {
    double l = 0;
    for (std::size_t i = 0; i < subset.size(); ++i) l += start_weight[i] * start_leftover[i];
    return l;
  }
  double returned() const { return std::accumulate(return_mass.begin(), return_mass.end(), 0.0); }
  double expected_return() const {
    double e = 0;
    for (std::size_t t = 1; t < return_mass.size(); ++t) e += static_cast<double>(t) * return_mass[t];
    return e;
  }
  /// E[T; T > R] by Kac: 1/μ(A) − E[T; T ≤ R].
  double tail_return() const { return std::max(0.0, 1 / measure - expected_return()); }
  /// Upper bound on the word entropy lost by truncating at R: a word of
  /// length t has probability at least exp(−t·max_surprisal).
  double entropy_tail_bound() const { return max_surprisal * tail_return(); }
  /// h(γ_A): the return-word process is Markov with transitions depending
  /// only on the end state, so its entropy is Σ_a μ̂(a) H(word | a).
  double entropy() const {
    double h = 0;
    for (std::size_t i = 0; i < subset.size(); ++i) h += start_weight[i] * word_entropy[i];
    return h;
  }
};

/// Dynamic programming over first-passage paths: the mass of paths ending
/// in each outside state and their summed −p log p.
inline InducedMap induce(const MarkovSystem& M, std::vector<int> A, int R) {
  A = normalized_subset(M, A);
  if (R < 1) throw PreconditionError("maximum return time must be at least 1");
  InducedMap I;
  I.subset = A;
  I.max_return = R;
  I.measure = subset_measure(M, A);
  if (I.measure <= 0) throw PreconditionError("subset has measure zero");
  const int n = M.size();
  std::vector<int> pos(n, -1);
  for (std::size_t i = 0; i < A.size(); ++i) pos[A[i]] = static_cast<int>(i);
  I.return_mass.assign(R + 1, 0.0);
  I.hop.assign(A.size(), std::vector<double>(A.size(), 0.0));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (M.P(x, y) > 0) I.max_surprisal = std::max(I.max_surprisal, -std::log(M.P(x, y)));
  for (std::size_t i = 0; i < A.size(); ++i) {
    double w = M.pi(A[i]) / I.measure;
    I.start_weight.push_back(w);
    std::vector<double> mass(n, 0.0), ent(n, 0.0);
    double h = 0;
    for (int y = 0; y < n; ++y) {
      double q = M.P(A[i], y);
      if (q <= 0) continue;
      if (pos[y] >= 0) {
        h += plogp(q);
        I.return_mass[1] += w * q;
        I.hop[i][pos[y]] += w * q;
      } else {
        mass[y] += q;
        ent[y] += plogp(q);
      }
    }
    for (int t = 2; t <= R; ++t) {
      std::vector<double> m2(n, 0.0), e2(n, 0.0);
      for (int x = 0; x < n; ++x) {
        if (mass[x] <= 0) continue;
        for (int y = 0; y < n; ++y) {
          double q = M.P(x, y);
          if (q <= 0) continue;
          double pm = mass[x] * q;
          double pe = q * ent[x] + mass[x] * plogp(q);
          if (pos[y] >= 0) {
            h += pe;
            I.return_mass[t] += w * pm;
            I.hop[i][pos[y]] += w * pm;
          } else {
            m2[y] += pm;
            e2[y] += pe;
          }
        }
      }
      mass = std::move(m2);
      ent = std::move(e2);
    }
    I.word_entropy.push_back(h);
    I.start_leftover.push_back(std::accumulate(mass.begin(), mass.end(), 0.0));
  }
  return I;
}

/// Expected return time to A restricted to returns by time R, in exact
/// arithmetic. Needs a rational transition matrix.
inline Rational expected_return_exact(const MarkovSystem& M, std::vector<int> A, int R, Rational* leftover = nullptr) {
  if (!M.exact) throw PreconditionError("markov '" + M.name + "' has no exact transition matrix");
  A = normalized_subset(M, A);
  const auto& P = *M.exact;
  const int n = M.size();
  std::vector<std::vector<Rational>> sys(n + 1, std::vector<Rational>(n + 1, 0));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) sys[j][i] = P[i][j];
    sys[j][j] -= 1;
  }
  for (int i = 0; i < n; ++i) sys[n][i] = 1;
  sys[n][n] = 1;
  std::vector<Rational> pi(n, 0);
  {
    int rows = n + 1, row = 0;
    std::vector<int> pivot_col;
    for (int c = 0; c < n && row < rows; ++c) {
      int p = row;
      while (p < rows && sys[p][c] == 0) ++p;
      if (p == rows) continue;
      std::swap(sys[p], sys[row]);
      for (int r = 0; r < rows; ++r)
        if (r != row && sys[r][c] != 0) {
          Rational f = sys[r][c] / sys[row][c];
          for (int k = c; k <= n; ++k) sys[r][k] -= f * sys[row][k];
        }
      pivot_col.push_back(c);
      ++row;
    }
    if (static_cast<int>(pivot_col.size()) != n) throw Error("no unique stationary distribution");
    for (int r = 0; r < n; ++r) pi[pivot_col[r]] = sys[r][n] / sys[r][pivot_col[r]];
  }
  Rational mu = 0;
  for (int a : A) mu += pi[a];
  std::vector<bool> in(n, false);
  for (int a : A) in[a] = true;
  Rational expected = 0, left = 0;
  for (int a : A) {
    std::vector<Rational> mass(n, 0);
    Rational w = pi[a] / mu;
    for (int y = 0; y < n; ++y) {
      if (in[y]) expected += w * P[a][y];
      else mass[y] += P[a][y];
    }
    for (int t = 2; t <= R; ++t) {
      std::vector<Rational> m2(n, 0);
      for (int x = 0; x < n; ++x) {
        if (mass[x] == 0) continue;
        for (int y = 0; y < n; ++y) {
          if (P[x][y] == 0) continue;
          if (in[y]) expected += w * t * mass[x] * P[x][y];
          else m2[y] += mass[x] * P[x][y];
        }
      }
      mass = std::move(m2);
    }
    for (auto& m : mass) left += w * m;
  }
  if (leftover) *leftover = left;
  return expected;
}

/// h(γ_A)·μ(A) computed on the return-word process.
inline double abramov_invariant(const MarkovSystem& M, const std::vector<int>& A, int R) {
  return induce(M, A, R).entropy() * subset_measure(M, A);
}

/// Bound on ks_entropy(M) − abramov_invariant(M, A, R) due to truncation.
inline double abramov_truncation_bound(const MarkovSystem& M, const std::vector<int>& A, int R) {
  auto I = induce(M, A, R);
  return I.measure * I.entropy_tail_bound();
}

using Word = std::vector<int>;
using WordLaw = std::map<Word, double>;

/// Return words from each start in A with their probabilities, enumerated
/// explicitly up to length R; paths still running at R are dropped.
inline std::map<int, WordLaw> return_words(const MarkovSystem& M, std::vector<int> A, int R,
                                           std::size_t limit = 200000) {
  A = normalized_subset(M, A);
  std::vector<bool> in(M.size(), false);
  for (int a : A) in[a] = true;
  std::map<int, WordLaw> out;
  std::size_t count = 0;
  for (int a : A) {
    std::vector<std::pair<Word, double>> open{{{a}, 1.0}};
    for (int t = 1; t <= R && !open.empty(); ++t) {
      std::vector<std::pair<Word, double>> next;
      for (auto& [w, p] : open)
        for (int y = 0; y < M.size(); ++y) {
          double q = M.P(w.back(), y);
          if (q <= 0) continue;
          Word w2 = w;
          w2.push_back(y);
          if (in[y]) out[a][w2] += p * q;
          else next.push_back({std::move(w2), p * q});
          if (++count > limit) throw PreconditionError("return-word enumeration exceeds " + std::to_string(limit) + " paths");
        }
      open = std::move(next);
    }
  }
  return out;
}

struct PairingReport {
  bool holds = false;
  /// Mass of first returns to S′∪T′ that stay on the same side.
  double crossing_defect = 0;
  /// Total variation between γ²_{S′∪T′} and the direct first-return laws.
  double law_defect = 0;
  /// Largest probability, over starts in S′∪T′, of no return by R.
  double leftover = 0;
};

/// γ_{S′∪T′} swaps S′ and T′, and its square restricted to S′ (resp. T′) has
/// the return-word law of γ_{S′} (resp. γ_{T′}).
inline PairingReport kakutani_pairing_check(const MarkovSystem& M, const std::vector<int>& T, const std::vector<int>& S,
                                            const std::vector<int>& Tp, const std::vector<int>& Sp, int R,
                                            double tolerance = 1e-9) {
  auto t = normalized_subset(M, T), s = normalized_subset(M, S);
  auto tp = normalized_subset(M, Tp), sp = normalized_subset(M, Sp);
  for (int x : sp)
    if (std::binary_search(tp.begin(), tp.end(), x)) throw PreconditionError("S′ and T′ overlap at state " + std::to_string(x));
  if (!std::includes(t.begin(), t.end(), tp.begin(), tp.end())) throw PreconditionError("T′ is not contained in T");
  if (!std::includes(s.begin(), s.end(), sp.begin(), sp.end())) throw PreconditionError("S′ is not contained in S");
  std::vector<int> U = tp;
  U.insert(U.end(), sp.begin(), sp.end());
  auto onU = return_words(M, U, R);
  PairingReport rep;
  auto side = [&](int x) { return std::binary_search(sp.begin(), sp.end(), x); };
  for (int a : U) {
    double returned = 0;
    for (auto& [w, p] : onU[a]) {
      returned += p;
      if (side(w.front()) == side(w.back())) rep.crossing_defect += M.pi(a) * p;
    }
    rep.leftover = std::max(rep.leftover, std::max(1 - returned, 0.0));
  }
  for (const auto* part : {&sp, &tp}) {
    auto direct = return_words(M, *part, 2 * R);
    for (int a : *part) {
      WordLaw squared;
      for (auto& [w1, p1] : onU[a]) {
        if (side(w1.back()) == side(a)) continue;
        for (auto& [w2, p2] : onU[w1.back()]) {
          if (side(w2.back()) != side(a)) continue;
          Word w = w1;
          w.insert(w.end(), w2.begin() + 1, w2.end());
          squared[w] += p1 * p2;
        }
      }
      double diff = 0;
      std::set<Word> keys;
      for (auto& [w, p] : squared) keys.insert(w);
      for (auto& [w, p] : direct[a])
        if (static_cast<int>(w.size()) - 1 <= R) keys.insert(w);
      for (const auto& w : keys) {
        double x = squared.count(w) ? squared[w] : 0.0;
        double y = direct[a].count(w) ? direct[a][w] : 0.0;
        diff += std::abs(x - y);
      }
      rep.law_defect += M.pi(a) * diff;
    }
  }
  rep.holds = rep.crossing_defect <= tolerance && rep.law_defect <= tolerance + 4 * rep.leftover;
  return rep;
}

/// Quotient of a foliation by annuli onto its circle factor: one interval
/// per pile, one edge per block gluing, oriented from the outgoing side.
struct ProductStructure {
  bool product = false;
  std::string reason;
  /// Per pile, whether cycle 0 is the incoming side.
  std::vector<bool> cycle0_incoming;
  struct Link {
    BlockRef from, to;
    Rational measure;
  };
  std::vector<Link> links;
};

inline ProductStructure verify_product_structure(const PrismaticFoliation& F) {
  ProductStructure out;
  auto report = validate_foliation(F);
  if (!report.violations.empty()) {
    out.reason = "invalid foliation: " + report.violations.front();
    return out;
  }
  for (const auto& p : F.piles) {
    auto c = classify_surface(p.base);
    if (!c.orientable || c.genus != 0 || c.boundary_count != 2) {
      out.reason = "pile '" + p.name + "' is not an annulus (" + to_string(c) + ")";
      return out;
    }
  }
  // role(p, c) = incoming iff c == 0 xor flipped[p]; every gluing joins an
  // incoming side to an outgoing one.
  const std::size_t n = F.piles.size();
  std::vector<int> flip(n, -1);
  std::map<std::size_t, std::vector<std::pair<std::size_t, int>>> adj;
  for (const auto& g : F.gluings) {
    int parity = (g.a.cycle == g.b.cycle) ? 1 : 0;  // same cycle index: flips must differ
    adj[g.a.pile].push_back({g.b.pile, parity});
    adj[g.b.pile].push_back({g.a.pile, parity});
    if (g.a.pile == g.b.pile && g.a.cycle == g.b.cycle) {
      out.reason = "gluing " + to_string(g.a, F) + " to " + to_string(g.b, F) + " joins a side to itself";
      return out;
    }
  }
  for (std::size_t root = 0; root < n; ++root) {
    if (flip[root] >= 0) continue;
    flip[root] = 0;
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto [v, parity] : adj[u]) {
        int want = flip[u] ^ parity;
        if (flip[v] < 0) {
          flip[v] = want;
          stack.push_back(v);
        } else if (flip[v] != want) {
          out.reason = "sides of piles '" + F.piles[u].name + "' and '" + F.piles[v].name + "' cannot be oriented consistently";
          return out;
        }
      }
    }
  }
  out.product = true;
  for (std::size_t p = 0; p < n; ++p) out.cycle0_incoming.push_back(flip[p] == 0);
  for (const auto& g : F.gluings) {
    bool a_out = (g.a.cycle == 0) == (flip[g.a.pile] != 0);
    auto m = find_block(F, g.a)->first.measure;
    if (a_out) out.links.push_back({g.a, g.b, m});
    else out.links.push_back({g.b, g.a, m});
  }
  return out;
}

}  // namespace mfol
