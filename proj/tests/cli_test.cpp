#include "mfol/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

using namespace mfol;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
  bool has(const std::string& s) const { return out.find(s) != std::string::npos; }
};

class Cli : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    dir = fs::temp_directory_path() / ("mfol_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
  }
  std::string path(const std::string& name) { return (dir / name).string(); }
  std::string write(const std::string& name, const std::string& text) {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  std::string generate(const std::string& family, const std::string& name, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"generate", family, "-o", path(name)};
    args.insert(args.end(), extra.begin(), extra.end());
    EXPECT_EQ(run(args).code, 0);
    return path(name);
  }
};

}  // namespace

TEST_F(Cli, SphereEu) {
  auto r = run({"eu", generate("sphere", "sphere.fol")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Eu = 2\n");
}

TEST_F(Cli, DecomposePlanarModel) {
  auto r = run({"decompose", generate("annulus-chain", "model.fol")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.has("T = ∅, Eu(F0) = 0\n")) << r.out;
}

TEST_F(Cli, SurgeryThenDecomposeRecoversMeasure) {
  auto in = generate("graft", "g.fol", {"--size", "3"});
  auto s = run({"surgery", in, "-o", path("out.fol")});
  EXPECT_EQ(s.code, 0) << s.err;
  EXPECT_TRUE(s.has("mu(T): 3/2 (1.5)"));
  EXPECT_TRUE(s.has("Eu(F#T): -3\n"));
  EXPECT_TRUE(s.has("graft identity: holds"));
  auto d = run({"decompose", path("out.fol")});
  EXPECT_EQ(d.code, 0) << d.err;
  EXPECT_TRUE(d.has("mu(T): 3/2"));
  EXPECT_TRUE(d.has("Eu(F0): 0\n"));
  EXPECT_TRUE(d.has("planar: yes"));
}

TEST_F(Cli, SurgeryNeedsPoints) {
  auto r = run({"surgery", generate("sphere", "s.fol")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no transversal points"), std::string::npos);
}

TEST_F(Cli, ClassifyCells) {
  auto r = run({"classify", generate("grid", "grid.fol")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.has("sign: -"));
  EXPECT_TRUE(r.has("ends: 1"));
  EXPECT_TRUE(r.has("cell: Φ(ℂ)#_T | N.M. (non-amenable)"));
  auto a = run({"classify", generate("annulus-chain", "a.fol")});
  EXPECT_TRUE(a.has("cell: Φ(ℝ)×ℝ/ℤ\n")) << a.out;
}

TEST_F(Cli, EstimatedEndsWhenUndeclared) {
  auto text = serialize_foliation({four_holed_grid(1, Rational(1, 3), Rational(1, 5)), {}});
  text.erase(text.find("ends 1\n"), 7);
  auto r = run({"classify", write("grid.fol", text), "--depth", "12"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.has("ends-source: estimated (depth 12)"));
}

TEST_F(Cli, EntropyAbramovWithinTolerance) {
  auto r = run({"entropy", generate("golden", "golden.mkv"), "--induce", "A=1", "--R=64"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.has("within tolerance: yes"));
  auto abramov = r.out.substr(r.out.find("abramov: ") + 9);
  auto h = r.out.substr(r.out.find("h: ") + 3);
  EXPECT_NEAR(std::stod(abramov), std::stod(h), 1e-9);
}

TEST_F(Cli, EntropyExactChainReportsRationalReturnTime) {
  auto r = run({"entropy", generate("coin", "coin.mkv"), "--induce", "A=0", "--R", "3"});
  EXPECT_TRUE(r.has("expected return (exact): 11/8 (1.375)")) << r.out;
  EXPECT_TRUE(r.has("leftover: 0.125"));
}

TEST_F(Cli, ToleranceFromEnvironment) {
  auto f = generate("coin", "coin.mkv");
  ::setenv("MFOL_TOLERANCE", "1e-12", 1);
  auto tight = run({"entropy", f, "--induce", "A=0", "--R", "3"});
  ::setenv("MFOL_TOLERANCE", "1", 1);
  auto loose = run({"entropy", f, "--induce", "A=0", "--R", "3"});
  ::setenv("MFOL_TOLERANCE", "zero", 1);
  auto bad = run({"entropy", f});
  ::unsetenv("MFOL_TOLERANCE");
  auto flag = run({"entropy", f, "--induce", "A=0", "--R", "3", "--tolerance", "1"});
  EXPECT_EQ(loose.code, 0);
  EXPECT_TRUE(loose.has("within tolerance: yes"));
  EXPECT_EQ(flag.code, 0);
  EXPECT_EQ(bad.code, 1);
  // the fair-coin bound is attained exactly, so a tiny tolerance still passes
  EXPECT_EQ(tight.code, 0) << tight.out;
}

TEST_F(Cli, BlockEstimateIsDeterministic) {
  auto f = generate("golden", "g.mkv");
  auto a = run({"entropy", f, "--block", "5", "--seed", "4"});
  auto b = run({"entropy", f, "--block", "5", "--seed", "4"});
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto short_sample = run({"entropy", f, "--block", "8", "--samples", "10"});
  EXPECT_EQ(short_sample.code, 1);
  EXPECT_NE(short_sample.err.find("need at least"), std::string::npos);
}

TEST_F(Cli, ProductCheck) {
  auto yes = run({"product-check", generate("annulus-chain", "a.fol")});
  EXPECT_EQ(yes.code, 0);
  EXPECT_TRUE(yes.has("product: yes"));
  EXPECT_TRUE(yes.has("link: A0.1.a -> A1.0.a measure 1"));
  auto no = run({"product-check", generate("grid", "g.fol")});
  EXPECT_TRUE(no.has("product: no"));
  EXPECT_TRUE(no.has("not an annulus"));
}

TEST_F(Cli, ReduceExhaustion) {
  for (const char* ends : {"1", "2"}) {
    auto r = run({"reduce", generate("exhaustion", std::string("e") + ends, {"--size", "3", "--ends", ends})});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.has("nested: yes"));
    EXPECT_TRUE(r.has("optimal: yes"));
    EXPECT_TRUE(r.has(std::string("stage 2 simple: genus 2, boundary ") + ends));
  }
  auto h = run({"reduce", path("e1"), "--exact-limit", "0"});
  EXPECT_TRUE(h.has("optimal: heuristic"));
}

TEST_F(Cli, ReduceSurface) {
  auto r = run({"reduce", write("pants.srf", serialize_surface(orientable_surface(0, 3)))});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.has("boundary: 3"));
  EXPECT_TRUE(r.has("optimal: yes"));
}

TEST_F(Cli, RoundTripEveryKind) {
  std::vector<std::string> files{generate("graft", "g.fol"), generate("golden", "m.mkv"), generate("coin", "c.mkv"),
                                 generate("exhaustion", "e.txt"),
                                 write("t.srf", serialize_surface(orientable_surface(2, 1)))};
  for (const auto& f : files) {
    auto r = run({"roundtrip", f});
    EXPECT_EQ(r.code, 0) << f << r.err;
    EXPECT_TRUE(r.has("roundtrip: yes"));
  }
}

TEST_F(Cli, TruncatedFileReportsLine) {
  auto text = serialize_foliation({annulus_chain(2, 1, Rational(1, 3)), {}});
  text = text.substr(0, text.rfind("match"));
  text += "match A1.1.x\n";
  auto r = run({"roundtrip", write("cut.fol", text)});
  EXPECT_EQ(r.code, 1);
  auto lines = std::count(text.begin(), text.end(), '\n');
  EXPECT_NE(r.err.find("line " + std::to_string(lines) + ":"), std::string::npos) << r.err;
}

TEST_F(Cli, ValidateReportsViolations) {
  auto text = serialize_foliation({annulus_chain(2, 1, Rational(1, 3)), {}});
  auto pos = text.find("pile A1 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 9, "pile A1 2");
  auto r = run({"validate", write("bad.fol", text)});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.has("valid: no"));
  EXPECT_TRUE(r.has("violation: "));
}

TEST_F(Cli, UsageErrors) {
  auto unknown = run({"frobnicate", "x"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("valid verbs: validate, eu, classify, surgery, reduce, decompose, entropy, product-check"),
            std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"eu"}).code, 2);
  EXPECT_EQ(run({"classify", "x", "--depth", "1"}).code, 2);
  EXPECT_EQ(run({"entropy", "x", "--R", "-3"}).code, 2);
  EXPECT_EQ(run({"generate", "nothing"}).code, 2);
  auto f = generate("golden", "g.mkv");
  EXPECT_EQ(run({"entropy", f, "--induce", "B=1"}).code, 2);
  EXPECT_EQ(run({"eu", path("missing.fol")}).code, 1);
  EXPECT_EQ(run({"eu", f}).code, 1);
}
