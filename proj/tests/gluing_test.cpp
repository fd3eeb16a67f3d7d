#include "mfol/gluing.hpp"
#include "mfol/isomorphism.hpp"

#include <gtest/gtest.h>

using namespace mfol;

TEST(RefineBoundary, SplitsEverySide) {
  auto D = fan_disk(4);
  refine_boundary_cycle(D, 1, 12);
  EXPECT_TRUE(is_simplicial(D));
  EXPECT_EQ(boundary_components(D).front().sides.size(), 12u);
  EXPECT_EQ(classify_surface(D), (SurfaceClass{true, 0, 1, 1}));
  EXPECT_THROW(refine_boundary_cycle(D, 1, 18), PreconditionError);
}

TEST(GlueBoundaryCycles, TwoDisksMakeASphere) {
  auto S = connect_along_boundary(fan_disk(4), 0, fan_disk(4), 0);
  EXPECT_EQ(classify_surface(S), (SurfaceClass{true, 0, 0, 2}));
  // Different lengths are refined to a common multiple.
  auto T = connect_along_boundary(fan_disk(4), 0, fan_disk(6), 0, 5);
  EXPECT_EQ(classify_surface(T), (SurfaceClass{true, 0, 0, 2}));
}

TEST(GlueBoundaryCycles, AnnulusWithItselfIsATorus) {
  auto A = grid_annulus(4, 1);
  auto cs = boundary_components(A);
  for (std::size_t twist = 0; twist < 4; ++twist) {
    auto T = glue_boundary_cycles(A, cs[0].anchor(), cs[1].anchor(), twist);
    EXPECT_EQ(classify_surface(T), (SurfaceClass{true, 1, 0, 0})) << twist;
    EXPECT_TRUE(is_simplicial(T));
  }
}

TEST(GlueBoundaryCycles, TwistZeroPairsAnchors) {
  auto A = grid_annulus(5, 3);
  auto cs = boundary_components(A);
  auto T = glue_boundary_cycles(A, cs[0].anchor(), cs[1].anchor(), 0);
  auto verts = vertices(T);
  EXPECT_TRUE(std::binary_search(verts.begin(), verts.end(), cs[0].anchor()));
  EXPECT_FALSE(std::binary_search(verts.begin(), verts.end(), cs[1].anchor()));
  EXPECT_EQ(classify_surface(T).genus, 1);
}

TEST(PunctureSurface, LowersChiPerPoint) {
  auto S = torus7();
  auto P = puncture_surface(S, {0, 3});
  EXPECT_EQ(classify_surface(P.surface), (SurfaceClass{true, 1, 2, -2}));
  ASSERT_EQ(P.hole_anchor.size(), 2u);
  EXPECT_NE(P.hole_anchor[0], P.hole_anchor[1]);
  EXPECT_THROW(puncture_surface(fan_disk(5), {1}), PreconditionError);
  EXPECT_EQ(puncture_surface(S, {}).surface, S);
}

TEST(GraftHandles, RaisesGenus) {
  auto S = graft_surface_handles(tetrahedron_boundary(), {0, 2});
  EXPECT_EQ(classify_surface(S), (SurfaceClass{true, 2, 0, -2}));
  auto D = graft_surface_handles(fan_disk(5), {0});
  EXPECT_EQ(classify_surface(D), (SurfaceClass{true, 1, 1, -1}));
}

TEST(Planarize, Examples) {
  auto d = planarize(fan_disk(5));
  EXPECT_TRUE(d.points.empty());
  EXPECT_TRUE(isomorphic(d.surface, fan_disk(5)));
  auto t = planarize(orientable_surface(1, 1));
  EXPECT_EQ(classify_surface(t.surface), (SurfaceClass{true, 0, 1, 1}));
  EXPECT_EQ(t.points.size(), 1u);
  auto g2 = planarize(orientable_surface(2, 0));
  EXPECT_EQ(classify_surface(g2.surface), (SurfaceClass{true, 0, 0, 2}));
  EXPECT_EQ(g2.points.size(), 2u);
}

TEST(Planarize, RegraftRestoresClass) {
  for (int g = 0; g <= 2; ++g)
    for (int b = 0; b <= 2; ++b) {
      auto S = orientable_surface(g, b);
      auto P = planarize(S);
      EXPECT_EQ(classify_surface(P.surface).genus, 0);
      EXPECT_EQ(static_cast<int>(P.points.size()), g);
      EXPECT_EQ(classify_surface(graft_surface_handles(P.surface, P.points)), classify_surface(S)) << g << " " << b;
    }
}
