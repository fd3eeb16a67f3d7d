#include "mfol/builders.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace mfol;

namespace {

CurveSystem spanning_arc_of_annulus() {
  // grid_annulus(4, 2): rows 0 and 2 are boundary; 0 -> 4 -> 8 crosses it.
  return CurveSystem::path({0, 4, 8});
}

}  // namespace

TEST(EulerCharacteristic, StandardComplexes) {
  EXPECT_EQ(euler_characteristic(tetrahedron_boundary()), 2);
  EXPECT_EQ(euler_characteristic(single_triangle()), 1);
  auto T = torus7();
  EXPECT_EQ(vertices(T).size(), 7u);
  EXPECT_EQ(edge_count(T), 21u);
  EXPECT_EQ(T.size(), 14u);
  EXPECT_EQ(euler_characteristic(T), 0);
}

TEST(Validation, NamesOffendingSide) {
  auto S = tetrahedron_boundary();
  S.gluing[0][0] = SideRef{2, 1};  // breaks the involution and the vertex pair
  auto errs = validation_errors(S);
  ASSERT_FALSE(errs.empty());
  EXPECT_NE(errs.front().find("side (0,0)"), std::string::npos);
  EXPECT_THROW(euler_characteristic(S), ValidationError);
}

TEST(Validation, PinchedVertexRejected) {
  // Two triangles sharing only vertex 0.
  auto S = from_triangles("bowtie", {{0, 1, 2}, {0, 3, 4}});
  auto errs = validation_errors(S);
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_NE(errs.front().find("vertex 0"), std::string::npos);
}

TEST(BoundaryComponents, Examples) {
  auto tri = boundary_components(single_triangle());
  ASSERT_EQ(tri.size(), 1u);
  EXPECT_EQ(tri[0].vertices.size(), 3u);
  EXPECT_TRUE(boundary_components(tetrahedron_boundary()).empty());
  auto ann = boundary_components(grid_annulus(4, 1));
  ASSERT_EQ(ann.size(), 2u);
  EXPECT_EQ(ann[0].vertices, (std::vector<VertexId>{0, 1, 2, 3}));
}

TEST(BoundaryComponents, EverySideInExactlyOneCycle) {
  auto S = orientable_surface(1, 3);
  auto cycles = boundary_components(S);
  std::set<SideRef> seen;
  std::set<VertexId> verts;
  std::size_t free = 0;
  for (std::size_t t = 0; t < S.size(); ++t)
    for (int s = 0; s < 3; ++s) free += is_boundary_side(S, {t, s});
  for (auto& c : cycles) {
    for (auto r : c.sides) EXPECT_TRUE(seen.insert(r).second);
    for (auto v : c.vertices) EXPECT_TRUE(verts.insert(v).second);
  }
  EXPECT_EQ(seen.size(), free);
}

TEST(ClassifySurface, Examples) {
  EXPECT_EQ(classify_surface(tetrahedron_boundary()), (SurfaceClass{true, 0, 0, 2}));
  auto g2 = orientable_surface(2, 0);
  EXPECT_EQ(euler_characteristic(g2), -2);
  EXPECT_EQ(classify_surface(g2).genus, 2);
  auto g1b1 = orientable_surface(1, 1);
  EXPECT_EQ(classify_surface(g1b1), (SurfaceClass{true, 1, 1, -1}));
  EXPECT_EQ(classify_surface(torus7()), (SurfaceClass{true, 1, 0, 0}));
}

TEST(ClassifySurface, DisconnectedInputListsComponents) {
  auto S = single_triangle();
  append_disjoint(S, single_triangle());
  try {
    classify_surface(S);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("2 components"), std::string::npos);
  }
}

TEST(ClassifySurface, NonOrientableDetected) {
  // Moebius strip: 5 triangles in a twisted band.
  auto M = from_triangles("moebius", {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {3, 4, 0}, {4, 0, 1}});
  auto c = classify_surface(M);
  EXPECT_FALSE(c.orientable);
  EXPECT_EQ(c.boundary_count, 1);
  EXPECT_EQ(c.chi, 0);
  EXPECT_EQ(c.genus, 1);
}

TEST(CoherentOrientation, PreservesStructure) {
  auto S = torus7();
  auto O = coherently_oriented(S);
  EXPECT_TRUE(validation_errors(O).empty());
  for (std::size_t t = 0; t < O.size(); ++t)
    for (int s = 0; s < 3; ++s) {
      auto g = O.gluing[t][s];
      ASSERT_TRUE(g);
      EXPECT_EQ(side_vertices(O, {t, s}).first, side_vertices(O, *g).second);
    }
}

TEST(CutAlong, EmptySystemIsIdentity) {
  auto S = torus7();
  EXPECT_EQ(cut_along(S, {}), S);
}

TEST(CutAlong, TorusAlongNonSeparatingCycle) {
  auto S = torus7();
  // 0-1-2-...-6 using edges {i,i+1}: a (1,?) curve on the 7-vertex torus.
  auto G = CurveSystem::cycle({0, 1, 2, 3, 4, 5, 6});
  ASSERT_TRUE(is_valid_curve_system(S, G));
  auto cut = cut_along(S, G);
  EXPECT_EQ(classify_surface(cut), (SurfaceClass{true, 0, 2, 0}));
}

TEST(CutAlong, DiskAlongArcGivesTwoDisks) {
  auto D = fan_disk(6);
  auto cut = cut_along(D, CurveSystem::path({1, 0, 4}));
  auto comps = triangle_components(cut);
  ASSERT_EQ(comps.size(), 2u);
  for (auto& c : comps) EXPECT_EQ(classify_surface(subsurface(cut, c)), (SurfaceClass{true, 0, 1, 1}));
}

TEST(CutAlong, RejectsNonManifoldSystems) {
  auto D = fan_disk(6);
  // Three edges at the center.
  EXPECT_THROW(cut_along(D, CurveSystem({{0, 1}, {0, 3}, {0, 5}})), ValidationError);
  // Arc ending in the interior.
  try {
    cut_along(D, CurveSystem::path({1, 0}));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("0"), std::string::npos);
  }
}

TEST(CutAlong, ChiShiftEqualsArcCountAndRegluingRestores) {
  std::mt19937_64 rng(7);
  std::vector<TriangulatedSurface> lib{orientable_surface(1, 2), orientable_surface(0, 3), grid_annulus(5, 3),
                                       torus7(), orientable_surface(2, 1)};
  int nontrivial = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& S = lib[trial % lib.size()];
    auto G = oracle::random_curve_system(S, rng);
    auto comps = validate_curve_system(S, G);
    auto R = cut_along_detailed(S, G);
    EXPECT_EQ(euler_characteristic(R.surface) - euler_characteristic(S), static_cast<int>(arc_count(comps)));
    EXPECT_EQ(reglue(R), S);
    nontrivial += !G.empty();
  }
  EXPECT_GT(nontrivial, 50);
}

TEST(IsReducing, Examples) {
  EXPECT_TRUE(is_reducing(fan_disk(5), {}));
  auto P = pants();
  ASSERT_EQ(boundary_components(P).size(), 3u);
  // Grid vertex (x,y) = 6y + x; holes at x=1 and x=3 in row 1.
  EXPECT_TRUE(is_reducing(P, CurveSystem({{1, 7}, {9, 3}})));
}

TEST(IsReducing, CycleComponentsNeverReduce) {
  GridSpec spec;
  spec.width = 9;
  spec.height = 5;
  spec.holes = {{2, 2}, {6, 2}};
  auto P = build_grid_surface(spec).surface;  // vertex (x,y) = 10y + x
  auto ring = CurveSystem::cycle({11, 12, 13, 14, 24, 34, 44, 43, 42, 41, 31, 21});
  ASSERT_TRUE(is_valid_curve_system(P, ring));
  EXPECT_FALSE(is_reducing(P, ring));
  EXPECT_FALSE(is_reducing(P, unite(ring, CurveSystem::path({6, 16, 26}))));
}

TEST(IsReducing, BruteForceOnPants) {
  // Any two arcs joining distinct boundary circles along disjoint paths reduce.
  auto P = pants();
  auto G = CurveSystem({{1, 7}, {9, 3}});
  auto cut = cut_along(P, G);
  EXPECT_TRUE(is_connected(cut));
  EXPECT_EQ(boundary_components(cut).size(), 1u);
  // One arc only merges two of the three circles.
  EXPECT_FALSE(is_reducing(P, CurveSystem({{1, 7}})));
  EXPECT_TRUE(is_reducing(P, CurveSystem({{1, 7}}), 2));
}

TEST(NeighborhoodComplement, Examples) {
  auto D = fan_disk(5);
  auto B = neighborhood_complement(D, {});
  EXPECT_EQ(B.size(), 6 * D.size());
  EXPECT_EQ(classify_surface(B), classify_surface(D));

  auto A = grid_annulus(4, 2);
  auto N = neighborhood_complement(A, spanning_arc_of_annulus());
  EXPECT_EQ(classify_surface(N), (SurfaceClass{true, 0, 1, 1}));

  auto P = pants();
  auto NP = neighborhood_complement(P, CurveSystem({{1, 7}, {9, 3}}));
  EXPECT_EQ(classify_surface(NP), (SurfaceClass{true, 0, 1, 1}));
}

TEST(NeighborhoodComplement, ReducingImpliesConnectedBoundary) {
  std::mt19937_64 rng(11);
  auto S = orientable_surface(1, 2);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 5; ++trial) {
    auto G = oracle::random_curve_system(S, rng, 3);
    if (!is_reducing(S, G)) continue;
    ++checked;
    EXPECT_EQ(boundary_components(neighborhood_complement(S, G)).size(), 1u);
  }
  EXPECT_GT(checked, 0);
}

TEST(FindNonSeparatingCycle, SphereHasNone) {
  EXPECT_FALSE(find_nonseparating_cycle(tetrahedron_boundary()).has_value());
  EXPECT_FALSE(find_nonseparating_cycle(orientable_surface(0, 3)).has_value());
}

TEST(FindNonSeparatingCycle, AgreesWithExhaustiveSearch) {
  for (const auto& S : {torus7(), grid_torus(3, 3), orientable_surface(2, 0), tetrahedron_boundary()}) {
    bool oracle = false;
    for (const auto& c : oracle::all_simple_interior_cycles(S, 20000))
      if (is_connected(cut_along(S, c))) {
        oracle = true;
        break;
      }
    auto found = find_nonseparating_cycle(S);
    EXPECT_EQ(found.has_value(), oracle) << S.name;
    if (found) {
      EXPECT_TRUE(is_connected(cut_along(S, *found)));
      auto before = classify_surface(S);
      auto after = classify_surface(cut_along(S, *found));
      EXPECT_EQ(after.genus, before.genus - 1);
      EXPECT_EQ(after.boundary_count, before.boundary_count + 2);
    }
  }
}

TEST(OrientableLibrary, GenusAndBoundary) {
  for (int g = 0; g <= 3; ++g)
    for (int b = 0; b <= 3; ++b) {
      auto c = classify_surface(orientable_surface(g, b));
      EXPECT_TRUE(c.orientable);
      EXPECT_EQ(c.genus, g);
      EXPECT_EQ(c.boundary_count, b);
      EXPECT_EQ(c.chi, 2 - 2 * g - b);
    }
}
