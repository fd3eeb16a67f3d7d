#pragma once

// Standard triangulated surfaces used by tests, the CLI and the exhaustion
// families: polyhedra, grid annuli and tori, and grids with tubes attached
// between square holes.

#include "mfol/curves.hpp"

namespace mfol {

/// Cones off one boundary circle with a fresh apex vertex.
/// Returns the capped surface and the apex label.
inline std::pair<TriangulatedSurface, VertexId> cap_boundary(const TriangulatedSurface& S, std::size_t cycle_index) {
  auto cycles = boundary_components(S);
  if (cycle_index >= cycles.size()) throw PreconditionError("cap_boundary: no boundary cycle " + std::to_string(cycle_index));
  TriangulatedSurface out = S;
  VertexId apex = max_vertex(S) + 1;
  std::map<VertexId, std::vector<SideRef>> spokes;
  for (auto r : cycles[cycle_index].sides) {
    auto [u, w] = side_vertices(S, r);
    std::size_t t = out.triangles.size();
    out.triangles.push_back({w, u, apex});
    out.gluing.push_back({});
    glue_sides(out, r, {t, 0});
    spokes[u].push_back({t, 1});
    spokes[w].push_back({t, 2});
  }
  for (auto& [x, ss] : spokes)
    if (ss.size() == 2) glue_sides(out, ss[0], ss[1]);
  return {out, apex};
}

inline TriangulatedSurface tetrahedron_boundary() {
  return from_triangles("sphere", {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}});
}

inline TriangulatedSurface single_triangle() { return from_triangles("triangle", {{0, 1, 2}}); }

/// Fan disk: center 0, rim 1..n.
inline TriangulatedSurface fan_disk(int n) {
  std::vector<std::array<VertexId, 3>> tris;
  for (int i = 0; i < n; ++i) tris.push_back({0, 1 + i, 1 + (i + 1) % n});
  return from_triangles("disk", std::move(tris));
}

/// The 7-vertex (Moebius) torus: 7 vertices, 21 edges, 14 triangles.
inline TriangulatedSurface torus7() {
  std::vector<std::array<VertexId, 3>> tris;
  for (VertexId i = 0; i < 7; ++i) {
    tris.push_back({i, (i + 1) % 7, (i + 3) % 7});
    tris.push_back({i, (i + 3) % 7, (i + 2) % 7});
  }
  return from_triangles("torus7", std::move(tris));
}

/// Grid annulus of circumference n >= 3 and the given number of rows.
/// Row 0 and row `rows` are the two boundary circles.
inline TriangulatedSurface grid_annulus(int n, int rows = 1) {
  std::vector<std::array<VertexId, 3>> tris;
  auto id = [n](int i, int j) { return static_cast<VertexId>(j * n + ((i % n) + n) % n); };
  for (int j = 0; j < rows; ++j)
    for (int i = 0; i < n; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return from_triangles("annulus", std::move(tris));
}

/// Grid torus with n x m squares, n, m >= 3.
inline TriangulatedSurface grid_torus(int n, int m) {
  std::vector<std::array<VertexId, 3>> tris;
  auto id = [n, m](int i, int j) { return static_cast<VertexId>(((j % m) + m) % m * n + ((i % n) + n) % n); };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return from_triangles("torus", std::move(tris));
}

struct TriangleTag {
  enum class Kind { Square, Tube };
  Kind kind = Kind::Square;
  int a = 0;  ///< square x, or tube index
  int b = 0;  ///< square y, or tube ring (0 at the first hole)
};

struct GridSpec {
  int width = 1;
  int height = 1;
  bool periodic_x = false;  ///< cylinder instead of rectangle
  std::vector<std::pair<int, int>> holes;
  struct Tube {
    std::size_t hole_a = 0;
    std::size_t hole_b = 0;
    int length = 2;
  };
  std::vector<Tube> tubes;
};

struct GridSurface {
  TriangulatedSurface surface;
  std::vector<TriangleTag> tags;
};

/// Rectangle (or cylinder) of unit squares with square holes; each tube is a
/// 4-gon annulus of `length` rings joining two hole perimeters. Every tube
/// adds a handle.
inline GridSurface build_grid_surface(const GridSpec& spec, std::string name = "grid") {
  const int cols = spec.periodic_x ? spec.width : spec.width + 1;
  auto id = [&](int x, int y) {
    if (spec.periodic_x) x = ((x % spec.width) + spec.width) % spec.width;
    return static_cast<VertexId>(y * cols + x);
  };
  std::set<std::pair<int, int>> holes(spec.holes.begin(), spec.holes.end());
  GridSurface out;
  std::vector<std::array<VertexId, 3>> tris;
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x) {
      if (holes.count({x, y})) continue;
      tris.push_back({id(x, y), id(x + 1, y), id(x + 1, y + 1)});
      tris.push_back({id(x, y), id(x + 1, y + 1), id(x, y + 1)});
      out.tags.push_back({TriangleTag::Kind::Square, x, y});
      out.tags.push_back({TriangleTag::Kind::Square, x, y});
    }
  VertexId fresh = static_cast<VertexId>((spec.height + 1) * cols);
  auto perimeter = [&](std::pair<int, int> h) {
    auto [x, y] = h;
    return std::array<VertexId, 4>{id(x, y), id(x + 1, y), id(x + 1, y + 1), id(x, y + 1)};
  };
  for (std::size_t k = 0; k < spec.tubes.size(); ++k) {
    const auto& tube = spec.tubes[k];
    std::vector<std::array<VertexId, 4>> rings;
    rings.push_back(perimeter(spec.holes.at(tube.hole_a)));
    for (int j = 1; j < tube.length; ++j) rings.push_back({fresh, fresh + 1, fresh + 2, fresh + 3}), fresh += 4;
    auto last = perimeter(spec.holes.at(tube.hole_b));
    rings.push_back({last[1], last[0], last[3], last[2]});
    for (int j = 0; j < tube.length; ++j)
      for (int i = 0; i < 4; ++i) {
        const auto& r0 = rings[j];
        const auto& r1 = rings[j + 1];
        tris.push_back({r0[i], r0[(i + 1) % 4], r1[(i + 1) % 4]});
        tris.push_back({r0[i], r1[(i + 1) % 4], r1[i]});
        out.tags.push_back({TriangleTag::Kind::Tube, static_cast<int>(k), j});
        out.tags.push_back({TriangleTag::Kind::Tube, static_cast<int>(k), j});
      }
  }
  out.surface = from_triangles(std::move(name), std::move(tris));
  return out;
}

/// Orientable surface of genus g with b boundary circles.
inline TriangulatedSurface orientable_surface(int genus, int boundary) {
  GridSpec spec;
  int holes = 2 * genus + std::max(boundary - 1, 0);
  spec.width = 2 * holes + 1;
  spec.height = 3;
  for (int h = 0; h < holes; ++h) spec.holes.push_back({1 + 2 * h, 1});
  for (int k = 0; k < genus; ++k) spec.tubes.push_back({static_cast<std::size_t>(2 * k), static_cast<std::size_t>(2 * k + 1), 2});
  auto S = build_grid_surface(spec, "g" + std::to_string(genus) + "b" + std::to_string(boundary)).surface;
  if (boundary == 0) {
    auto cycles = boundary_components(S);
    std::size_t outer = 0;
    for (std::size_t i = 0; i < cycles.size(); ++i)
      if (cycles[i].anchor() == 0) outer = i;
    S = cap_boundary(S, outer).first;
  }
  return S;
}

/// Disk with two square holes.
inline TriangulatedSurface pants() { return orientable_surface(0, 3); }

}  // namespace mfol
