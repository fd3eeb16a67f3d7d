#pragma once

// Finite triangulated surfaces with an explicit side-gluing involution.
//
// Side s of triangle (v0, v1, v2) is the edge (v_s, v_{s+1 mod 3}). Vertex
// labels are global: two corners with the same label are the same point, and
// validation checks that the corners around each label form a single fan.

#include "mfol/error.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mfol {

using VertexId = std::int64_t;

struct SideRef {
  std::size_t tri = 0;
  int side = 0;
  auto operator<=>(const SideRef&) const = default;
};

struct TriangulatedSurface {
  std::string name;
  std::vector<std::array<VertexId, 3>> triangles;
  /// gluing[t][s] is the side glued to (t, s), if any.
  std::vector<std::array<std::optional<SideRef>, 3>> gluing;

  std::size_t size() const { return triangles.size(); }
  bool operator==(const TriangulatedSurface&) const = default;
};

struct SurfaceClass {
  bool orientable = true;
  int genus = 0;
  int boundary_count = 0;
  int chi = 0;
  bool operator==(const SurfaceClass&) const = default;
};

inline std::string to_string(const SurfaceClass& c) {
  return std::string(c.orientable ? "orientable" : "non-orientable") + " g=" + std::to_string(c.genus) +
         " b=" + std::to_string(c.boundary_count) + " chi=" + std::to_string(c.chi);
}

/// A boundary circle: cyclic vertex sequence and the unglued sides joining them.
/// sides[i] joins vertices[i] and vertices[i+1 mod n].
struct BoundaryCycle {
  std::vector<VertexId> vertices;
  std::vector<SideRef> sides;
  VertexId anchor() const { return *std::min_element(vertices.begin(), vertices.end()); }
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
};

inline int next(int s) { return (s + 1) % 3; }
inline int prev(int s) { return (s + 2) % 3; }

}  // namespace detail

inline std::pair<VertexId, VertexId> side_vertices(const TriangulatedSurface& S, SideRef r) {
  const auto& t = S.triangles[r.tri];
  return {t[r.side], t[detail::next(r.side)]};
}

inline std::pair<VertexId, VertexId> unordered(std::pair<VertexId, VertexId> e) {
  if (e.second < e.first) std::swap(e.first, e.second);
  return e;
}

inline bool is_boundary_side(const TriangulatedSurface& S, SideRef r) {
  return !S.gluing[r.tri][r.side].has_value();
}

inline void glue_sides(TriangulatedSurface& S, SideRef a, SideRef b) {
  S.gluing[a.tri][a.side] = b;
  S.gluing[b.tri][b.side] = a;
}

inline void unglue_side(TriangulatedSurface& S, SideRef a) {
  if (auto b = S.gluing[a.tri][a.side]) {
    S.gluing[b->tri][b->side].reset();
    S.gluing[a.tri][a.side].reset();
  }
}

/// Builds a surface from a triangle list, gluing every pair of sides that
/// share an unordered vertex pair. More than two sides on one pair is an error.
inline TriangulatedSurface from_triangles(std::string name, std::vector<std::array<VertexId, 3>> tris) {
  TriangulatedSurface S;
  S.name = std::move(name);
  S.triangles = std::move(tris);
  S.gluing.assign(S.triangles.size(), {});
  std::map<std::pair<VertexId, VertexId>, std::vector<SideRef>> by_pair;
  for (std::size_t t = 0; t < S.triangles.size(); ++t)
    for (int s = 0; s < 3; ++s) by_pair[unordered(side_vertices(S, {t, s}))].push_back({t, s});
  for (const auto& [pair, sides] : by_pair) {
    if (sides.size() > 2)
      throw ValidationError("edge {" + std::to_string(pair.first) + "," + std::to_string(pair.second) + "} lies on " +
                            std::to_string(sides.size()) + " triangles");
    if (sides.size() == 2) glue_sides(S, sides[0], sides[1]);
  }
  return S;
}

inline std::vector<VertexId> vertices(const TriangulatedSurface& S) {
  std::vector<VertexId> vs;
  vs.reserve(S.triangles.size() * 3);
  for (const auto& t : S.triangles) vs.insert(vs.end(), t.begin(), t.end());
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

inline VertexId max_vertex(const TriangulatedSurface& S) {
  VertexId m = -1;
  for (const auto& t : S.triangles)
    for (auto v : t) m = std::max(m, v);
  return m;
}

/// Corners grouped by vertex: corner (t, k) means triangles[t][k] == v.
inline std::map<VertexId, std::vector<std::pair<std::size_t, int>>> corners_by_vertex(const TriangulatedSurface& S) {
  std::map<VertexId, std::vector<std::pair<std::size_t, int>>> out;
  for (std::size_t t = 0; t < S.triangles.size(); ++t)
    for (int k = 0; k < 3; ++k) out[S.triangles[t][k]].push_back({t, k});
  return out;
}

namespace detail {

inline int corner_of(const std::array<VertexId, 3>& tri, VertexId v) {
  for (int k = 0; k < 3; ++k)
    if (tri[k] == v) return k;
  return -1;
}

/// Groups the corners at v into fans connected through glued sides.
inline std::vector<std::vector<std::pair<std::size_t, int>>> corner_fans(
    const TriangulatedSurface& S, VertexId v, const std::vector<std::pair<std::size_t, int>>& corners) {
  std::map<std::pair<std::size_t, int>, std::size_t> index;
  for (std::size_t i = 0; i < corners.size(); ++i) index[corners[i]] = i;
  UnionFind uf(corners.size());
  for (std::size_t i = 0; i < corners.size(); ++i) {
    auto [t, k] = corners[i];
    for (int s : {k, prev(k)}) {
      auto g = S.gluing[t][s];
      if (!g) continue;
      int k2 = corner_of(S.triangles[g->tri], v);
      if (k2 < 0) continue;
      auto it = index.find({g->tri, k2});
      if (it != index.end()) uf.unite(i, it->second);
    }
  }
  std::map<std::size_t, std::vector<std::pair<std::size_t, int>>> groups;
  for (std::size_t i = 0; i < corners.size(); ++i) groups[uf.find(i)].push_back(corners[i]);
  std::vector<std::vector<std::pair<std::size_t, int>>> fans;
  for (auto& [root, g] : groups) fans.push_back(std::move(g));
  return fans;
}

}  // namespace detail

/// Lists every violated invariant; empty means valid.
inline std::vector<std::string> validation_errors(const TriangulatedSurface& S) {
  std::vector<std::string> errs;
  if (S.gluing.size() != S.triangles.size()) {
    errs.push_back("gluing table size does not match triangle count");
    return errs;
  }
  for (std::size_t t = 0; t < S.triangles.size(); ++t) {
    const auto& tri = S.triangles[t];
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      errs.push_back("triangle " + std::to_string(t) + " repeats a vertex");
    for (int s = 0; s < 3; ++s) {
      auto g = S.gluing[t][s];
      if (!g) continue;
      std::string side = "side (" + std::to_string(t) + "," + std::to_string(s) + ")";
      if (g->tri >= S.triangles.size() || g->side < 0 || g->side > 2) {
        errs.push_back(side + " glued to a nonexistent side");
        continue;
      }
      if (g->tri == t && g->side == s) {
        errs.push_back(side + " glued to itself");
        continue;
      }
      auto back = S.gluing[g->tri][g->side];
      if (!back || back->tri != t || back->side != s) errs.push_back(side + " gluing is not an involution");
      if (unordered(side_vertices(S, {t, s})) != unordered(side_vertices(S, *g)))
        errs.push_back(side + " glued to a side with a different vertex pair");
    }
  }
  if (!errs.empty()) return errs;
  for (const auto& [v, corners] : corners_by_vertex(S)) {
    if (detail::corner_fans(S, v, corners).size() != 1)
      errs.push_back("vertex " + std::to_string(v) + " link is not a single path or cycle");
  }
  return errs;
}

inline void require_valid(const TriangulatedSurface& S) {
  auto errs = validation_errors(S);
  if (!errs.empty()) {
    std::string msg = "invalid surface '" + S.name + "': " + errs.front();
    if (errs.size() > 1) msg += " (+" + std::to_string(errs.size() - 1) + " more)";
    throw ValidationError(msg);
  }
}

inline std::size_t edge_count(const TriangulatedSurface& S) {
  std::size_t glued_sides = 0, free_sides = 0;
  for (const auto& g : S.gluing)
    for (const auto& s : g) (s ? glued_sides : free_sides)++;
  return glued_sides / 2 + free_sides;
}

inline int euler_characteristic(const TriangulatedSurface& S) {
  require_valid(S);
  return static_cast<int>(vertices(S).size()) - static_cast<int>(edge_count(S)) +
         static_cast<int>(S.triangles.size());
}

inline std::set<VertexId> boundary_vertices(const TriangulatedSurface& S) {
  std::set<VertexId> out;
  for (std::size_t t = 0; t < S.triangles.size(); ++t)
    for (int s = 0; s < 3; ++s)
      if (!S.gluing[t][s]) {
        auto [a, b] = side_vertices(S, {t, s});
        out.insert(a);
        out.insert(b);
      }
  return out;
}

/// Boundary circles, each starting at its smallest vertex, sorted by that vertex.
/// The walk direction follows the triangle order of the first side when possible.
inline std::vector<BoundaryCycle> boundary_components(const TriangulatedSurface& S) {
  require_valid(S);
  std::map<VertexId, std::vector<SideRef>> at;
  std::vector<SideRef> free_sides;
  for (std::size_t t = 0; t < S.triangles.size(); ++t)
    for (int s = 0; s < 3; ++s)
      if (!S.gluing[t][s]) {
        SideRef r{t, s};
        free_sides.push_back(r);
        auto [a, b] = side_vertices(S, r);
        at[a].push_back(r);
        at[b].push_back(r);
      }
  std::set<SideRef> used;
  std::vector<BoundaryCycle> cycles;
  for (const auto& [v, sides] : at) {
    if (std::all_of(sides.begin(), sides.end(), [&](SideRef r) { return used.count(r) != 0; })) continue;
    // v is the smallest unused boundary vertex, so it anchors a new cycle.
    SideRef start = sides[0];
    bool found_forward = false;
    for (auto r : sides)
      if (!used.count(r) && side_vertices(S, r).first == v) {
        if (!found_forward || side_vertices(S, r).second < side_vertices(S, start).second) start = r;
        found_forward = true;
      }
    if (!found_forward)
      for (auto r : sides)
        if (!used.count(r)) {
          start = r;
          break;
        }
    BoundaryCycle cyc;
    VertexId cur = v;
    SideRef side = start;
    while (!used.count(side)) {
      used.insert(side);
      cyc.vertices.push_back(cur);
      cyc.sides.push_back(side);
      auto [a, b] = side_vertices(S, side);
      VertexId nxt = (a == cur) ? b : a;
      cur = nxt;
      const auto& cand = at[cur];
      auto it = std::find_if(cand.begin(), cand.end(), [&](SideRef r) { return r != side && !used.count(r); });
      if (it == cand.end()) break;
      side = *it;
    }
    cycles.push_back(std::move(cyc));
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const BoundaryCycle& a, const BoundaryCycle& b) { return a.anchor() < b.anchor(); });
  return cycles;
}

/// Index of the boundary cycle passing through v, if any.
inline std::optional<std::size_t> cycle_through(const std::vector<BoundaryCycle>& cycles, VertexId v) {
  for (std::size_t i = 0; i < cycles.size(); ++i)
    if (std::find(cycles[i].vertices.begin(), cycles[i].vertices.end(), v) != cycles[i].vertices.end()) return i;
  return std::nullopt;
}

/// Connected components as sorted triangle index lists, ordered by smallest index.
inline std::vector<std::vector<std::size_t>> triangle_components(const TriangulatedSurface& S) {
  detail::UnionFind uf(S.triangles.size());
  for (std::size_t t = 0; t < S.triangles.size(); ++t)
    for (int s = 0; s < 3; ++s)
      if (auto g = S.gluing[t][s]) uf.unite(t, g->tri);
  // Triangles sharing a vertex label are also connected (through the vertex fan).
  std::map<VertexId, std::size_t> first;
  for (std::size_t t = 0; t < S.triangles.size(); ++t)
    for (auto v : S.triangles[t]) {
      auto [it, inserted] = first.emplace(v, t);
      if (!inserted) uf.unite(t, it->second);
    }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t t = 0; t < S.triangles.size(); ++t) groups[uf.find(t)].push_back(t);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [r, g] : groups) out.push_back(std::move(g));
  return out;
}

inline bool is_connected(const TriangulatedSurface& S) { return triangle_components(S).size() <= 1; }

/// Greedy orientation propagation from the lowest triangle of each component.
/// Returns per-triangle signs (+1 keep, -1 reverse), or nullopt if non-orientable.
inline std::optional<std::vector<int>> orientation_signs(const TriangulatedSurface& S) {
  std::vector<int> sign(S.triangles.size(), 0);
  for (std::size_t root = 0; root < S.triangles.size(); ++root) {
    if (sign[root] != 0) continue;
    sign[root] = 1;
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      auto t = stack.back();
      stack.pop_back();
      for (int s = 0; s < 3; ++s) {
        auto g = S.gluing[t][s];
        if (!g) continue;
        bool same_direction = side_vertices(S, {t, s}).first == side_vertices(S, *g).first;
        int want = same_direction ? -sign[t] : sign[t];
        if (sign[g->tri] == 0) {
          sign[g->tri] = want;
          stack.push_back(g->tri);
        } else if (sign[g->tri] != want) {
          return std::nullopt;
        }
      }
    }
  }
  return sign;
}

inline bool is_orientable(const TriangulatedSurface& S) { return orientation_signs(S).has_value(); }

/// Copy with triangle orders flipped so that glued sides induce opposite
/// directions. Non-orientable input is returned unchanged.
inline TriangulatedSurface coherently_oriented(const TriangulatedSurface& S) {
  auto signs = orientation_signs(S);
  if (!signs) return S;
  TriangulatedSurface out = S;
  auto new_side = [&](std::size_t t, int s) { return (*signs)[t] > 0 ? s : 2 - s; };
  for (std::size_t t = 0; t < S.triangles.size(); ++t) {
    if ((*signs)[t] < 0) std::swap(out.triangles[t][1], out.triangles[t][2]);
    for (int s = 0; s < 3; ++s) {
      auto g = S.gluing[t][s];
      out.gluing[t][new_side(t, s)] =
          g ? std::optional<SideRef>(SideRef{g->tri, new_side(g->tri, g->side)}) : std::nullopt;
    }
  }
  return out;
}

inline SurfaceClass classify_surface(const TriangulatedSurface& S) {
  require_valid(S);
  auto comps = triangle_components(S);
  if (comps.size() != 1) {
    std::string msg = "classify_surface needs a connected surface; found " + std::to_string(comps.size()) +
                      " components starting at triangles";
    for (const auto& c : comps) msg += " " + std::to_string(c.front());
    throw PreconditionError(msg);
  }
  SurfaceClass c;
  c.chi = euler_characteristic(S);
  c.boundary_count = static_cast<int>(boundary_components(S).size());
  c.orientable = is_orientable(S);
  int deficit = 2 - c.chi - c.boundary_count;
  c.genus = c.orientable ? deficit / 2 : deficit;
  return c;
}

/// Restriction to a set of triangles, keeping labels and internal gluings.
/// The result is not validated; pinched vertices are reported by validation.
inline TriangulatedSurface subsurface(const TriangulatedSurface& S, const std::vector<std::size_t>& tris,
                                      std::string name = {}) {
  std::vector<std::size_t> sorted = tris;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::optional<std::size_t>> remap(S.triangles.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) remap[sorted[i]] = i;
  TriangulatedSurface out;
  out.name = name.empty() ? S.name : std::move(name);
  out.triangles.reserve(sorted.size());
  out.gluing.assign(sorted.size(), {});
  for (auto t : sorted) out.triangles.push_back(S.triangles[t]);
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (int s = 0; s < 3; ++s)
      if (auto g = S.gluing[sorted[i]][s]; g && remap[g->tri]) out.gluing[i][s] = SideRef{*remap[g->tri], g->side};
  return out;
}

/// Disjoint union; vertices of b are shifted past those of a. Returns the shift.
inline VertexId append_disjoint(TriangulatedSurface& a, const TriangulatedSurface& b) {
  VertexId shift = max_vertex(a) + 1;
  std::size_t base = a.triangles.size();
  for (std::size_t t = 0; t < b.triangles.size(); ++t) {
    auto tri = b.triangles[t];
    for (auto& v : tri) v += shift;
    a.triangles.push_back(tri);
    std::array<std::optional<SideRef>, 3> g{};
    for (int s = 0; s < 3; ++s)
      if (auto r = b.gluing[t][s]) g[s] = SideRef{r->tri + base, r->side};
    a.gluing.push_back(g);
  }
  return shift;
}

}  // namespace mfol
