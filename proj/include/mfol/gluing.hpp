#pragma once

// Surface-level cut and paste: refining boundary circles, gluing two
// boundary circles together, punching holes at vertices, and trading
// handles for marked points.

#include "mfol/builders.hpp"

namespace mfol {

/// Valid surface whose triangles are distinct vertex triples and whose
/// vertex pairs label at most one edge each.
inline bool is_simplicial(const TriangulatedSurface& S) {
  if (!validation_errors(S).empty()) return false;
  std::set<std::array<VertexId, 3>> seen;
  for (auto t : S.triangles) {
    std::sort(t.begin(), t.end());
    if (!seen.insert(t).second) return false;
  }
  for (const auto& [e, sides] : detail::sides_by_edge(S)) {
    if (sides.size() > 2) return false;
    if (sides.size() == 2 && S.gluing[sides[0].tri][sides[0].side] != sides[1]) return false;
  }
  return true;
}

/// Boundary cycle anchored at `anchor`.
inline BoundaryCycle cycle_at(const TriangulatedSurface& S, VertexId anchor) {
  for (auto& c : boundary_components(S))
    if (c.anchor() == anchor) return c;
  throw PreconditionError("no boundary cycle anchored at vertex " + std::to_string(anchor));
}

/// Splits boundary side r into k pieces by a fan from the opposite corner.
inline void subdivide_boundary_side(TriangulatedSurface& S, SideRef r, int k) {
  if (k <= 1) return;
  if (!is_boundary_side(S, r)) throw PreconditionError("subdivide_boundary_side: side is glued");
  const auto tri = S.triangles[r.tri];
  VertexId u = tri[r.side], w = tri[detail::next(r.side)], x = tri[detail::prev(r.side)];
  auto to_w = S.gluing[r.tri][detail::next(r.side)];  // side (w, x)
  auto to_u = S.gluing[r.tri][detail::prev(r.side)];  // side (x, u)
  if (to_w) unglue_side(S, {r.tri, detail::next(r.side)});
  if (to_u) unglue_side(S, {r.tri, detail::prev(r.side)});
  VertexId fresh = max_vertex(S) + 1;
  std::vector<VertexId> pts{u};
  for (int j = 1; j < k; ++j) pts.push_back(fresh++);
  pts.push_back(w);
  std::vector<std::size_t> slots{r.tri};
  S.triangles[r.tri] = {pts[0], pts[1], x};
  for (int j = 1; j < k; ++j) {
    slots.push_back(S.triangles.size());
    S.triangles.push_back({pts[j], pts[j + 1], x});
    S.gluing.push_back({});
  }
  for (int j = 0; j + 1 < k; ++j) glue_sides(S, {slots[j], 1}, {slots[j + 1], 2});
  if (to_u) glue_sides(S, {slots.front(), 2}, *to_u);
  if (to_w) glue_sides(S, {slots.back(), 1}, *to_w);
}

/// Refines the boundary cycle anchored at `anchor` to `length` sides by
/// splitting every side evenly. `length` must be a multiple of the current length.
inline void refine_boundary_cycle(TriangulatedSurface& S, VertexId anchor, std::size_t length) {
  auto cyc = cycle_at(S, anchor);
  std::size_t n = cyc.sides.size();
  if (length % n != 0) throw PreconditionError("cannot refine a cycle of length " + std::to_string(n) + " to " + std::to_string(length));
  if (length == n) return;
  std::vector<Edge> pairs;
  for (auto r : cyc.sides) pairs.push_back(unordered(side_vertices(S, r)));
  for (auto e : pairs) {
    for (std::size_t t = 0; t < S.triangles.size(); ++t)
      for (int s = 0; s < 3; ++s)
        if (is_boundary_side(S, {t, s}) && unordered(side_vertices(S, {t, s})) == e) {
          subdivide_boundary_side(S, {t, s}, static_cast<int>(length / n));
          goto next_pair;
        }
  next_pair:;
  }
}

namespace detail {

/// One attempt at gluing cycles anchored at a and b with the given twist,
/// both already of equal length. Returns nullopt if the result is not simplicial.
inline std::optional<TriangulatedSurface> try_glue_cycles(const TriangulatedSurface& S, VertexId a, VertexId b,
                                                          std::size_t twist) {
  auto A = cycle_at(S, a);
  auto B = cycle_at(S, b);
  const std::size_t L = A.vertices.size();
  std::map<VertexId, VertexId> ident;
  for (std::size_t i = 0; i < L; ++i) ident[B.vertices[(twist + L - i) % L]] = A.vertices[i];
  TriangulatedSurface T = S;
  for (auto& tri : T.triangles)
    for (auto& v : tri)
      if (auto it = ident.find(v); it != ident.end()) v = it->second;
  std::map<Edge, SideRef> b_side;
  for (auto r : B.sides) b_side[unordered(side_vertices(T, r))] = r;
  for (auto r : A.sides) {
    auto it = b_side.find(unordered(side_vertices(T, r)));
    if (it == b_side.end()) return std::nullopt;
    glue_sides(T, r, it->second);
  }
  if (!is_simplicial(T)) return std::nullopt;
  return T;
}

}  // namespace detail

/// Glues the boundary cycles anchored at a and b of S (orientation
/// reversing along the circles): vertex a_i is identified with b_(twist - i),
/// positions counted along each cycle from its anchor before refinement.
/// Both cycles are refined to the lcm of their lengths; if the identification
/// is still not simplicial the surface is barycentrically subdivided and the
/// gluing retried. Labels of the a side survive.
inline TriangulatedSurface glue_boundary_cycles(TriangulatedSurface S, VertexId a, VertexId b, std::size_t twist = 0) {
  if (a == b) throw PreconditionError("glue_boundary_cycles: a cycle cannot be glued to itself");
  if (is_orientable(S)) S = coherently_oriented(S);
  std::size_t na = cycle_at(S, a).sides.size(), nb = cycle_at(S, b).sides.size();
  twist %= nb;
  std::size_t L = std::lcm(na, nb);
  refine_boundary_cycle(S, a, L);
  refine_boundary_cycle(S, b, L);
  std::size_t tw = twist * (L / nb);
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (auto T = detail::try_glue_cycles(S, a, b, tw)) return *T;
    S = barycentric_subdivision(S).surface;
    tw *= 2;
  }
  throw PreconditionError("glue_boundary_cycles: no simplicial identification after refinement");
}

/// Disjoint union of A and B glued along A's cycle `ca` and B's cycle `cb`.
inline TriangulatedSurface connect_along_boundary(const TriangulatedSurface& A, std::size_t ca,
                                                  const TriangulatedSurface& B, std::size_t cb, std::size_t twist = 0) {
  auto cycles_a = boundary_components(A);
  auto cycles_b = boundary_components(B);
  if (ca >= cycles_a.size() || cb >= cycles_b.size()) throw PreconditionError("connect_along_boundary: no such cycle");
  TriangulatedSurface S = A;
  VertexId shift = append_disjoint(S, B);
  return glue_boundary_cycles(S, cycles_a[ca].anchor(), cycles_b[cb].anchor() + shift, twist);
}

struct Punctured {
  TriangulatedSurface surface;
  /// Anchor of the new boundary cycle around each removed vertex, in input order.
  std::vector<VertexId> hole_anchor;
};

/// Removes the open star of each listed interior vertex in the first
/// barycentric subdivision (second subdivision if two of them are adjacent).
/// Each removal lowers chi by one.
inline Punctured puncture_surface(const TriangulatedSurface& S, const std::vector<VertexId>& points) {
  require_valid(S);
  auto bdry = boundary_vertices(S);
  auto verts = vertices(S);
  std::set<VertexId> on;
  for (auto v : points) {
    if (!std::binary_search(verts.begin(), verts.end(), v))
      throw PreconditionError("puncture: vertex " + std::to_string(v) + " is not in '" + S.name + "'");
    if (bdry.count(v)) throw PreconditionError("puncture: vertex " + std::to_string(v) + " lies on the boundary");
    if (!on.insert(v).second) throw PreconditionError("puncture: vertex " + std::to_string(v) + " listed twice");
  }
  Punctured out;
  if (points.empty()) {
    out.surface = S;
    return out;
  }
  auto edges = detail::sides_by_edge(S);
  bool adjacent = std::any_of(edges.begin(), edges.end(),
                              [&](const auto& kv) { return on.count(kv.first.first) && on.count(kv.first.second); });
  auto D = barycentric_subdivision(adjacent ? barycentric_subdivision(S).surface : S);
  out.surface = subsurface(D.surface, complement_of_star(D, on));
  require_valid(out.surface);
  auto cycles = boundary_components(out.surface);
  for (auto v : points) {
    VertexId link = D.center.front();
    for (const auto& tri : D.surface.triangles)
      if (tri[0] == v) {
        link = tri[1];
        break;
      }
    auto idx = cycle_through(cycles, link);
    if (!idx) throw Error("puncture: lost the hole around vertex " + std::to_string(v));
    out.hole_anchor.push_back(cycles[*idx].anchor());
  }
  return out;
}

/// A torus with one hole, used as the handle in grafts.
inline TriangulatedSurface punctured_torus() {
  auto P = puncture_surface(torus7(), {0}).surface;
  P.name = "handle";
  return P;
}

/// Grafts one handle at each listed interior vertex.
inline TriangulatedSurface graft_surface_handles(const TriangulatedSurface& S, const std::vector<VertexId>& points) {
  if (points.empty()) return S;
  auto P = puncture_surface(S, points);
  TriangulatedSurface out = P.surface;
  auto handle = punctured_torus();
  VertexId handle_anchor = boundary_components(handle).front().anchor();
  for (auto anchor : P.hole_anchor) {
    VertexId shift = append_disjoint(out, handle);
    out = glue_boundary_cycles(out, anchor, handle_anchor + shift);
  }
  out.name = S.name;
  return out;
}

struct Planarized {
  TriangulatedSurface surface;
  std::vector<VertexId> points;
};

/// Trades every handle of an orientable surface for a marked point: cuts
/// along a nonseparating cycle, cones off both new circles and marks one apex.
inline Planarized planarize(const TriangulatedSurface& S) {
  if (!is_orientable(S)) throw PreconditionError("planarize: '" + S.name + "' is not orientable");
  auto cls = classify_surface(S);
  Planarized out{S, {}};
  for (int handle = 0; handle < cls.genus; ++handle) {
    auto cyc = find_nonseparating_cycle(out.surface);
    for (int refine = 0; !cyc && refine < 2; ++refine) {
      out.surface = barycentric_subdivision(out.surface).surface;
      cyc = find_nonseparating_cycle(out.surface);
    }
    if (!cyc) throw Error("planarize: no nonseparating cycle found in '" + S.name + "'");
    auto before = boundary_components(out.surface);
    std::set<VertexId> old_anchors;
    for (auto& c : before) old_anchors.insert(c.anchor());
    auto cut = cut_along(out.surface, *cyc);
    std::vector<VertexId> fresh;
    for (auto& c : boundary_components(cut))
      if (!old_anchors.count(c.anchor())) fresh.push_back(c.anchor());
    if (fresh.size() != 2) throw Error("planarize: cut produced " + std::to_string(fresh.size()) + " new circles");
    auto idx_of = [](const TriangulatedSurface& T, VertexId anchor) {
      auto cs = boundary_components(T);
      for (std::size_t i = 0; i < cs.size(); ++i)
        if (cs[i].anchor() == anchor) return i;
      throw Error("planarize: lost a boundary circle");
    };
    auto [capped, apex] = cap_boundary(cut, idx_of(cut, fresh[0]));
    auto [capped2, apex2] = cap_boundary(capped, idx_of(capped, fresh[1]));
    (void)apex2;
    out.surface = capped2;
    out.points.push_back(apex);
  }
  out.surface.name = S.name;
  return out;
}

}  // namespace mfol
