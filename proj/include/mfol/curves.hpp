#pragma once

// Simplicial 1-submanifolds of a surface's 1-skeleton and the operations
// that cut along them.

#include "mfol/surface.hpp"

#include <deque>
#include <functional>

namespace mfol {

using Edge = std::pair<VertexId, VertexId>;

/// Selected 1-skeleton edges, stored as sorted unordered vertex pairs.
/// Edge count is the simplicial volume.
struct CurveSystem {
  std::vector<Edge> edges;

  CurveSystem() = default;
  explicit CurveSystem(std::vector<Edge> es) : edges(std::move(es)) { normalize(); }

  void normalize() {
    for (auto& e : edges) e = unordered(e);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  std::size_t volume() const { return edges.size(); }
  bool empty() const { return edges.empty(); }
  bool contains(Edge e) const { return std::binary_search(edges.begin(), edges.end(), unordered(e)); }
  bool operator==(const CurveSystem&) const = default;

  static CurveSystem path(const std::vector<VertexId>& vs) {
    std::vector<Edge> es;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) es.push_back({vs[i], vs[i + 1]});
    return CurveSystem(std::move(es));
  }
  static CurveSystem cycle(const std::vector<VertexId>& vs) {
    auto c = path(vs);
    if (vs.size() > 2) {
      c.edges.push_back({vs.back(), vs.front()});
      c.normalize();
    }
    return c;
  }
};

inline CurveSystem unite(const CurveSystem& a, const CurveSystem& b) {
  std::vector<Edge> es = a.edges;
  es.insert(es.end(), b.edges.begin(), b.edges.end());
  return CurveSystem(std::move(es));
}

inline std::size_t intersection_volume(const CurveSystem& a, const CurveSystem& b) {
  std::size_t n = 0;
  for (const auto& e : a.edges) n += b.contains(e);
  return n;
}

struct CurveComponent {
  bool is_arc = false;
  /// Path order for arcs (endpoints first and last); cyclic order for cycles.
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;
};

/// Components of the graph spanned by the edges, with no reference to a surface.
inline std::vector<CurveComponent> curve_components(const CurveSystem& G) {
  std::map<VertexId, std::vector<VertexId>> adj;
  for (auto [a, b] : G.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<VertexId> seen;
  std::vector<CurveComponent> out;
  auto walk = [&](VertexId start, bool arc) {
    CurveComponent c;
    c.is_arc = arc;
    VertexId prev = start, cur = start;
    seen.insert(start);
    c.vertices.push_back(start);
    for (;;) {
      VertexId nxt = cur;
      for (auto w : adj[cur])
        if (!seen.count(w) && (w != prev || adj[cur].size() == 1)) {
          nxt = w;
          break;
        }
      if (nxt == cur) break;
      c.edges.push_back(unordered(Edge{cur, nxt}));
      prev = cur;
      cur = nxt;
      seen.insert(cur);
      c.vertices.push_back(cur);
    }
    if (!arc && c.vertices.size() > 2) c.edges.push_back(unordered(Edge{c.vertices.back(), c.vertices.front()}));
    std::sort(c.edges.begin(), c.edges.end());
    out.push_back(std::move(c));
  };
  for (const auto& [v, nb] : adj)
    if (nb.size() == 1 && !seen.count(v)) walk(v, true);
  for (const auto& [v, nb] : adj)
    if (!seen.count(v)) walk(v, nb.size() != 2);
  return out;
}

namespace detail {

/// Maps each unordered vertex pair to the sides carrying it.
inline std::map<Edge, std::vector<SideRef>> sides_by_edge(const TriangulatedSurface& S) {
  std::map<Edge, std::vector<SideRef>> out;
  for (std::size_t t = 0; t < S.triangles.size(); ++t)
    for (int s = 0; s < 3; ++s) out[unordered(side_vertices(S, {t, s}))].push_back({t, s});
  return out;
}

}  // namespace detail

/// Checks that G is a properly embedded simplicial 1-submanifold of S.
/// Throws ValidationError naming the offending vertex or edge.
inline std::vector<CurveComponent> validate_curve_system(const TriangulatedSurface& S, const CurveSystem& G) {
  auto sides = detail::sides_by_edge(S);
  auto bdry = boundary_vertices(S);
  std::map<VertexId, int> degree;
  for (auto e : G.edges) {
    auto it = sides.find(e);
    std::string name = "{" + std::to_string(e.first) + "," + std::to_string(e.second) + "}";
    if (it == sides.end()) throw ValidationError("edge " + name + " is not in the 1-skeleton");
    if (it->second.size() != 2 || S.gluing[it->second[0].tri][it->second[0].side] != it->second[1])
      throw ValidationError("edge " + name + " is a boundary or ambiguous edge");
    if (++degree[e.first] > 2) throw ValidationError("vertex " + std::to_string(e.first) + " meets more than 2 edges");
    if (++degree[e.second] > 2)
      throw ValidationError("vertex " + std::to_string(e.second) + " meets more than 2 edges");
  }
  auto comps = curve_components(G);
  for (const auto& c : comps) {
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
      VertexId v = c.vertices[i];
      bool endpoint = c.is_arc && (i == 0 || i + 1 == c.vertices.size());
      if (endpoint && !bdry.count(v))
        throw ValidationError("arc endpoint " + std::to_string(v) + " is not on the boundary");
      if (!endpoint && bdry.count(v))
        throw ValidationError("vertex " + std::to_string(v) + " touches the boundary inside a curve");
    }
  }
  return comps;
}

inline bool is_valid_curve_system(const TriangulatedSurface& S, const CurveSystem& G) {
  try {
    validate_curve_system(S, G);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

inline std::size_t arc_count(const std::vector<CurveComponent>& comps) {
  return static_cast<std::size_t>(std::count_if(comps.begin(), comps.end(), [](auto& c) { return c.is_arc; }));
}

struct CutResult {
  TriangulatedSurface surface;
  /// Original label of every vertex of the cut surface.
  std::map<VertexId, VertexId> origin;
  /// Side pairs that were unglued, in the labeling of the cut surface.
  std::vector<std::pair<SideRef, SideRef>> cut_pairs;
};

/// Cuts S along G: glued sides on G are separated and each vertex of G is
/// split into one copy per remaining corner fan. The copy containing the
/// lowest corner keeps the original label; others get fresh labels.
inline CutResult cut_along_detailed(const TriangulatedSurface& S, const CurveSystem& G) {
  require_valid(S);
  validate_curve_system(S, G);
  CutResult R;
  R.surface = S;
  auto& T = R.surface;
  auto sides = detail::sides_by_edge(S);
  for (auto e : G.edges) {
    auto a = sides[e][0], b = sides[e][1];
    R.cut_pairs.push_back({a, b});
    unglue_side(T, a);
  }
  for (auto v : vertices(S)) R.origin[v] = v;
  std::set<VertexId> on_curve;
  for (auto [a, b] : G.edges) {
    on_curve.insert(a);
    on_curve.insert(b);
  }
  VertexId fresh = max_vertex(S) + 1;
  auto corners = corners_by_vertex(T);
  std::vector<std::pair<std::pair<std::size_t, int>, VertexId>> relabel;
  for (auto v : on_curve) {
    auto fans = detail::corner_fans(T, v, corners[v]);
    std::sort(fans.begin(), fans.end(), [](auto& x, auto& y) {
      return *std::min_element(x.begin(), x.end()) < *std::min_element(y.begin(), y.end());
    });
    for (std::size_t f = 1; f < fans.size(); ++f) {
      VertexId nv = fresh++;
      R.origin[nv] = v;
      for (auto c : fans[f]) relabel.push_back({c, nv});
    }
  }
  for (auto [c, nv] : relabel) T.triangles[c.first][c.second] = nv;
  return R;
}

inline TriangulatedSurface cut_along(const TriangulatedSurface& S, const CurveSystem& G) {
  return cut_along_detailed(S, G).surface;
}

/// Inverse of cut_along_detailed: reglues the separated sides and restores labels.
inline TriangulatedSurface reglue(const CutResult& R) {
  TriangulatedSurface T = R.surface;
  for (auto [a, b] : R.cut_pairs) glue_sides(T, a, b);
  for (auto& tri : T.triangles)
    for (auto& v : tri) v = R.origin.at(v);
  return T;
}

/// True iff cutting along G leaves a connected surface with exactly
/// target_boundary boundary circles. Invalid curve systems never reduce.
inline bool is_reducing(const TriangulatedSurface& S, const CurveSystem& G, int target_boundary = 1) {
  if (!is_valid_curve_system(S, G)) return false;
  auto cut = cut_along(S, G);
  return is_connected(cut) && static_cast<int>(boundary_components(cut).size()) == target_boundary;
}

struct Subdivision {
  TriangulatedSurface surface;
  /// Label of the midpoint of each original edge, keyed by unordered pair.
  std::map<Edge, VertexId> midpoint;
  /// Label of the center of each original triangle.
  std::vector<VertexId> center;
  /// Children of original triangle t are 6t .. 6t+5.
  static std::size_t child(std::size_t t, int k) { return 6 * t + static_cast<std::size_t>(k); }
};

/// First barycentric subdivision. Original labels are kept; midpoints then
/// centers receive fresh labels in side order.
inline Subdivision barycentric_subdivision(const TriangulatedSurface& S) {
  require_valid(S);
  Subdivision D;
  VertexId fresh = max_vertex(S) + 1;
  std::map<SideRef, VertexId> mid_of_side;
  for (std::size_t t = 0; t < S.triangles.size(); ++t)
    for (int s = 0; s < 3; ++s) {
      SideRef r{t, s};
      if (mid_of_side.count(r)) continue;
      VertexId m = fresh++;
      mid_of_side[r] = m;
      if (auto g = S.gluing[t][s]) mid_of_side[*g] = m;
      D.midpoint.emplace(unordered(side_vertices(S, r)), m);
    }
  std::vector<std::array<VertexId, 3>> tris;
  tris.reserve(S.triangles.size() * 6);
  for (std::size_t t = 0; t < S.triangles.size(); ++t) {
    VertexId c = fresh++;
    D.center.push_back(c);
    const auto& v = S.triangles[t];
    for (int s = 0; s < 3; ++s) {
      VertexId m = mid_of_side[{t, s}];
      tris.push_back({v[s], m, c});
      tris.push_back({m, v[detail::next(s)], c});
    }
  }
  D.surface = from_triangles(S.name, std::move(tris));
  return D;
}

/// Vertices of the subdivision lying on G (original vertices and edge midpoints).
inline std::set<VertexId> subdivided_curve_vertices(const Subdivision& D, const CurveSystem& G) {
  std::set<VertexId> on;
  for (auto e : G.edges) {
    on.insert(e.first);
    on.insert(e.second);
    on.insert(D.midpoint.at(e));
  }
  return on;
}

/// Triangles of the subdivision away from the open star of G.
inline std::vector<std::size_t> complement_of_star(const Subdivision& D, const std::set<VertexId>& on) {
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < D.surface.triangles.size(); ++t) {
    const auto& tri = D.surface.triangles[t];
    if (!on.count(tri[0]) && !on.count(tri[1]) && !on.count(tri[2])) keep.push_back(t);
  }
  return keep;
}

/// S minus the open star of G in the first barycentric subdivision.
inline TriangulatedSurface neighborhood_complement(const TriangulatedSurface& S, const CurveSystem& G) {
  validate_curve_system(S, G);
  auto D = barycentric_subdivision(S);
  if (G.empty()) return D.surface;
  auto out = subsurface(D.surface, complement_of_star(D, subdivided_curve_vertices(D, G)));
  require_valid(out);
  return out;
}

/// Searches fundamental cycles of a BFS forest of the interior 1-skeleton
/// for one whose cut keeps S connected. Returns nullopt for genus 0; a
/// positive-genus surface whose handles are invisible to its interior
/// skeleton (e.g. every vertex on the boundary) also yields nullopt, and
/// one subdivision fixes that.
inline std::optional<CurveSystem> find_nonseparating_cycle(const TriangulatedSurface& S) {
  require_valid(S);
  auto bdry = boundary_vertices(S);
  auto sides = detail::sides_by_edge(S);
  std::map<VertexId, std::vector<VertexId>> adj;
  std::vector<Edge> interior_edges;
  for (const auto& [e, ss] : sides) {
    if (ss.size() != 2 || bdry.count(e.first) || bdry.count(e.second)) continue;
    interior_edges.push_back(e);
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  std::map<VertexId, VertexId> parent;
  std::map<VertexId, int> depth;
  std::set<Edge> tree;
  for (const auto& [root, nb] : adj) {
    if (parent.count(root)) continue;
    parent[root] = root;
    depth[root] = 0;
    std::deque<VertexId> q{root};
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (auto w : adj[u])
        if (!parent.count(w)) {
          parent[w] = u;
          depth[w] = depth[u] + 1;
          tree.insert(unordered(Edge{u, w}));
          q.push_back(w);
        }
    }
  }
  for (auto e : interior_edges) {
    if (tree.count(e)) continue;
    std::vector<VertexId> left{e.first}, right{e.second};
    VertexId a = e.first, b = e.second;
    while (a != b) {
      if (depth[a] >= depth[b]) {
        a = parent[a];
        left.push_back(a);
      } else {
        b = parent[b];
        right.push_back(b);
      }
    }
    right.pop_back();
    std::vector<VertexId> loop = left;
    loop.insert(loop.end(), right.rbegin(), right.rend());
    auto G = CurveSystem::cycle(loop);
    if (is_connected(cut_along(S, G))) return G;
  }
  return std::nullopt;
}

}  // namespace mfol
