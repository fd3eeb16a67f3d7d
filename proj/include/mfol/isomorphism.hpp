#pragma once

// Simplicial isomorphism of triangulated surfaces and of pairs (surface,
// marked subdomain), by propagation from one seed triangle.

#include "mfol/surface.hpp"

#include <deque>

namespace mfol {

/// A compact surface with a marked union of closed triangles.
struct PilePair {
  TriangulatedSurface outer;
  std::vector<std::size_t> inner;
};

namespace detail {

inline std::optional<std::map<VertexId, VertexId>> propagate(const TriangulatedSurface& A, const std::vector<char>& inA,
                                                             const TriangulatedSurface& B, const std::vector<char>& inB,
                                                             std::size_t tb, const std::array<int, 3>& perm) {
  std::map<VertexId, VertexId> vmap;
  std::set<VertexId> used;
  std::vector<std::optional<std::size_t>> tmap(A.size());
  std::vector<char> tused(B.size(), 0);
  auto bind = [&](VertexId a, VertexId b) {
    auto it = vmap.find(a);
    if (it != vmap.end()) return it->second == b;
    if (used.count(b)) return false;
    vmap[a] = b;
    used.insert(b);
    return true;
  };
  auto bind_tri = [&](std::size_t ta, std::size_t tbb) {
    if (tmap[ta]) return *tmap[ta] == tbb;
    if (tused[tbb] || inA[ta] != inB[tbb]) return false;
    tmap[ta] = tbb;
    tused[tbb] = 1;
    return true;
  };
  for (int k = 0; k < 3; ++k)
    if (!bind(A.triangles[0][k], B.triangles[tb][perm[k]])) return std::nullopt;
  if (!bind_tri(0, tb)) return std::nullopt;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    auto ta = queue.front();
    queue.pop_front();
    auto tbb = *tmap[ta];
    for (int s = 0; s < 3; ++s) {
      auto [u, w] = side_vertices(A, {ta, s});
      auto U = vmap.at(u), W = vmap.at(w);
      int sb = -1;
      for (int k = 0; k < 3; ++k)
        if (unordered(side_vertices(B, {tbb, k})) == unordered(std::pair<VertexId, VertexId>{U, W})) sb = k;
      if (sb < 0) return std::nullopt;
      auto ga = A.gluing[ta][s];
      auto gb = B.gluing[tbb][sb];
      if (ga.has_value() != gb.has_value()) return std::nullopt;
      if (!ga) continue;
      VertexId x = A.triangles[ga->tri][prev(ga->side)];
      VertexId y = B.triangles[gb->tri][prev(gb->side)];
      if (!bind(x, y)) return std::nullopt;
      bool fresh = !tmap[ga->tri];
      if (!bind_tri(ga->tri, gb->tri)) return std::nullopt;
      if (fresh) queue.push_back(ga->tri);
    }
  }
  for (const auto& m : tmap)
    if (!m) return std::nullopt;
  return vmap;
}

inline std::vector<char> membership(std::size_t n, const std::vector<std::size_t>& inner) {
  std::vector<char> in(n, 0);
  for (auto t : inner)
    if (t < n) in[t] = 1;
  return in;
}

}  // namespace detail

/// Vertex map of a simplicial isomorphism between connected surfaces that
/// also carries inner_a onto inner_b, or nullopt.
inline std::optional<std::map<VertexId, VertexId>> find_isomorphism(const TriangulatedSurface& A,
                                                                    const TriangulatedSurface& B,
                                                                    const std::vector<std::size_t>& inner_a = {},
                                                                    const std::vector<std::size_t>& inner_b = {}) {
  if (A.size() != B.size() || A.size() == 0) {
    if (A.size() == 0 && B.size() == 0) return std::map<VertexId, VertexId>{};
    return std::nullopt;
  }
  if (vertices(A).size() != vertices(B).size() || edge_count(A) != edge_count(B)) return std::nullopt;
  auto inA = detail::membership(A.size(), inner_a);
  auto inB = detail::membership(B.size(), inner_b);
  if (std::count(inA.begin(), inA.end(), 1) != std::count(inB.begin(), inB.end(), 1)) return std::nullopt;
  static constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
  for (std::size_t tb = 0; tb < B.size(); ++tb)
    for (const auto& p : perms)
      if (auto m = detail::propagate(A, inA, B, inB, tb, p)) return m;
  return std::nullopt;
}

/// Isomorphism of possibly disconnected surfaces, matching components.
inline bool isomorphic(const TriangulatedSurface& A, const TriangulatedSurface& B) {
  if (A.size() != B.size()) return false;
  auto ca = triangle_components(A);
  auto cb = triangle_components(B);
  if (ca.size() != cb.size()) return false;
  std::vector<char> taken(cb.size(), 0);
  for (const auto& a : ca) {
    auto sa = subsurface(A, a);
    bool matched = false;
    for (std::size_t j = 0; j < cb.size() && !matched; ++j) {
      if (taken[j] || cb[j].size() != a.size()) continue;
      if (find_isomorphism(sa, subsurface(B, cb[j]))) taken[j] = 1, matched = true;
    }
    if (!matched) return false;
  }
  return true;
}

inline bool isomorphic_pairs(const PilePair& a, const PilePair& b) {
  return find_isomorphism(a.outer, b.outer, a.inner, b.inner).has_value();
}

struct PilePartition {
  /// Member indices per class; the first member is the canonical representative.
  std::vector<std::vector<std::size_t>> classes;
  std::size_t representative(std::size_t cls) const { return classes.at(cls).front(); }
};

/// Groups pile pairs into simplicial isomorphism classes of pairs.
inline PilePartition partition_into_piles(const std::vector<PilePair>& pairs) {
  PilePartition out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    require_valid(pairs[i].outer);
    bool placed = false;
    for (auto& cls : out.classes)
      if (isomorphic_pairs(pairs[cls.front()], pairs[i])) {
        cls.push_back(i);
        placed = true;
        break;
      }
    if (!placed) out.classes.push_back({i});
  }
  return out;
}

}  // namespace mfol
