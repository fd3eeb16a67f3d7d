#pragma once

// Test-only generators and brute-force oracles. Nothing here is used by the
// library itself.

#include "mfol/builders.hpp"

#include <random>

namespace mfol::oracle {

/// Random properly embedded curve system built from random walks.
inline CurveSystem random_curve_system(const TriangulatedSurface& S, std::mt19937_64& rng, int attempts = 6) {
  auto bdry = boundary_vertices(S);
  std::map<Edge, std::vector<SideRef>> sides;
  for (std::size_t t = 0; t < S.triangles.size(); ++t)
    for (int s = 0; s < 3; ++s) sides[unordered(side_vertices(S, {t, s}))].push_back({t, s});
  std::map<VertexId, std::vector<VertexId>> adj;
  for (auto& [e, ss] : sides)
    if (ss.size() == 2) {
      adj[e.first].push_back(e.second);
      adj[e.second].push_back(e.first);
    }
  std::vector<VertexId> bverts(bdry.begin(), bdry.end());
  std::vector<VertexId> iverts;
  for (auto& [v, nb] : adj)
    if (!bdry.count(v)) iverts.push_back(v);
  std::set<VertexId> used;
  CurveSystem G;
  auto pick = [&](const std::vector<VertexId>& xs) { return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)]; };
  for (int a = 0; a < attempts; ++a) {
    bool arc = !bverts.empty() && (iverts.empty() || rng() % 2 == 0);
    std::vector<VertexId> path;
    std::set<VertexId> on_path;
    VertexId cur = arc ? pick(bverts) : (iverts.empty() ? -1 : pick(iverts));
    if (cur < 0 || used.count(cur)) continue;
    path.push_back(cur);
    on_path.insert(cur);
    bool done = false;
    for (int step = 0; step < 40 && !done; ++step) {
      std::vector<VertexId> nb;
      for (auto w : adj[cur]) {
        if (used.count(w)) continue;
        if (!arc && w == path.front() && path.size() >= 3) nb.push_back(w);
        else if (!on_path.count(w) && (!bdry.count(w) || (arc && path.size() >= 1))) nb.push_back(w);
      }
      if (nb.empty()) break;
      VertexId w = pick(nb);
      if (!arc && w == path.front()) {
        done = true;
        break;
      }
      path.push_back(w);
      on_path.insert(w);
      cur = w;
      if (arc && bdry.count(w)) done = true;
    }
    if (!done) continue;
    CurveSystem piece = arc ? CurveSystem::path(path) : CurveSystem::cycle(path);
    auto candidate = unite(G, piece);
    if (!is_valid_curve_system(S, candidate)) continue;
    // Keep components apart: no vertex of the new piece may be adjacent in G's vertex set.
    G = candidate;
    for (auto v : path) used.insert(v);
  }
  return G;
}

/// All simple cycles through interior edges, each as a CurveSystem (small complexes only).
inline std::vector<CurveSystem> all_simple_interior_cycles(const TriangulatedSurface& S, std::size_t max_cycles = 200000) {
  auto bdry = boundary_vertices(S);
  std::map<Edge, int> count;
  for (std::size_t t = 0; t < S.triangles.size(); ++t)
    for (int s = 0; s < 3; ++s) count[unordered(side_vertices(S, {t, s}))]++;
  std::map<VertexId, std::vector<VertexId>> adj;
  for (auto& [e, c] : count)
    if (c == 2 && !bdry.count(e.first) && !bdry.count(e.second)) {
      adj[e.first].push_back(e.second);
      adj[e.second].push_back(e.first);
    }
  std::set<std::vector<Edge>> found;
  std::vector<VertexId> path;
  std::set<VertexId> on;
  std::function<void(VertexId, VertexId)> dfs = [&](VertexId start, VertexId cur) {
    if (found.size() >= max_cycles) return;
    for (auto w : adj[cur]) {
      if (w == start && path.size() >= 3) {
        found.insert(CurveSystem::cycle(path).edges);
      } else if (w > start && !on.count(w)) {
        path.push_back(w);
        on.insert(w);
        dfs(start, w);
        on.erase(w);
        path.pop_back();
      }
    }
  };
  for (auto& [v, nb] : adj) {
    path = {v};
    on = {v};
    dfs(v, v);
  }
  std::vector<CurveSystem> out;
  for (auto& es : found) out.push_back(CurveSystem(es));
  return out;
}

}  // namespace mfol::oracle
