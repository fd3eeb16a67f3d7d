#pragma once

// Exhaustions of truncated leaves by nested simplicial domains, minimal
// reducing curve systems, the stagewise reduction sequence and the simple
// filtration obtained by removing a small neighbourhood of the reducing arcs.

#include "mfol/foliation.hpp"
#include "mfol/gluing.hpp"

#include <numeric>

namespace mfol {

struct Exhaustion {
  TriangulatedSurface ambient;
  /// Ambient triangle ids of each domain, sorted.
  std::vector<std::vector<std::size_t>> domains;
  /// End count of the ideal leaf; the reduction targets this many boundary circles.
  int ends = 1;
};

inline TriangulatedSurface domain_surface(const Exhaustion& E, std::size_t n) {
  return subsurface(E.ambient, E.domains.at(n), E.ambient.name + "_" + std::to_string(n));
}

inline std::vector<std::string> exhaustion_errors(const Exhaustion& E) {
  std::vector<std::string> out;
  if (E.ends != 1 && E.ends != 2) out.push_back("declared ends must be 1 or 2");
  if (!validation_errors(E.ambient).empty()) out.push_back("ambient surface is invalid");
  if (E.domains.empty()) out.push_back("no domains");
  for (std::size_t n = 0; n < E.domains.size(); ++n) {
    const auto& d = E.domains[n];
    std::string tag = "domain " + std::to_string(n);
    if (d.empty()) {
      out.push_back(tag + " is empty");
      continue;
    }
    if (!std::is_sorted(d.begin(), d.end()) || std::adjacent_find(d.begin(), d.end()) != d.end())
      out.push_back(tag + " lists triangles out of order or twice");
    if (d.back() >= E.ambient.triangles.size()) {
      out.push_back(tag + " refers to a missing triangle");
      continue;
    }
    auto S = domain_surface(E, n);
    if (!validation_errors(S).empty()) out.push_back(tag + " is not a surface");
    else if (!is_connected(S)) out.push_back(tag + " is disconnected");
    if (n > 0) {
      const auto& p = E.domains[n - 1];
      if (!std::includes(d.begin(), d.end(), p.begin(), p.end())) out.push_back(tag + " does not contain its predecessor");
      else if (p.size() == d.size()) out.push_back(tag + " equals its predecessor");
    }
  }
  return out;
}

inline void require_valid(const Exhaustion& E) {
  auto errs = exhaustion_errors(E);
  if (errs.empty()) return;
  std::string msg = "invalid exhaustion:";
  for (const auto& e : errs) msg += " " + e + ";";
  throw ValidationError(msg);
}

enum class Optimality { Exact, Heuristic };

inline std::string to_string(Optimality o) { return o == Optimality::Exact ? "yes" : "heuristic"; }

struct Reduction {
  CurveSystem curves;
  /// Edges shared with the previous stage's system.
  std::size_t intersection = 0;
  Optimality optimal = Optimality::Exact;
  /// Base edges plus kept components offered to the search.
  std::size_t candidates = 0;
};

struct ReductionOptions {
  std::size_t exact_limit = 30;
};

namespace detail {

/// Search space for one stage: free edges of the new domain plus components
/// of the previous system, which are kept or dropped as a whole.
struct ReductionProblem {
  TriangulatedSurface surface;
  int target = 1;
  std::set<VertexId> bdry;
  std::vector<Edge> base;
  std::vector<CurveComponent> groups;
  /// Vertices of the previous domain; only kept components may touch them.
  std::set<VertexId> old_vertices;

  std::size_t candidates() const { return base.size() + groups.size(); }
};

inline std::set<Edge> all_edges(const TriangulatedSurface& S) {
  std::set<Edge> out;
  for (const auto& [e, ss] : sides_by_edge(S)) out.insert(e);
  return out;
}

inline std::vector<Edge> interior_edges(const TriangulatedSurface& S) {
  std::vector<Edge> out;
  for (const auto& [e, ss] : sides_by_edge(S))
    if (ss.size() == 2 && S.gluing[ss[0].tri][ss[0].side] == ss[1]) out.push_back(e);
  return out;
}

inline ReductionProblem make_problem(const TriangulatedSurface& next, const TriangulatedSurface* prev,
                                     const CurveSystem& prev_system, int target) {
  ReductionProblem P;
  P.surface = next;
  P.target = target;
  P.bdry = boundary_vertices(next);
  std::set<Edge> old_edges;
  if (prev) {
    for (auto v : vertices(*prev)) P.old_vertices.insert(v);
    old_edges = all_edges(*prev);
  }
  auto inner = interior_edges(next);
  std::set<Edge> inner_set(inner.begin(), inner.end());
  for (const auto& c : curve_components(prev_system)) {
    for (auto e : c.edges)
      if (!inner_set.count(e)) throw PreconditionError("previous system is not interior to the new domain");
    P.groups.push_back(c);
  }
  std::set<VertexId> ends;
  for (const auto& g : P.groups)
    if (g.is_arc) ends.insert({g.vertices.front(), g.vertices.back()});
  for (auto e : inner) {
    if (old_edges.count(e)) continue;
    auto ok = [&](VertexId v) { return !P.old_vertices.count(v) || ends.count(v); };
    if (ok(e.first) && ok(e.second)) P.base.push_back(e);
  }
  return P;
}

/// Boundary circles of S reachable from each other through the usable edges;
/// returns the number of classes. Arcs can never merge circles in distinct classes.
inline std::size_t circle_classes(const ReductionProblem& P, const std::vector<Edge>& usable) {
  std::map<VertexId, VertexId> parent;
  std::function<VertexId(VertexId)> find = [&](VertexId v) {
    auto it = parent.find(v);
    if (it == parent.end() || it->second == v) return v;
    return it->second = find(it->second);
  };
  auto join = [&](VertexId a, VertexId b) {
    a = find(a), b = find(b);
    if (a != b) parent[a] = b;
  };
  auto cycles = boundary_components(P.surface);
  for (const auto& c : cycles)
    for (auto v : c.vertices) join(v, c.anchor());
  for (auto [a, b] : usable) join(a, b);
  std::set<VertexId> roots;
  for (const auto& c : cycles) roots.insert(find(c.anchor()));
  return roots.size();
}

/// Exact search with a fixed set of kept components: fewest free edges
/// completing them to a reducing system, lexicographically smallest on ties.
/// `limit` caps the number of free edges tried.
inline std::optional<CurveSystem> complete_exact(const ReductionProblem& P, const std::vector<std::size_t>& kept,
                                                 std::size_t limit) {
  std::map<VertexId, int> degree;
  std::set<VertexId> allowed_old;
  std::vector<Edge> fixed;
  for (auto g : kept) {
    const auto& c = P.groups[g];
    fixed.insert(fixed.end(), c.edges.begin(), c.edges.end());
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
      bool end = c.is_arc && (i == 0 || i + 1 == c.vertices.size());
      degree[c.vertices[i]] = end ? 1 : 2;
      if (end) allowed_old.insert(c.vertices[i]);
    }
  }
  std::vector<Edge> edges;
  for (auto e : P.base) {
    auto ok = [&](VertexId v) { return !P.old_vertices.count(v) || allowed_old.count(v); };
    if (ok(e.first) && ok(e.second)) edges.push_back(e);
  }
  std::vector<Edge> usable = edges;
  usable.insert(usable.end(), fixed.begin(), fixed.end());
  if (static_cast<int>(circle_classes(P, usable)) > P.target) return std::nullopt;
  auto cap = [&](VertexId v) { return P.bdry.count(v) ? 1 : 2; };
  auto open_count = [&] {
    int n = 0;
    for (auto& [v, d] : degree)
      if (d == 1 && !P.bdry.count(v)) ++n;
    return n;
  };
  int open = open_count();
  std::vector<Edge> chosen;
  std::optional<CurveSystem> best;
  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t from, std::size_t left) {
    if (2 * static_cast<int>(left) < open) return;
    if (left == 0) {
      if (open != 0) return;
      std::vector<Edge> all = fixed;
      all.insert(all.end(), chosen.begin(), chosen.end());
      CurveSystem G(std::move(all));
      if (is_reducing(P.surface, G, P.target) && (!best || G.edges < best->edges)) best = G;
      return;
    }
    for (std::size_t i = from; i + left <= edges.size(); ++i) {
      auto [a, b] = edges[i];
      int da = degree[a], db = degree[b];
      if (da >= cap(a) || db >= cap(b)) continue;
      auto delta = [&](VertexId v, int d) {
        if (P.bdry.count(v)) return 0;
        return d == 0 ? 1 : -1;
      };
      int change = delta(a, da) + delta(b, db);
      ++degree[a], ++degree[b];
      open += change;
      chosen.push_back(edges[i]);
      dfs(i + 1, left - 1);
      chosen.pop_back();
      open -= change;
      --degree[a], --degree[b];
    }
  };
  for (std::size_t k = static_cast<std::size_t>((open + 1) / 2); k <= std::min(limit, edges.size()); ++k) {
    dfs(0, k);
    if (best) return best;
  }
  return std::nullopt;
}

/// Greedy completion: repeatedly adds the cheapest path joining two distinct
/// boundary circles of the current cut, measured by (shared edges, length).
/// A path touching the previous domain runs through a whole kept component.
inline std::optional<CurveSystem> complete_greedy(const ReductionProblem& P, bool allow_groups) {
  using Cost = std::pair<std::size_t, std::size_t>;
  struct Move {
    VertexId to;
    Cost cost;
    std::vector<Edge> edges;
    std::vector<VertexId> touched;
  };
  std::map<VertexId, std::size_t> group_at;
  if (allow_groups)
    for (std::size_t g = 0; g < P.groups.size(); ++g)
      if (P.groups[g].is_arc) {
        group_at[P.groups[g].vertices.front()] = g;
        group_at[P.groups[g].vertices.back()] = g;
      }
  auto through = [&](VertexId v) {
    const auto& c = P.groups[group_at.at(v)];
    return c.vertices.front() == v ? c.vertices.back() : c.vertices.front();
  };
  std::map<VertexId, std::vector<Move>> moves;
  auto add = [&](VertexId u, VertexId w) {
    Edge e = unordered(Edge{u, w});
    if (!P.old_vertices.count(w)) {
      moves[u].push_back({w, {0, 1}, {e}, {w}});
    } else if (group_at.count(w)) {
      const auto& c = P.groups[group_at[w]];
      Move m{through(w), {c.edges.size(), c.edges.size() + 1}, c.edges, c.vertices};
      m.edges.push_back(e);
      moves[u].push_back(std::move(m));
    }
  };
  for (auto [a, b] : P.base) {
    if (!P.old_vertices.count(a) || group_at.count(a)) add(a, b);
    if (!P.old_vertices.count(b) || group_at.count(b)) add(b, a);
  }
  std::vector<Edge> current;
  std::set<VertexId> used;
  for (;;) {
    CurveSystem G(current);
    auto cut = cut_along_detailed(P.surface, G);
    auto cycles = boundary_components(cut.surface);
    if (static_cast<int>(cycles.size()) == P.target) return G;
    std::map<VertexId, std::size_t> cls;
    for (std::size_t i = 0; i < cycles.size(); ++i)
      for (auto v : cycles[i].vertices)
        if (P.bdry.count(v) && !used.count(v)) cls[v] = i;
    using Path = std::pair<Cost, std::vector<VertexId>>;
    std::optional<std::pair<Path, std::vector<const Move*>>> best;
    for (std::size_t src = 0; src < cycles.size(); ++src) {
      std::map<VertexId, Cost> dist;
      std::map<VertexId, std::pair<VertexId, const Move*>> back;
      std::set<std::pair<Cost, VertexId>> queue;
      std::set<VertexId> sources;
      auto relax = [&](VertexId w, Cost nd, VertexId from, const Move* m) {
        auto it = dist.find(w);
        if (it != dist.end() && !(nd < it->second)) return;
        if (it != dist.end()) queue.erase({it->second, w});
        dist[w] = nd;
        if (m) back[w] = {from, m};
        queue.insert({nd, w});
      };
      for (auto& [v, c] : cls) {
        if (c != src) continue;
        if (!P.old_vertices.count(v)) {
          sources.insert(v);
          relax(v, {0, 0}, v, nullptr);
        }
      }
      while (!queue.empty()) {
        auto [d, u] = *queue.begin();
        queue.erase(queue.begin());
        if (!sources.count(u) && P.bdry.count(u)) continue;
        for (const auto& m : moves[u]) {
          if (used.count(m.to) || sources.count(m.to)) continue;
          if (std::any_of(m.touched.begin(), m.touched.end(), [&](VertexId x) { return used.count(x); })) continue;
          if (P.bdry.count(m.to) && !cls.count(m.to)) continue;
          relax(m.to, {d.first + m.cost.first, d.second + m.cost.second}, u, &m);
        }
      }
      for (auto& [v, c] : cls) {
        if (c == src || !dist.count(v) || sources.count(v)) continue;
        Path p{dist[v], {v}};
        std::vector<const Move*> steps;
        for (VertexId x = v; back.count(x); x = back[x].first) {
          steps.push_back(back[x].second);
          p.second.push_back(back[x].first);
        }
        if (!best || p < best->first) best = {p, steps};
      }
    }
    if (!best) return std::nullopt;
    for (auto v : best->first.second) used.insert(v);
    for (const Move* m : best->second) {
      current.insert(current.end(), m->edges.begin(), m->edges.end());
      used.insert(m->touched.begin(), m->touched.end());
    }
  }
}

inline Reduction solve(const ReductionProblem& P, const CurveSystem& prev_system, const ReductionOptions& opts) {
  if (boundary_components(P.surface).empty()) throw PreconditionError("no boundary to reduce");
  Reduction out;
  out.candidates = P.candidates();
  auto finish = [&](CurveSystem G, Optimality o) {
    out.intersection = intersection_volume(G, prev_system);
    out.curves = std::move(G);
    out.optimal = o;
    return out;
  };
  if (P.candidates() <= opts.exact_limit && P.groups.size() < 16) {
    // Subsets of kept components by shared volume; for each volume the best completion.
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> subsets;
    for (std::uint32_t mask = 0; mask < (1u << P.groups.size()); ++mask) {
      std::vector<std::size_t> kept;
      std::size_t vol = 0;
      for (std::size_t g = 0; g < P.groups.size(); ++g)
        if (mask >> g & 1u) kept.push_back(g), vol += P.groups[g].edges.size();
      subsets.push_back({vol, kept});
    }
    std::stable_sort(subsets.begin(), subsets.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::optional<std::pair<std::size_t, CurveSystem>> best;
    for (const auto& [vol, kept] : subsets) {
      if (best && vol > best->first) break;
      std::size_t limit = P.base.size();
      if (best) limit = best->second.volume() - vol;
      auto G = complete_exact(P, kept, limit);
      if (!G) continue;
      if (!best || G->volume() < best->second.volume() ||
          (G->volume() == best->second.volume() && G->edges < best->second.edges))
        best = {vol, *G};
    }
    if (!best) throw PreconditionError("no reducing system exists in this domain");
    return finish(best->second, Optimality::Exact);
  }
  auto G = complete_greedy(P, false);
  if (!G) G = complete_greedy(P, true);
  if (!G) throw PreconditionError("no reducing system found in this domain");
  return finish(*G, Optimality::Heuristic);
}

}  // namespace detail

/// Smallest curve system (by edge count) whose cut leaves Ω connected with
/// `target` boundary circles; ties go to the lexicographically smallest edge list.
inline Reduction minimal_reducing_system(const TriangulatedSurface& omega, int target = 1, ReductionOptions opts = {}) {
  require_valid(omega);
  if (!is_connected(omega)) throw PreconditionError("domain is disconnected");
  auto P = detail::make_problem(omega, nullptr, {}, target);
  return detail::solve(P, {}, opts);
}

/// Reducing system for the next domain that enters the previous domain only
/// along whole components of the previous system, minimising first the
/// shared volume, then the total volume, then the edge list.
inline Reduction extend_reduction(const TriangulatedSurface& next, const TriangulatedSurface& prev,
                                  const CurveSystem& prev_system, int target = 1, ReductionOptions opts = {}) {
  require_valid(next);
  if (!is_connected(next)) throw PreconditionError("domain is disconnected");
  if (!is_reducing(prev, prev_system, target)) throw PreconditionError("previous system does not reduce the previous domain");
  auto P = detail::make_problem(next, &prev, prev_system, target);
  return detail::solve(P, prev_system, opts);
}

struct ReductionStage {
  Reduction reduction;
  /// Union of the stage systems so far.
  CurveSystem cumulative;
};

struct ReductionSequence {
  std::vector<ReductionStage> stages;
  int target = 1;

  bool exact() const {
    return std::all_of(stages.begin(), stages.end(), [](auto& s) { return s.reduction.optimal == Optimality::Exact; });
  }
};

inline ReductionSequence build_reduction_sequence(const Exhaustion& E, ReductionOptions opts = {}) {
  require_valid(E);
  ReductionSequence out;
  out.target = E.ends;
  TriangulatedSurface prev;
  for (std::size_t n = 0; n < E.domains.size(); ++n) {
    auto omega = domain_surface(E, n);
    ReductionStage st;
    if (n == 0) {
      st.reduction = minimal_reducing_system(omega, E.ends, opts);
      st.cumulative = st.reduction.curves;
    } else {
      st.reduction = extend_reduction(omega, prev, out.stages.back().reduction.curves, E.ends, opts);
      st.cumulative = unite(out.stages.back().cumulative, st.reduction.curves);
    }
    out.stages.push_back(std::move(st));
    prev = std::move(omega);
  }
  return out;
}

/// Components of the cumulative system at stage n that later stages no
/// longer extend: the compact leaves closed off by then.
inline std::vector<CurveComponent> closed_leaves(const ReductionSequence& R, std::size_t n) {
  std::vector<CurveComponent> out;
  const auto& live = R.stages.at(n).reduction.curves;
  for (auto& c : curve_components(R.stages.at(n).cumulative))
    if (!live.contains(c.edges.front())) out.push_back(c);
  return out;
}

struct SimpleFiltration {
  /// Barycentric subdivision of the ambient surface; all domains live in it.
  Subdivision refined;
  std::vector<std::vector<std::size_t>> domains;

  TriangulatedSurface surface(std::size_t n) const {
    return subsurface(refined.surface, domains.at(n), refined.surface.name + "_simple_" + std::to_string(n));
  }
};

inline bool is_nested(const std::vector<std::vector<std::size_t>>& domains) {
  for (std::size_t n = 1; n < domains.size(); ++n)
    if (!std::includes(domains[n].begin(), domains[n].end(), domains[n - 1].begin(), domains[n - 1].end()))
      return false;
  return true;
}

/// Each domain minus the open star of its stage system, inside one common
/// subdivision so that nesting is a subset relation.
inline SimpleFiltration build_simple_filtration(const Exhaustion& E, const ReductionSequence& R) {
  if (R.stages.size() != E.domains.size()) throw PreconditionError("reduction sequence does not match the exhaustion");
  SimpleFiltration F;
  F.refined = barycentric_subdivision(E.ambient);
  for (std::size_t n = 0; n < E.domains.size(); ++n) {
    const auto& G = R.stages[n].reduction.curves;
    auto on = G.empty() ? std::set<VertexId>{} : subdivided_curve_vertices(F.refined, G);
    std::vector<std::size_t> keep;
    for (auto t : E.domains[n])
      for (int k = 0; k < 6; ++k) {
        auto c = Subdivision::child(t, k);
        const auto& tri = F.refined.surface.triangles[c];
        if (!on.count(tri[0]) && !on.count(tri[1]) && !on.count(tri[2])) keep.push_back(c);
      }
    F.domains.push_back(std::move(keep));
    auto S = F.surface(n);
    require_valid(S);
    auto b = boundary_components(S).size();
    if (!is_connected(S) || static_cast<int>(b) != E.ends)
      throw Error("simple domain " + std::to_string(n) + " has " + std::to_string(b) + " boundary circles, expected " +
                  std::to_string(E.ends));
  }
  return F;
}

inline SimpleFiltration build_simple_filtration(const Exhaustion& E, ReductionOptions opts = {}) {
  return build_simple_filtration(E, build_reduction_sequence(E, opts));
}

/// Children in the subdivision of the given ambient triangles.
inline std::vector<std::size_t> refined_domain(const std::vector<std::size_t>& tris) {
  std::vector<std::size_t> out;
  for (auto t : tris)
    for (int k = 0; k < 6; ++k) out.push_back(Subdivision::child(t, k));
  return out;
}

/// Grid family with one handle per unit. With one end the units line up
/// along a strip and each domain adds a unit; with two ends they stack
/// around a cylinder and domains grow alternately up and down. In every
/// domain the newest unit's tube is missing, so its two holes are extra
/// boundary circles.
inline Exhaustion genus_growing_exhaustion(int stages, int ends) {
  if (stages < 1) throw PreconditionError("exhaustion needs at least one stage");
  if (ends != 1 && ends != 2) throw PreconditionError("declared ends must be 1 or 2");
  GridSpec spec;
  // unit k owns holes 2k and 2k+1 and tube k
  if (ends == 1) {
    spec.width = 4 * stages + 1;
    spec.height = 3;
    for (int k = 0; k < stages; ++k) {
      spec.holes.push_back({4 * k + 1, 1});
      spec.holes.push_back({4 * k + 3, 1});
    }
  } else {
    spec.width = 5;
    spec.height = 2 * stages + 1;
    spec.periodic_x = true;
    for (int k = 0; k < stages; ++k) {
      spec.holes.push_back({1, 2 * k + 1});
      spec.holes.push_back({3, 2 * k + 1});
    }
  }
  for (int k = 0; k < stages; ++k)
    spec.tubes.push_back({static_cast<std::size_t>(2 * k), static_cast<std::size_t>(2 * k + 1), 2});
  auto grid = build_grid_surface(spec, ends == 1 ? "strip" : "cylinder");
  Exhaustion E;
  E.ambient = grid.surface;
  E.ends = ends;
  std::vector<int> order;
  if (ends == 1) {
    for (int k = 0; k < stages; ++k) order.push_back(k);
  } else {
    int mid = (stages - 1) / 2;
    order.push_back(mid);
    for (int d = 1; static_cast<int>(order.size()) < stages; ++d) {
      if (mid + d < stages) order.push_back(mid + d);
      if (mid - d >= 0 && static_cast<int>(order.size()) < stages) order.push_back(mid - d);
    }
  }
  for (int n = 0; n < stages; ++n) {
    std::set<int> units(order.begin(), order.begin() + n + 1);
    int lo = *units.begin(), hi = *units.rbegin();
    std::vector<std::size_t> tris;
    for (std::size_t t = 0; t < grid.tags.size(); ++t) {
      const auto& tag = grid.tags[t];
      bool in = false;
      if (tag.kind == TriangleTag::Kind::Tube) in = units.count(tag.a) && tag.a != order[n];
      else if (ends == 1) in = tag.a < 4 * hi + 5;
      else in = tag.b >= 2 * lo && tag.b < 2 * hi + 3;
      if (in) tris.push_back(t);
    }
    E.domains.push_back(std::move(tris));
  }
  return E;
}

/// Exhaustion of a disk by concentric grid squares; every domain already
/// has connected boundary.
inline Exhaustion disk_exhaustion(int stages) {
  if (stages < 1) throw PreconditionError("exhaustion needs at least one stage");
  GridSpec spec;
  spec.width = spec.height = 2 * stages;
  auto grid = build_grid_surface(spec, "disk");
  Exhaustion E;
  E.ambient = grid.surface;
  for (int n = 0; n < stages; ++n) {
    int lo = stages - 1 - n, hi = stages + n;
    std::vector<std::size_t> tris;
    for (std::size_t t = 0; t < grid.tags.size(); ++t)
      if (grid.tags[t].a >= lo && grid.tags[t].a <= hi && grid.tags[t].b >= lo && grid.tags[t].b <= hi)
        tris.push_back(t);
    E.domains.push_back(std::move(tris));
  }
  return E;
}

/// A foliation together with the traces of a filtration on its piles.
struct FoliatedFiltration {
  PrismaticFoliation foliation;
  /// Per pile, the stage domains of its filtration; piles without an entry are compact.
  std::map<std::size_t, std::vector<TriangulatedSurface>> stages;
};

inline bool is_simple(const FoliatedFiltration& FF) {
  int ends = 1;
  if (FF.foliation.declared_ends == Ends::Two) ends = 2;
  for (const auto& [p, domains] : FF.stages)
    for (const auto& D : domains)
      if (static_cast<int>(boundary_components(D).size()) != ends) return false;
  return true;
}

struct Decomposition {
  PrismaticFoliation planar;
  TransversalSpec transversal;
};

/// Trades every handle of every pile for a marked point carrying the pile's
/// measure. Boundary cycles and all block gluings are kept as they are, so
/// grafting the handles back at the transversal recovers the input.
inline Decomposition theorem_A_decompose(const PrismaticFoliation& F) {
  require_valid(F);
  Decomposition out;
  out.planar = F;
  for (std::size_t p = 0; p < F.piles.size(); ++p) {
    const auto& pile = F.piles[p];
    if (!is_orientable(pile.base)) throw PreconditionError("pile '" + pile.name + "' is not orientable");
    auto before = boundary_components(pile.base);
    auto flat = planarize(pile.base);
    auto after = boundary_components(flat.surface);
    bool same = before.size() == after.size();
    for (std::size_t c = 0; same && c < before.size(); ++c) same = before[c].anchor() == after[c].anchor();
    if (!same) throw Error("decompose: planarizing pile '" + pile.name + "' moved its boundary cycles");
    out.planar.piles[p].base = std::move(flat.surface);
    for (auto v : flat.points) out.transversal.points.push_back({p, v, pile.measure});
  }
  return out;
}

inline Decomposition theorem_A_decompose(const FoliatedFiltration& FF) {
  if (!is_simple(FF)) throw PreconditionError("filtration is not simple; reduce it with build_simple_filtration first");
  return theorem_A_decompose(FF.foliation);
}

}  // namespace mfol
