#pragma once

// Cut, glue, connected sum and handle grafting on prismatic foliations.
// Every operation is exact: measures are rationals and the foliated Euler
// characteristic changes by the predicted amount.

#include "mfol/foliation.hpp"
#include "mfol/gluing.hpp"

#include <functional>

namespace mfol {

namespace detail {

inline std::string fresh_block_id(const std::vector<Block>& blocks, const std::string& stem) {
  for (int k = 0;; ++k) {
    std::string id = stem + "_" + std::to_string(k);
    if (std::none_of(blocks.begin(), blocks.end(), [&](const Block& b) { return b.id == id; })) return id;
  }
}

inline std::string fresh_pile_name(const PrismaticFoliation& F, const std::string& stem) {
  for (int k = 1;; ++k) {
    std::string name = stem + "_" + std::to_string(k);
    if (std::none_of(F.piles.begin(), F.piles.end(), [&](const Pile& p) { return p.name == name; })) return name;
  }
}

/// Replaces block r by two blocks of measures rel and measure - rel.
inline std::pair<std::string, std::string> split_block_raw(PrismaticFoliation& F, const BlockRef& r, const Rational& rel) {
  auto& blocks = F.piles.at(r.pile).blocks.at(r.cycle);
  auto it = std::find_if(blocks.begin(), blocks.end(), [&](const Block& b) { return b.id == r.block; });
  if (it == blocks.end()) throw PreconditionError("split_block: missing block " + to_string(r, F));
  if (rel <= 0 || rel >= it->measure) throw PreconditionError("split_block: split point outside block " + to_string(r, F));
  Rational m = it->measure;
  std::string lo = fresh_block_id(blocks, r.block);
  blocks.insert(it, Block{lo, rel});
  std::string hi = fresh_block_id(blocks, r.block);
  it = std::find_if(blocks.begin(), blocks.end(), [&](const Block& b) { return b.id == r.block; });
  *it = Block{hi, m - rel};
  return {lo, hi};
}

inline void remap_refs(std::vector<BlockGluing>& gs, const std::function<BlockRef(const BlockRef&)>& f) {
  for (auto& g : gs) {
    g.a = f(g.a);
    g.b = f(g.b);
  }
}

inline std::vector<std::size_t> cycle_indices_by_anchor(const TriangulatedSurface& S,
                                                        const std::map<VertexId, std::size_t>& old_by_anchor,
                                                        std::vector<std::size_t>* fresh = nullptr) {
  std::vector<std::size_t> old_to_new(old_by_anchor.size(), SIZE_MAX);
  auto cycles = boundary_components(S);
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    auto it = old_by_anchor.find(cycles[c].anchor());
    if (it != old_by_anchor.end()) old_to_new[it->second] = c;
    else if (fresh) fresh->push_back(c);
  }
  return old_to_new;
}

inline std::map<VertexId, std::size_t> anchors_of(const TriangulatedSurface& S) {
  std::map<VertexId, std::size_t> out;
  auto cycles = boundary_components(S);
  for (std::size_t c = 0; c < cycles.size(); ++c) out[cycles[c].anchor()] = c;
  return out;
}

}  // namespace detail

/// Splits block r at relative height rel, together with the block glued to it.
inline void split_block(PrismaticFoliation& F, const BlockRef& r, const Rational& rel) {
  auto g = std::find_if(F.gluings.begin(), F.gluings.end(), [&](const BlockGluing& x) { return x.a == r || x.b == r; });
  auto [lo, hi] = detail::split_block_raw(F, r, rel);
  if (g == F.gluings.end()) return;
  BlockGluing old = *g;
  F.gluings.erase(g);
  BlockRef partner = old.a == r ? old.b : old.a;
  auto [plo, phi] = detail::split_block_raw(F, partner, rel);
  auto with = [](BlockRef x, std::string id) {
    x.block = std::move(id);
    return x;
  };
  F.gluings.push_back({with(r, lo), with(partner, plo), old.twist});
  F.gluings.push_back({with(r, hi), with(partner, phi), old.twist});
}

/// Makes height h a block boundary on every boundary cycle of pile p.
inline void cut_blocks_at(PrismaticFoliation& F, std::size_t p, const Rational& h) {
  for (std::size_t c = 0; c < F.piles.at(p).blocks.size(); ++c) {
    Rational offset = 0;
    for (const auto& b : F.piles[p].blocks[c]) {
      if (h > offset && h < offset + b.measure) {
        split_block(F, {p, c, b.id}, h - offset);
        break;
      }
      offset += b.measure;
    }
  }
}

/// Splits pile p into vertical slabs at the given heights (strictly inside
/// (0, m)). Returns the pile index of each slab from the bottom; the first
/// slab keeps index p.
inline std::vector<std::size_t> split_pile(PrismaticFoliation& F, std::size_t p, std::vector<Rational> cuts) {
  const Rational m = F.piles.at(p).measure;
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (const auto& h : cuts)
    if (h <= 0 || h >= m) throw PreconditionError("split_pile: cut height outside the vertical");
  if (cuts.empty()) return {p};
  for (const auto& h : cuts) cut_blocks_at(F, p, h);
  std::vector<Rational> bounds{0};
  bounds.insert(bounds.end(), cuts.begin(), cuts.end());
  bounds.push_back(m);
  const Pile original = F.piles[p];
  std::vector<std::size_t> slab_pile;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    Pile slab{k == 0 ? original.name : detail::fresh_pile_name(F, original.name), original.base,
              bounds[k + 1] - bounds[k], std::vector<std::vector<Block>>(original.blocks.size())};
    if (k == 0) {
      F.piles[p] = slab;
      slab_pile.push_back(p);
    } else {
      slab_pile.push_back(F.piles.size());
      F.piles.push_back(slab);
    }
  }
  std::map<std::pair<std::size_t, std::string>, std::size_t> block_slab;
  for (std::size_t c = 0; c < original.blocks.size(); ++c) {
    Rational offset = 0;
    std::size_t k = 0;
    for (const auto& b : original.blocks[c]) {
      while (offset >= bounds[k + 1]) ++k;
      F.piles[slab_pile[k]].blocks[c].push_back(b);
      block_slab[{c, b.id}] = slab_pile[k];
      offset += b.measure;
    }
  }
  detail::remap_refs(F.gluings, [&](const BlockRef& r) {
    if (r.pile != p) return r;
    return BlockRef{block_slab.at({r.cycle, r.block}), r.cycle, r.block};
  });
  return slab_pile;
}

struct PuncturedFoliation {
  PrismaticFoliation foliation;
  /// The new boundary prisms, laid end to end in transversal order; their
  /// measures add up to the transverse measure.
  std::vector<BlockRef> holes;
};

/// Removes a small disk around every point of the transversal. A point of
/// measure s at vertex v of a pile occupies the bottom slab [0, s) of the
/// vertical; the pile is split into slabs where needed.
inline PuncturedFoliation puncture_at_transversal(const PrismaticFoliation& F0, const TransversalSpec& T) {
  require_valid(F0);
  PuncturedFoliation out{F0, {}};
  auto& F = out.foliation;
  std::map<std::size_t, std::vector<std::pair<VertexId, Rational>>> by_pile;
  for (const auto& pt : T.points) {
    if (pt.pile >= F.piles.size()) throw PreconditionError("transversal refers to missing pile " + std::to_string(pt.pile));
    if (pt.measure <= 0) throw PreconditionError("transversal point has nonpositive measure");
    auto& list = by_pile[pt.pile];
    auto it = std::find_if(list.begin(), list.end(), [&](const auto& e) { return e.first == pt.vertex; });
    if (it == list.end()) list.push_back({pt.vertex, pt.measure});
    else it->second += pt.measure;
  }
  std::map<std::pair<std::size_t, VertexId>, std::vector<BlockRef>> hole_of;
  for (auto& [p, list] : by_pile) {
    const auto& pile = F.piles[p];
    auto bdry = boundary_vertices(pile.base);
    auto verts = vertices(pile.base);
    for (const auto& [v, s] : list) {
      if (!std::binary_search(verts.begin(), verts.end(), v))
        throw PreconditionError("transversal vertex " + std::to_string(v) + " is not in pile '" + pile.name + "'");
      if (bdry.count(v))
        throw PreconditionError("transversal vertex " + std::to_string(v) + " lies on the boundary of pile '" + pile.name + "'");
      if (s > pile.measure)
        throw PreconditionError("transversal measure " + to_string(s) + " at vertex " + std::to_string(v) +
                                " exceeds the measure of pile '" + pile.name + "'");
    }
    std::vector<Rational> cuts;
    for (const auto& [v, s] : list)
      if (s < pile.measure) cuts.push_back(s);
    auto slabs = split_pile(F, p, cuts);
    Rational bottom = 0;
    for (auto q : slabs) {
      Rational top = bottom + F.piles[q].measure;
      std::vector<VertexId> pts;
      for (const auto& [v, s] : list)
        if (s >= top) pts.push_back(v);
      bottom = top;
      if (pts.empty()) continue;
      auto& slab = F.piles[q];
      auto old = detail::anchors_of(slab.base);
      auto punct = puncture_surface(slab.base, pts);
      std::vector<std::size_t> fresh;
      auto old_to_new = detail::cycle_indices_by_anchor(punct.surface, old, &fresh);
      std::vector<std::vector<Block>> blocks(old.size() + fresh.size());
      for (std::size_t c = 0; c < old_to_new.size(); ++c) blocks[old_to_new[c]] = slab.blocks[c];
      for (auto c : fresh) blocks[c] = {Block{"a", slab.measure}};
      auto cycles = boundary_components(punct.surface);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        auto c = *std::find_if(fresh.begin(), fresh.end(), [&](std::size_t x) { return cycles[x].anchor() == punct.hole_anchor[i]; });
        hole_of[{p, pts[i]}].push_back({q, c, "a"});
      }
      slab.base = punct.surface;
      slab.blocks = std::move(blocks);
      detail::remap_refs(F.gluings, [&](const BlockRef& r) {
        if (r.pile != q) return r;
        return BlockRef{q, old_to_new.at(r.cycle), r.block};
      });
    }
  }
  std::set<std::pair<std::size_t, VertexId>> emitted;
  for (const auto& pt : T.points)
    if (emitted.insert({pt.pile, pt.vertex}).second)
      for (const auto& r : hole_of[{pt.pile, pt.vertex}]) out.holes.push_back(r);
  return out;
}

namespace detail {

inline bool is_full_block(const PrismaticFoliation& F, const BlockRef& r) {
  const auto& blocks = F.piles.at(r.pile).blocks.at(r.cycle);
  return blocks.size() == 1 && blocks[0].id == r.block;
}

inline std::size_t twist_position(int twist, const BoundaryCycle& c) {
  auto n = static_cast<long>(c.sides.size());
  return static_cast<std::size_t>(((twist % n) + n) % n);
}

/// Glues the bases of two full circle prisms into one pile.
inline void merge_full(PrismaticFoliation& F, BlockGluing g, std::vector<BlockGluing>& pending) {
  auto pa = g.a.pile, pb = g.b.pile;
  auto anchors_a = anchors_of(F.piles[pa].base);
  auto cyc_a = boundary_components(F.piles[pa].base);
  if (pa == pb) {
    auto& pile = F.piles[pa];
    auto T = glue_boundary_cycles(pile.base, cyc_a[g.a.cycle].anchor(), cyc_a[g.b.cycle].anchor(),
                                  twist_position(g.twist, cyc_a[g.b.cycle]));
    auto old_to_new = cycle_indices_by_anchor(T, anchors_a);
    std::vector<std::vector<Block>> blocks(boundary_components(T).size());
    for (std::size_t c = 0; c < old_to_new.size(); ++c)
      if (old_to_new[c] != SIZE_MAX) blocks[old_to_new[c]] = pile.blocks[c];
    pile.base = T;
    pile.blocks = std::move(blocks);
    auto f = [&](const BlockRef& r) { return r.pile == pa ? BlockRef{pa, old_to_new.at(r.cycle), r.block} : r; };
    remap_refs(F.gluings, f);
    remap_refs(pending, f);
    return;
  }
  auto cyc_b = boundary_components(F.piles[pb].base);
  TriangulatedSurface S = F.piles[pa].base;
  VertexId shift = append_disjoint(S, F.piles[pb].base);
  auto T = glue_boundary_cycles(S, cyc_a[g.a.cycle].anchor(), cyc_b[g.b.cycle].anchor() + shift,
                                twist_position(g.twist, cyc_b[g.b.cycle]));
  T.name = F.piles[pa].base.name;
  auto new_anchor = anchors_of(T);
  auto locate = [&](VertexId anchor) {
    auto it = new_anchor.find(anchor);
    return it == new_anchor.end() ? SIZE_MAX : it->second;
  };
  std::vector<std::size_t> from_a, from_b;
  for (auto& c : cyc_a) from_a.push_back(locate(c.anchor()));
  for (auto& c : cyc_b) from_b.push_back(locate(c.anchor() + shift));
  std::vector<std::vector<Block>> blocks(new_anchor.size());
  for (std::size_t c = 0; c < from_a.size(); ++c)
    if (from_a[c] != SIZE_MAX) blocks[from_a[c]] = F.piles[pa].blocks[c];
  for (std::size_t c = 0; c < from_b.size(); ++c)
    if (from_b[c] != SIZE_MAX) blocks[from_b[c]] = F.piles[pb].blocks[c];
  F.piles[pa].base = T;
  F.piles[pa].blocks = std::move(blocks);
  F.piles.erase(F.piles.begin() + static_cast<std::ptrdiff_t>(pb));
  const std::size_t merged = pa > pb ? pa - 1 : pa;
  auto f = [&](const BlockRef& r) {
    if (r.pile == pa) return BlockRef{merged, from_a.at(r.cycle), r.block};
    if (r.pile == pb) return BlockRef{merged, from_b.at(r.cycle), r.block};
    return BlockRef{r.pile > pb ? r.pile - 1 : r.pile, r.cycle, r.block};
  };
  remap_refs(F.gluings, f);
  remap_refs(pending, f);
}

}  // namespace detail

/// Glues boundary blocks pairwise. A pair of full circle prisms is glued
/// into a single pile; partial blocks become recorded gluings.
inline PrismaticFoliation glue_foliation_boundary(const PrismaticFoliation& F0, const GluingMatch& match) {
  require_valid(F0);
  PrismaticFoliation F = F0;
  std::set<BlockRef> taken;
  for (const auto& g : F.gluings) taken.insert(g.a), taken.insert(g.b);
  for (const auto& g : match) {
    auto a = find_block(F, g.a);
    auto b = find_block(F, g.b);
    if (!a) throw PreconditionError("gluing refers to missing block " + to_string(g.a, F));
    if (!b) throw PreconditionError("gluing refers to missing block " + to_string(g.b, F));
    if (a->first.measure != b->first.measure)
      throw PreconditionError("measure mismatch: " + to_string(g.a, F) + " = " + to_string(a->first.measure) + " vs " +
                              to_string(g.b, F) + " = " + to_string(b->first.measure));
    for (const auto& r : {g.a, g.b})
      if (!taken.insert(r).second) throw PreconditionError("double gluing of block " + to_string(r, F));
  }
  std::vector<BlockGluing> pending(match.begin(), match.end());
  while (!pending.empty()) {
    BlockGluing g = pending.front();
    pending.erase(pending.begin());
    if (detail::is_full_block(F, g.a) && detail::is_full_block(F, g.b))
      detail::merge_full(F, g, pending);
    else
      F.gluings.push_back(g);
  }
  require_valid(F);
  return F;
}

/// Circles to cut along: disjoint simple cycles in the interior of one pile base.
struct CirclePrism {
  std::size_t pile = 0;
  CurveSystem cycles;
};

struct PrismCut {
  PrismaticFoliation foliation;
  /// Regluing this match restores the original foliation up to isomorphism.
  GluingMatch psi;
};

/// Cuts every listed pile along its circles. Each circle leaves two new
/// full boundary prisms; a pile that falls apart is split into several piles.
inline PrismCut cut_along_circle_prism(const PrismaticFoliation& F0, const std::vector<CirclePrism>& Y) {
  require_valid(F0);
  PrismCut out{F0, {}};
  auto& F = out.foliation;
  for (const auto& y : Y) {
    if (y.pile >= F0.piles.size()) throw PreconditionError("circle prism refers to missing pile");
    if (y.cycles.empty()) continue;
    std::size_t p = y.pile;
    if (!is_orientable(F.piles[p].base)) throw PreconditionError("cut_along_circle_prism: pile base is not orientable");
    F.piles[p].base = coherently_oriented(F.piles[p].base);
    const auto& base = F.piles[p].base;
    std::vector<CurveComponent> comps;
    try {
      comps = validate_curve_system(base, y.cycles);
    } catch (const ValidationError& e) {
      throw PreconditionError(std::string("circle prism meets the boundary or is not embedded: ") + e.what());
    }
    for (const auto& c : comps)
      if (c.is_arc) throw PreconditionError("circle prism meets the boundary of pile '" + F.piles[p].name + "'");
    auto old = detail::anchors_of(base);
    auto R = cut_along_detailed(base, y.cycles);
    const Pile original = F.piles[p];
    auto parts = triangle_components(R.surface);
    std::vector<std::size_t> part_pile;
    std::map<VertexId, std::pair<std::size_t, std::size_t>> where;  // anchor -> (pile, cycle)
    for (std::size_t k = 0; k < parts.size(); ++k) {
      auto sub = subsurface(R.surface, parts[k], original.base.name);
      std::size_t q = k == 0 ? p : F.piles.size();
      Pile pile{k == 0 ? original.name : detail::fresh_pile_name(F, original.name), sub, original.measure, {}};
      auto cycles = boundary_components(sub);
      for (std::size_t c = 0; c < cycles.size(); ++c) {
        where[cycles[c].anchor()] = {q, c};
        auto it = old.find(cycles[c].anchor());
        pile.blocks.push_back(it != old.end() ? original.blocks[it->second] : std::vector<Block>{Block{"a", original.measure}});
      }
      if (k == 0) F.piles[p] = pile;
      else F.piles.push_back(pile);
    }
    std::vector<VertexId> old_anchor_of(old.size());
    for (auto& [a, c] : old) old_anchor_of[c] = a;
    detail::remap_refs(F.gluings, [&](const BlockRef& r) {
      if (r.pile != p) return r;
      auto [q, c] = where.at(old_anchor_of.at(r.cycle));
      return BlockRef{q, c, r.block};
    });
    // Pair the two copies of each circle and record the twist that restores it.
    std::vector<BoundaryCycle> fresh;
    for (auto& c : boundary_components(R.surface))
      if (!old.count(c.anchor())) fresh.push_back(c);
    for (const auto& comp : comps) {
      std::set<VertexId> orig(comp.vertices.begin(), comp.vertices.end());
      std::vector<const BoundaryCycle*> copies;
      for (auto& c : fresh)
        if (orig.count(R.origin.at(c.vertices.front()))) {
          std::set<VertexId> o;
          for (auto v : c.vertices) o.insert(R.origin.at(v));
          if (o == orig) copies.push_back(&c);
        }
      if (copies.size() != 2) throw Error("cut_along_circle_prism: could not pair the two copies of a circle");
      const auto& A = *copies[0];
      const auto& B = *copies[1];
      std::size_t L = B.vertices.size(), j = 0;
      while (j < L && R.origin.at(B.vertices[j]) != R.origin.at(A.vertices[0])) ++j;
      auto [qa, ca] = where.at(A.anchor());
      auto [qb, cb] = where.at(B.anchor());
      out.psi.push_back({{qa, ca, "a"}, {qb, cb, "a"}, static_cast<int>(j)});
    }
  }
  return out;
}

/// Connected sum along two transversals of equal measure: both are
/// punctured and the new boundary prisms are matched in order.
inline PrismaticFoliation connected_sum(const PrismaticFoliation& F0, const TransversalSpec& T0,
                                        const PrismaticFoliation& F1, const TransversalSpec& T1, int twist = 0) {
  if (transverse_measure(T0) != transverse_measure(T1))
    throw PreconditionError("connected_sum: transversal measures differ (" + to_string(transverse_measure(T0)) +
                            " vs " + to_string(transverse_measure(T1)) + ")");
  auto H0 = puncture_at_transversal(F0, T0);
  auto H1 = puncture_at_transversal(F1, T1);
  PrismaticFoliation F = H0.foliation;
  F.name = F0.name;
  F.declared_ends.reset();
  const std::size_t offset = F.piles.size();
  for (auto pile : H1.foliation.piles) {
    if (std::any_of(F.piles.begin(), F.piles.end(), [&](const Pile& x) { return x.name == pile.name; }))
      pile.name = detail::fresh_pile_name(F, pile.name);
    F.piles.push_back(std::move(pile));
  }
  auto shifted = [offset](BlockRef r) {
    r.pile += offset;
    return r;
  };
  for (auto g : H1.foliation.gluings) F.gluings.push_back({shifted(g.a), shifted(g.b), g.twist});
  std::vector<BlockRef> left = H0.holes, right;
  for (const auto& r : H1.holes) right.push_back(shifted(r));
  // Common refinement of the two layouts.
  GluingMatch match;
  std::size_t i = 0, j = 0;
  auto measure_of = [&](const BlockRef& r) { return find_block(F, r)->first.measure; };
  while (i < left.size() && j < right.size()) {
    Rational ml = measure_of(left[i]), mr = measure_of(right[j]);
    if (ml > mr) {
      auto [lo, hi] = detail::split_block_raw(F, left[i], mr);
      BlockRef rest = left[i];
      left[i].block = lo;
      rest.block = hi;
      left.insert(left.begin() + static_cast<std::ptrdiff_t>(i) + 1, rest);
    } else if (mr > ml) {
      auto [lo, hi] = detail::split_block_raw(F, right[j], ml);
      BlockRef rest = right[j];
      right[j].block = lo;
      rest.block = hi;
      right.insert(right.begin() + static_cast<std::ptrdiff_t>(j) + 1, rest);
    }
    match.push_back({left[i++], right[j++], twist});
  }
  return glue_foliation_boundary(F, match);
}

/// Grafts a handle at every point of T: connected sum with a torus pile
/// carrying a single point of measure mu(T).
inline PrismaticFoliation graft_handles(const PrismaticFoliation& F, const TransversalSpec& T, int twist = 0) {
  if (T.empty()) return F;
  Rational mu = transverse_measure(T);
  PrismaticFoliation torus{"handle", {make_pile("H", torus7(), mu)}, {}, Ends::Zero};
  auto out = connected_sum(F, T, torus, TransversalSpec{{{0, 0, mu}}}, twist);
  out.declared_ends = F.declared_ends;
  return out;
}

}  // namespace mfol
