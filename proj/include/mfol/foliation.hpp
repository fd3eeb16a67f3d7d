#pragma once

// Desk-scale measured foliations by surfaces: finitely many piles
// (base surface x measured vertical) whose boundary circle prisms are split
// into vertical blocks and glued pairwise by measure-preserving maps.
//
// The vertical of a pile of measure m is [0, m). The blocks of a boundary
// cycle partition it in listed order; a gluing carries block a onto block b
// by translation, so a plaque at height t leaves through block a and enters
// the partner pile at height offset(b) + (t - offset(a)).

#include "mfol/curves.hpp"
#include "mfol/rational.hpp"

#include <deque>

namespace mfol {

struct Block {
  std::string id;
  Rational measure;
  bool operator==(const Block&) const = default;
};

struct Pile {
  std::string name;
  TriangulatedSurface base;
  Rational measure;
  /// blocks[c] splits the vertical of boundary cycle c, in boundary_components order.
  std::vector<std::vector<Block>> blocks;
  bool operator==(const Pile&) const = default;
};

struct BlockRef {
  std::size_t pile = 0;
  std::size_t cycle = 0;
  std::string block;
  auto operator<=>(const BlockRef&) const = default;
};

struct BlockGluing {
  BlockRef a;
  BlockRef b;
  int twist = 0;
  bool operator==(const BlockGluing&) const = default;
};

/// A partial pairing of boundary blocks.
using GluingMatch = std::vector<BlockGluing>;

enum class Ends { Zero, One, Two, Infinite };

inline std::string to_string(Ends e) {
  switch (e) {
    case Ends::Zero: return "0";
    case Ends::One: return "1";
    case Ends::Two: return "2";
    case Ends::Infinite: return "inf";
  }
  return "?";
}

struct PrismaticFoliation {
  std::string name;
  std::vector<Pile> piles;
  std::vector<BlockGluing> gluings;
  std::optional<Ends> declared_ends;
  bool operator==(const PrismaticFoliation&) const = default;
};

/// Boundary circle prism of one pile: a boundary cycle times its vertical blocks.
struct BoundaryCirclePrism {
  std::size_t pile = 0;
  std::size_t cycle = 0;
  std::vector<Block> blocks;
};

/// A marked interior vertex carried on `measure` worth of the pile's vertical.
/// Entries at the same (pile, vertex) occupy consecutive vertical intervals from 0.
struct TransversalPoint {
  std::size_t pile = 0;
  VertexId vertex = 0;
  Rational measure;
  bool operator==(const TransversalPoint&) const = default;
};

struct TransversalSpec {
  std::vector<TransversalPoint> points;
  bool empty() const { return points.empty(); }
};

inline Rational transverse_measure(const TransversalSpec& T) {
  Rational sum = 0;
  for (const auto& p : T.points) sum += p.measure;
  return sum;
}

/// A pile with one full block "a" on every boundary cycle.
inline Pile make_pile(std::string name, TriangulatedSurface base, Rational measure) {
  Pile p{std::move(name), std::move(base), std::move(measure), {}};
  auto cycles = boundary_components(p.base);
  p.blocks.assign(cycles.size(), {Block{"a", p.measure}});
  return p;
}

inline std::vector<BoundaryCirclePrism> boundary_prisms(const PrismaticFoliation& F) {
  std::vector<BoundaryCirclePrism> out;
  for (std::size_t p = 0; p < F.piles.size(); ++p)
    for (std::size_t c = 0; c < F.piles[p].blocks.size(); ++c) out.push_back({p, c, F.piles[p].blocks[c]});
  return out;
}

inline std::string to_string(const BlockRef& r, const PrismaticFoliation& F) {
  std::string pile = r.pile < F.piles.size() ? F.piles[r.pile].name : "#" + std::to_string(r.pile);
  return pile + "." + std::to_string(r.cycle) + "." + r.block;
}

/// Block record and its offset in the vertical, or nullopt if absent.
inline std::optional<std::pair<Block, Rational>> find_block(const PrismaticFoliation& F, const BlockRef& r) {
  if (r.pile >= F.piles.size() || r.cycle >= F.piles[r.pile].blocks.size()) return std::nullopt;
  Rational offset = 0;
  for (const auto& b : F.piles[r.pile].blocks[r.cycle]) {
    if (b.id == r.block) return std::make_pair(b, offset);
    offset += b.measure;
  }
  return std::nullopt;
}

struct FoliationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every structural invariant and lists all violations.
inline FoliationReport validate_foliation(const PrismaticFoliation& F) {
  FoliationReport rep;
  auto add = [&](std::string s) { rep.violations.push_back(std::move(s)); };
  for (std::size_t p = 0; p < F.piles.size(); ++p) {
    const auto& pile = F.piles[p];
    const std::string where = "pile '" + pile.name + "'";
    if (pile.measure <= 0) add(where + ": measure must be positive");
    auto errs = validation_errors(pile.base);
    if (!errs.empty()) {
      add(where + ": " + errs.front());
      continue;
    }
    if (!is_connected(pile.base)) add(where + ": base is disconnected");
    auto cycles = boundary_components(pile.base);
    if (pile.blocks.size() != cycles.size()) {
      add(where + ": " + std::to_string(pile.blocks.size()) + " block lists for " + std::to_string(cycles.size()) +
          " boundary cycles");
      continue;
    }
    for (std::size_t c = 0; c < pile.blocks.size(); ++c) {
      Rational sum = 0;
      std::set<std::string> ids;
      for (const auto& b : pile.blocks[c]) {
        if (b.measure <= 0) add(where + " cycle " + std::to_string(c) + ": block '" + b.id + "' has nonpositive measure");
        if (!ids.insert(b.id).second) add(where + " cycle " + std::to_string(c) + ": duplicate block id '" + b.id + "'");
        sum += b.measure;
      }
      if (sum != pile.measure)
        add(where + " cycle " + std::to_string(c) + ": blocks sum to " + to_string(sum) + " instead of " +
            to_string(pile.measure));
    }
  }
  std::map<BlockRef, std::size_t> uses;
  for (const auto& g : F.gluings) {
    auto a = find_block(F, g.a);
    auto b = find_block(F, g.b);
    if (!a) add("gluing refers to missing block " + to_string(g.a, F));
    if (!b) add("gluing refers to missing block " + to_string(g.b, F));
    if (g.a == g.b) add("block " + to_string(g.a, F) + " glued to itself");
    for (const auto& r : {g.a, g.b})
      if (++uses[r] == 2) add("double gluing of block " + to_string(r, F));
    if (a && b && a->first.measure != b->first.measure)
      add("measure mismatch: " + to_string(g.a, F) + " = " + to_string(a->first.measure) + " vs " + to_string(g.b, F) +
          " = " + to_string(b->first.measure));
  }
  return rep;
}

inline void require_valid(const PrismaticFoliation& F) {
  auto rep = validate_foliation(F);
  if (!rep.ok()) throw ValidationError("invalid foliation '" + F.name + "': " + rep.violations.front());
}

/// Foliated Euler characteristic evaluated on the pile decomposition: sum of chi(base) * measure.
inline Rational foliated_euler(const PrismaticFoliation& F) {
  Rational eu = 0;
  for (const auto& p : F.piles) eu += Rational(euler_characteristic(p.base)) * p.measure;
  return eu;
}

inline std::map<BlockRef, BlockGluing> gluing_index(const PrismaticFoliation& F) {
  std::map<BlockRef, BlockGluing> idx;
  for (const auto& g : F.gluings) {
    idx[g.a] = g;
    idx[g.b] = BlockGluing{g.b, g.a, -g.twist};
  }
  return idx;
}

/// A plaque of a pile: the slice at height t of its vertical.
struct Plaque {
  std::size_t pile = 0;
  Rational height;
  bool operator==(const Plaque&) const = default;
  bool operator<(const Plaque& o) const { return pile != o.pile ? pile < o.pile : height < o.height; }
};

/// Walks leaves plaque by plaque through the block gluings.
class LeafExplorer {
 public:
  explicit LeafExplorer(const PrismaticFoliation& F) : F_(F), glue_(gluing_index(F)) {}

  struct Step {
    std::size_t cycle;        ///< exit cycle in the current plaque
    Plaque to;
    std::size_t entry_cycle;  ///< cycle through which `to` is entered
  };

  std::vector<Step> neighbors(const Plaque& x) const {
    std::vector<Step> out;
    const auto& pile = F_.piles[x.pile];
    for (std::size_t c = 0; c < pile.blocks.size(); ++c) {
      Rational offset = 0;
      for (const auto& b : pile.blocks[c]) {
        if (x.height >= offset && x.height < offset + b.measure) {
          auto it = glue_.find(BlockRef{x.pile, c, b.id});
          if (it != glue_.end()) {
            auto target = find_block(F_, it->second.b);
            if (target)
              out.push_back({c, Plaque{it->second.b.pile, target->second + (x.height - offset)}, it->second.b.cycle});
          }
          break;
        }
        offset += b.measure;
      }
    }
    return out;
  }

  /// Default start: height 3/7 of the first pile's vertical.
  Plaque default_start() const { return Plaque{0, F_.piles.at(0).measure * Rational(3, 7)}; }

 private:
  const PrismaticFoliation& F_;
  std::map<BlockRef, BlockGluing> glue_;
};

struct LeafBall {
  std::map<Plaque, int> distance;
  std::map<Plaque, std::set<Plaque>> adjacency;  ///< edges among explored plaques
  std::set<Plaque> frontier;                        ///< plaques at the depth limit with unexplored neighbors
  bool cyclic = false;                              ///< a second path closes a loop inside the ball
};

/// Breadth-first exploration of the leaf through `start` up to `depth` steps.
inline LeafBall explore_leaf(const PrismaticFoliation& F, const Plaque& start, int depth) {
  LeafExplorer ex(F);
  LeafBall ball;
  struct Arrival {
    std::optional<Plaque> parent;
    std::size_t entry_cycle = 0;
  };
  std::map<Plaque, Arrival> arrival;
  ball.distance[start] = 0;
  arrival[start] = {};
  std::deque<Plaque> queue{start};
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    int d = ball.distance[x];
    auto steps = ex.neighbors(x);
    if (d == depth) {
      for (const auto& s : steps)
        if (!ball.distance.count(s.to)) ball.frontier.insert(x);
      continue;
    }
    bool skipped_parent_edge = false;
    for (const auto& s : steps) {
      const auto& arr = arrival[x];
      if (arr.parent && !skipped_parent_edge && s.to == *arr.parent && s.cycle == arr.entry_cycle) {
        skipped_parent_edge = true;
        continue;
      }
      if (!ball.distance.count(s.to)) {
        ball.distance[s.to] = d + 1;
        arrival[s.to] = {x, s.entry_cycle};
        queue.push_back(s.to);
      } else {
        ball.cyclic = true;
      }
      ball.adjacency[x].insert(s.to);
      ball.adjacency[s.to].insert(x);
    }
  }
  return ball;
}

enum class EndEstimate { Zero, One, Two, Infinite, Undetermined };

inline std::string to_string(EndEstimate e) {
  switch (e) {
    case EndEstimate::Zero: return "0";
    case EndEstimate::One: return "1";
    case EndEstimate::Two: return "2";
    case EndEstimate::Infinite: return "inf";
    case EndEstimate::Undetermined: return "undetermined";
  }
  return "?";
}

/// Number of components of the ball outside radius r that reach the frontier.
inline std::size_t unbounded_components(const LeafBall& ball, int r) {
  std::set<Plaque> seen;
  std::size_t count = 0;
  for (const auto& [x, d] : ball.distance) {
    if (d <= r || seen.count(x)) continue;
    bool reaches = false;
    std::vector<Plaque> stack{x};
    seen.insert(x);
    while (!stack.empty()) {
      auto y = stack.back();
      stack.pop_back();
      reaches |= ball.frontier.count(y) != 0;
      auto it = ball.adjacency.find(y);
      if (it == ball.adjacency.end()) continue;
      for (const auto& z : it->second)
        if (ball.distance.at(z) > r && seen.insert(z).second) stack.push_back(z);
    }
    count += reaches;
  }
  return count;
}

/// Ends of the leaf through `start`, read off the plaque graph explored to
/// `depth`: compact leaves give 0; otherwise the count of unbounded
/// complementary components must agree for every radius in [depth/3, depth-2].
inline EndEstimate end_count_estimate(const PrismaticFoliation& F, int depth, std::optional<Plaque> start = {}) {
  require_valid(F);
  if (depth < 1) throw PreconditionError("end_count_estimate: depth must be positive");
  if (F.piles.empty()) return EndEstimate::Zero;
  auto ball = explore_leaf(F, start.value_or(LeafExplorer(F).default_start()), depth);
  if (ball.frontier.empty()) return EndEstimate::Zero;
  std::vector<std::size_t> counts;
  // Two layers of margin: the outermost sphere alone is often an independent set.
  int hi = std::max(1, depth - 2);
  for (int r = std::min(hi, std::max(1, (depth + 2) / 3)); r <= hi; ++r) counts.push_back(unbounded_components(ball, r));
  if (counts.empty()) return EndEstimate::Undetermined;
  bool constant = std::all_of(counts.begin(), counts.end(), [&](auto c) { return c == counts.front(); });
  if (constant && counts.front() == 1) return EndEstimate::One;
  if (constant && counts.front() == 2) return EndEstimate::Two;
  bool growing = std::is_sorted(counts.begin(), counts.end()) && counts.back() > counts.front() && counts.back() >= 3;
  if (growing) return EndEstimate::Infinite;
  return EndEstimate::Undetermined;
}

}  // namespace mfol
