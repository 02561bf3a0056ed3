#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "satmatch/errors.hpp"
#include "satmatch/graph.hpp"
#include "satmatch/preferences.hpp"

namespace satmatch {

/// A set of vertex-disjoint edges, stored as mutually consistent partner maps.
/// Equality and ordering compare the partner maps.
class Matching {
 public:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  Matching() = default;

  /// The empty matching on a graph of the given shape.
  Matching(std::uint32_t x_count, std::uint32_t y_count)
      : partner_{std::vector<std::uint32_t>(x_count, kNone),
                 std::vector<std::uint32_t>(y_count, kNone)} {}

  /// Throws InputError if a pair is not an edge of `g` or reuses a vertex.
  static Matching from_pairs(const BipartiteGraph& g, std::span<const Edge> pairs) {
    Matching m(g.x_count(), g.y_count());
    for (Edge e : pairs) {
      if (!g.has_edge(e.x, e.y)) {
        throw InputError("pair (x" + std::to_string(e.x + 1) + ", y" + std::to_string(e.y + 1) +
                         ") is not an edge");
      }
      if (m.partner_[0][e.x] != kNone || m.partner_[1][e.y] != kNone) {
        throw InputError("pair (x" + std::to_string(e.x + 1) + ", y" + std::to_string(e.y + 1) +
                         ") reuses a matched vertex");
      }
      m.partner_[0][e.x] = e.y;
      m.partner_[1][e.y] = e.x;
    }
    return m;
  }

  static Matching from_pairs(const BipartiteGraph& g, std::initializer_list<Edge> pairs) {
    return from_pairs(g, std::span<const Edge>(pairs.begin(), pairs.size()));
  }

  std::uint32_t x_count() const noexcept { return static_cast<std::uint32_t>(partner_[0].size()); }
  std::uint32_t y_count() const noexcept { return static_cast<std::uint32_t>(partner_[1].size()); }

  Candidate partner(VertexId v) const {
    const auto& side = partner_[static_cast<int>(v.side)];
    if (v.index >= side.size()) throw InputError("vertex " + to_string(v) + " is not in the matching");
    const std::uint32_t p = side[v.index];
    if (p == kNone) return kUnmatched;
    return VertexId{opposite(v.side), p};
  }

  /// Raw partner index or kNone.
  std::uint32_t partner_index(VertexId v) const { return partner_[static_cast<int>(v.side)][v.index]; }

  bool is_matched(VertexId v) const { return partner(v).has_value(); }

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(partner_[0].begin(), partner_[0].end(), [](auto p) { return p != kNone; }));
  }

  /// Matched pairs in ascending X order.
  std::vector<Edge> pairs() const {
    std::vector<Edge> out;
    for (std::uint32_t x = 0; x < x_count(); ++x) {
      if (partner_[0][x] != kNone) out.push_back({x, partner_[0][x]});
    }
    return out;
  }

  friend auto operator<=>(const Matching&, const Matching&) = default;
  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<std::uint32_t> partner_[2];
};

/// Vertices on `side` that have a partner in `m`.
inline std::vector<VertexId> matched_set(const Matching& m, Side side) {
  std::vector<VertexId> out;
  const std::uint32_t n = side == Side::X ? m.x_count() : m.y_count();
  for (std::uint32_t i = 0; i < n; ++i) {
    if (m.is_matched({side, i})) out.push_back({side, i});
  }
  return out;
}

inline bool is_saturating(const Matching& m, Side side) {
  return matched_set(m, side).size() == (side == Side::X ? m.x_count() : m.y_count());
}

// ---------------------------------------------------------------------------
// Deferred acceptance

/// Picks the lowest-index free proposer.
struct LowestIndexFirst {
  std::size_t operator()(std::span<const std::uint32_t> free) const {
    return static_cast<std::size_t>(std::min_element(free.begin(), free.end()) - free.begin());
  }
};

/// Gale-Shapley deferred acceptance with a pluggable choice of which free
/// proposer moves next. `pick` receives the current free proposers and
/// returns a position in that span.
template <class PickProposer>
Matching deferred_acceptance_with(const BipartiteGraph& g, const PreferenceInstance& p,
                                  Side proposing, PickProposer&& pick) {
  const Side receiving = opposite(proposing);
  const std::uint32_t n_prop = g.side_size(proposing);
  const std::uint32_t n_recv = g.side_size(receiving);
  std::vector<std::uint32_t> next(n_prop, 0);
  std::vector<std::uint32_t> held(n_recv, Matching::kNone);
  std::vector<std::uint32_t> free;
  for (std::uint32_t i = 0; i < n_prop; ++i) {
    if (!g.adjacent({proposing, i}).empty()) free.push_back(i);
  }
  std::size_t proposals = 0;
  while (!free.empty()) {
    const std::size_t pos = pick(std::span<const std::uint32_t>(free));
    const std::uint32_t proposer = free[pos];
    const VertexId pv{proposing, proposer};
    const auto list = p.list(pv);
    const std::uint32_t target = list[next[proposer]++];
    ++proposals;
    const VertexId rv{receiving, target};
    std::uint32_t rejected = Matching::kNone;
    const std::uint32_t current = held[target];
    if (current == Matching::kNone) {
      held[target] = proposer;
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(pos));
    } else if (p.rank(rv, proposer) < p.rank(rv, current)) {
      held[target] = proposer;
      free[pos] = current;
      rejected = current;
    } else {
      rejected = proposer;
    }
    if (rejected != Matching::kNone && next[rejected] >= p.list({proposing, rejected}).size()) {
      free.erase(std::find(free.begin(), free.end(), rejected));
    }
  }
  if (proposals > g.edge_count()) {
    throw InternalError("deferred acceptance made " + std::to_string(proposals) +
                        " proposals on " + std::to_string(g.edge_count()) + " edges");
  }
  std::vector<Edge> pairs;
  for (std::uint32_t r = 0; r < n_recv; ++r) {
    if (held[r] == Matching::kNone) continue;
    pairs.push_back(proposing == Side::X ? Edge{held[r], r} : Edge{r, held[r]});
  }
  return Matching::from_pairs(g, pairs);
}

/// The `proposing`-optimal stable matching.
inline Matching deferred_acceptance(const BipartiteGraph& g, const PreferenceInstance& p,
                                    Side proposing) {
  return deferred_acceptance_with(g, p, proposing, LowestIndexFirst{});
}

// ---------------------------------------------------------------------------
// Stability

struct BlockingPair {
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  friend constexpr auto operator<=>(const BlockingPair&, const BlockingPair&) = default;
};

/// All blocking pairs, ordered by (x, y).
inline std::vector<BlockingPair> find_blocking_pairs(const BipartiteGraph& g,
                                                     const PreferenceInstance& p,
                                                     const Matching& m) {
  std::vector<BlockingPair> out;
  for (std::uint32_t x = 0; x < g.x_count(); ++x) {
    const VertexId xv = x_vertex(x);
    const Candidate px = m.partner(xv);
    for (std::uint32_t y : g.adjacent(xv)) {
      if (px && px->index == y) continue;
      const VertexId yv = y_vertex(y);
      if (prefers(p, xv, yv, px) && prefers(p, yv, xv, m.partner(yv))) out.push_back({x, y});
    }
  }
  return out;
}

inline bool is_stable(const BipartiteGraph& g, const PreferenceInstance& p, const Matching& m) {
  return find_blocking_pairs(g, p, m).empty();
}

// ---------------------------------------------------------------------------
// Enumeration of all stable matchings

inline constexpr std::uint64_t kDefaultNodeCap = 10'000'000;

/// Every stable matching of one instance, plus the matched vertex sets that
/// all of them share.
struct StableSet {
  std::vector<Matching> matchings;
  std::vector<VertexId> matched_x;
  std::vector<VertexId> matched_y;
  std::uint64_t nodes_visited = 0;
};

/// Upper bound on the unpruned search tree's leaves: product of (deg(x)+1).
inline std::uint64_t stable_search_bound(const BipartiteGraph& g) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  for (std::uint32_t x = 0; x < g.x_count(); ++x) {
    const std::uint64_t k = g.adjacent(x_vertex(x)).size() + 1;
    if (total > kMax / k) return kMax;
    total *= k;
  }
  return total;
}

namespace detail {

class StableSearch {
 public:
  StableSearch(const BipartiteGraph& g, const PreferenceInstance& p, std::uint64_t cap)
      : g_(g),
        p_(p),
        cap_(cap),
        px_(g.x_count(), Matching::kNone),
        owner_(g.y_count(), Matching::kNone) {}

  std::vector<Matching> run() {
    visit(0);
    return std::move(found_);
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  // y prefers x over whoever it currently holds (kNone counts as worst).
  bool y_prefers(std::uint32_t y, std::uint32_t x, std::uint32_t held) const {
    return held == Matching::kNone || p_.rank(y_vertex(y), x) < p_.rank(y_vertex(y), held);
  }

  bool x_prefers(std::uint32_t x, std::uint32_t y, std::uint32_t held) const {
    return held == Matching::kNone || p_.rank(x_vertex(x), y) < p_.rank(x_vertex(x), held);
  }

  // Checks every pair that becomes fully decided once x (at depth x) takes
  // `choice` (kNone = stays unmatched).
  bool consistent(std::uint32_t x, std::uint32_t choice) const {
    // x against already-taken vertices it likes better than its choice.
    for (std::uint32_t y : p_.list(x_vertex(x))) {
      if (y == choice) break;
      const std::uint32_t holder = owner_[y];
      if (holder != Matching::kNone && y_prefers(y, x, holder)) return false;
    }
    if (choice == Matching::kNone) return true;
    // Earlier X vertices that wanted `choice` more than their own partner.
    for (std::uint32_t other : g_.adjacent(y_vertex(choice))) {
      if (other >= x) break;
      if (x_prefers(other, choice, px_[other]) && y_prefers(choice, other, x)) return false;
    }
    return true;
  }

  void visit(std::uint32_t depth) {
    if (++nodes_ > cap_) {
      const std::uint64_t bound = stable_search_bound(g_);
      throw CapExceeded("stable-matching search exceeded " + std::to_string(cap_) +
                            " nodes (search-space bound " + std::to_string(bound) + ")",
                        bound, cap_);
    }
    if (depth == g_.x_count()) {
      // Y vertices left untaken are unmatched for good.
      for (std::uint32_t x = 0; x < depth; ++x) {
        for (std::uint32_t y : p_.list(x_vertex(x))) {
          if (y == px_[x]) break;
          if (owner_[y] == Matching::kNone) return;
        }
      }
      std::vector<Edge> pairs;
      for (std::uint32_t x = 0; x < depth; ++x) {
        if (px_[x] != Matching::kNone) pairs.push_back({x, px_[x]});
      }
      found_.push_back(Matching::from_pairs(g_, pairs));
      return;
    }
    const std::uint32_t x = depth;
    for (std::uint32_t y : p_.list(x_vertex(x))) {
      if (owner_[y] != Matching::kNone || !consistent(x, y)) continue;
      px_[x] = y;
      owner_[y] = x;
      visit(depth + 1);
      owner_[y] = Matching::kNone;
    }
    px_[x] = Matching::kNone;
    if (consistent(x, Matching::kNone)) visit(depth + 1);
  }

  const BipartiteGraph& g_;
  const PreferenceInstance& p_;
  std::uint64_t cap_;
  std::uint64_t nodes_ = 0;
  std::vector<std::uint32_t> px_;
  std::vector<std::uint32_t> owner_;
  std::vector<Matching> found_;
};

}  // namespace detail

/// All stable matchings by backtracking over X vertices, pruning partial
/// assignments that already contain a blocking pair. `cap` bounds the number
/// of search nodes. Members are sorted by partner map. Throws InternalError
/// if members disagree on which vertices are matched.
inline StableSet enumerate_stable(const BipartiteGraph& g, const PreferenceInstance& p,
                                  std::uint64_t cap = kDefaultNodeCap) {
  detail::StableSearch search(g, p, cap);
  StableSet out;
  out.matchings = search.run();
  out.nodes_visited = search.nodes();
  std::sort(out.matchings.begin(), out.matchings.end());
  if (out.matchings.empty()) {
    throw InternalError("no stable matching found; every instance has one");
  }
  out.matched_x = matched_set(out.matchings.front(), Side::X);
  out.matched_y = matched_set(out.matchings.front(), Side::Y);
  for (const Matching& m : out.matchings) {
    if (matched_set(m, Side::X) != out.matched_x || matched_set(m, Side::Y) != out.matched_y) {
      throw InternalError("stable matchings disagree on the matched vertex set");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Maximum-cardinality matching (stability ignored)

/// Augmenting paths from each X vertex in turn (Kuhn's method).
inline Matching maximum_matching(const BipartiteGraph& g) {
  std::vector<std::uint32_t> px(g.x_count(), Matching::kNone);
  std::vector<std::uint32_t> py(g.y_count(), Matching::kNone);
  std::vector<std::uint32_t> stamp(g.y_count(), 0);
  std::uint32_t round = 0;
  auto augment = [&](auto&& self, std::uint32_t x) -> bool {
    for (std::uint32_t y : g.adjacent(x_vertex(x))) {
      if (stamp[y] == round) continue;
      stamp[y] = round;
      if (py[y] == Matching::kNone || self(self, py[y])) {
        px[x] = y;
        py[y] = x;
        return true;
      }
    }
    return false;
  };
  for (std::uint32_t x = 0; x < g.x_count(); ++x) {
    ++round;
    augment(augment, x);
  }
  std::vector<Edge> pairs;
  for (std::uint32_t x = 0; x < g.x_count(); ++x) {
    if (px[x] != Matching::kNone) pairs.push_back({x, px[x]});
  }
  return Matching::from_pairs(g, pairs);
}

}  // namespace satmatch
