#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "satmatch/errors.hpp"
#include "satmatch/graph.hpp"
#include "satmatch/matching.hpp"
#include "satmatch/preferences.hpp"

namespace satmatch {

// A vertex v that satisfies either of
//   (1) |N(N(v))| <= |N(v)|
//   (2) some neighbour of v has degree 1
// is matched in every stable matching under every preference instance.
// Failing both is necessary for some instance to leave v unmatched. It is
// sufficient with up to three vertices per side; in general v's neighbours
// must also be assignable to distinct vertices other than v.
// Everything here works for either side; Y-side questions are the mirror image.

struct Condition1 {
  bool holds = false;
  std::size_t n_size = 0;   ///< |N(v)|
  std::size_t nn_size = 0;  ///< |N(N(v))|, v itself included

  friend bool operator==(const Condition1&, const Condition1&) = default;
};

inline Condition1 check_condition1(const BipartiteGraph& g, VertexId v) {
  const auto n = neighborhood(g, v);
  const auto nn = neighborhood_of_set(g, n);
  return {nn.size() <= n.size(), n.size(), nn.size()};
}

/// Lowest-index neighbour of v whose only neighbour is v.
inline std::optional<VertexId> check_condition2(const BipartiteGraph& g, VertexId v) {
  const Side other = opposite(v.side);
  for (std::uint32_t w : g.adjacent(v)) {
    if (g.adjacent({other, w}).size() == 1) return VertexId{other, w};
  }
  return std::nullopt;
}

struct VertexConditionReport {
  VertexId vertex;
  std::size_t n_size = 0;
  std::size_t nn_size = 0;
  bool cond1 = false;
  std::optional<VertexId> cond2_witness;
  bool isolated = false;
  /// cond1 or a witness, and not isolated. An isolated vertex passes (1)
  /// vacuously but can never be matched, so it never counts as satisfied.
  bool satisfied = false;
};

inline VertexConditionReport vertex_report(const BipartiteGraph& g, VertexId v) {
  const Condition1 c1 = check_condition1(g, v);
  VertexConditionReport r;
  r.vertex = v;
  r.n_size = c1.n_size;
  r.nn_size = c1.nn_size;
  r.cond1 = c1.holds;
  r.cond2_witness = check_condition2(g, v);
  r.isolated = c1.n_size == 0;
  r.satisfied = !r.isolated && (r.cond1 || r.cond2_witness.has_value());
  return r;
}

/// Raised by adversarial_instance when the target vertex cannot be starved.
class AdversaryPrecondition : public InputError {
 public:
  enum class Reason {
    Isolated,
    Condition1,
    Condition2,
    /// Fails both conditions, yet some set of its neighbours has fewer
    /// competitors than members, so it is matched in every stable matching.
    NeighborsNotCoverable,
  };

  AdversaryPrecondition(Reason reason, const VertexConditionReport& report, const std::string& msg,
                        std::vector<VertexId> crowded = {})
      : InputError(msg), reason_(reason), report_(report), crowded_(std::move(crowded)) {}

  Reason reason() const noexcept { return reason_; }
  const VertexConditionReport& report() const noexcept { return report_; }
  /// For NeighborsNotCoverable: neighbours T of the target with |N(T) - {target}| < |T|.
  const std::vector<VertexId>& crowded() const noexcept { return crowded_; }

 private:
  Reason reason_;
  VertexConditionReport report_;
  std::vector<VertexId> crowded_;
};

namespace detail {

struct CompetitorCover {
  std::vector<std::uint32_t> partner;  ///< indexed like g.adjacent(target); kNone if uncovered
  std::vector<VertexId> crowded;       ///< empty when every neighbour is covered
};

// Maximum matching of N(target) into N(N(target)) - {target}. When it misses
// a neighbour, `crowded` is the set of neighbours reachable from it by
// alternating paths, which has one more member than it has competitors.
inline CompetitorCover cover_neighbors(const BipartiteGraph& g, VertexId target) {
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  const Side side = target.side;
  const Side other = opposite(side);
  const auto targets = g.adjacent(target);
  CompetitorCover out;
  out.partner.assign(targets.size(), kNone);
  std::vector<std::uint32_t> holder(g.side_size(side), kNone);  // competitor -> position in targets
  std::vector<std::uint32_t> stamp(g.side_size(side), 0);
  std::uint32_t round = 0;
  auto augment = [&](auto&& self, std::uint32_t pos) -> bool {
    for (std::uint32_t c : g.adjacent({other, targets[pos]})) {
      if (c == target.index || stamp[c] == round) continue;
      stamp[c] = round;
      if (holder[c] == kNone || self(self, holder[c])) {
        holder[c] = pos;
        out.partner[pos] = c;
        return true;
      }
    }
    return false;
  };
  for (std::uint32_t pos = 0; pos < targets.size(); ++pos) {
    ++round;
    if (augment(augment, pos)) continue;
    // Alternating reachability from the uncovered neighbour.
    std::vector<char> seen(targets.size(), 0);
    std::vector<std::uint32_t> queue{pos};
    seen[pos] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (std::uint32_t c : g.adjacent({other, targets[queue[head]]})) {
        if (c == target.index) continue;
        const std::uint32_t next = holder[c];
        if (next != kNone && !seen[next]) {
          seen[next] = 1;
          queue.push_back(next);
        }
      }
    }
    for (std::uint32_t p = 0; p < targets.size(); ++p) {
      if (seen[p]) out.crowded.push_back({other, targets[p]});
    }
    return out;
  }
  return out;
}

}  // namespace detail

/// A preference instance under which `target` is unmatched in every stable
/// matching. Requires t to fail both conditions and its neighbours to be
/// assignable to distinct competitors (vertices other than t adjacent to them).
///
/// With S = N(t), C = N(N(t)) - {t}, and an assignment of S into C:
///  - each s in S ranks t last and its assigned competitor first;
///  - each c in C ranks its neighbours inside S above those outside S, its
///    assigned neighbour (if any) first;
///  - everything else, including every other list, goes by ascending index.
/// Assigned pairs are mutual first choices, so every stable matching contains
/// them, and then every option of t is taken by someone it prefers.
inline PreferenceInstance adversarial_instance(const BipartiteGraph& g, VertexId target) {
  g.require(target);
  const VertexConditionReport report = vertex_report(g, target);
  if (report.isolated) {
    throw AdversaryPrecondition(AdversaryPrecondition::Reason::Isolated, report,
                                to_string(target) + " is isolated; it is unmatched under every instance");
  }
  if (report.cond1) {
    throw AdversaryPrecondition(
        AdversaryPrecondition::Reason::Condition1, report,
        to_string(target) + " satisfies condition (1): |N(N(" + to_string(target) +
            "))| = " + std::to_string(report.nn_size) + " <= |N(" + to_string(target) +
            ")| = " + std::to_string(report.n_size));
  }
  if (report.cond2_witness) {
    throw AdversaryPrecondition(AdversaryPrecondition::Reason::Condition2, report,
                                to_string(target) + " satisfies condition (2): witness " +
                                    to_string(*report.cond2_witness) + " has degree 1");
  }
  const detail::CompetitorCover cover = detail::cover_neighbors(g, target);
  if (!cover.crowded.empty()) {
    std::string names;
    for (VertexId v : cover.crowded) names += (names.empty() ? "" : ", ") + to_string(v);
    throw AdversaryPrecondition(
        AdversaryPrecondition::Reason::NeighborsNotCoverable, report,
        to_string(target) + " fails both conditions but is matched in every stable matching: "
            "neighbours {" + names + "} have only " + std::to_string(cover.crowded.size() - 1) +
            " other partners between them",
        cover.crowded);
  }

  const Side side = target.side;
  const Side other = opposite(side);
  std::array<std::vector<std::vector<std::uint32_t>>, 2> lists;
  for (Side s : {Side::X, Side::Y}) {
    for (std::uint32_t i = 0; i < g.side_size(s); ++i) {
      const auto adj = g.adjacent({s, i});
      lists[static_cast<int>(s)].emplace_back(adj.begin(), adj.end());
    }
  }
  auto move_to_front = [](std::vector<std::uint32_t>& list, std::uint32_t v) {
    std::rotate(list.begin(), std::find(list.begin(), list.end(), v), std::find(list.begin(), list.end(), v) + 1);
  };

  const auto targets = g.adjacent(target);
  std::vector<char> in_targets(g.side_size(other), 0);
  for (std::uint32_t w : targets) in_targets[w] = 1;

  // Options: assigned competitor first, target last.
  for (std::uint32_t pos = 0; pos < targets.size(); ++pos) {
    auto& list = lists[static_cast<int>(other)][targets[pos]];
    std::stable_partition(list.begin(), list.end(), [&](std::uint32_t u) { return u != target.index; });
    move_to_front(list, cover.partner[pos]);
  }

  // Competitors: the target's options first, assigned one at the very top.
  std::vector<std::uint32_t> assigned(g.side_size(side), Matching::kNone);
  for (std::uint32_t pos = 0; pos < targets.size(); ++pos) assigned[cover.partner[pos]] = targets[pos];
  for (VertexId c : neighborhood_of_set(g, neighborhood(g, target))) {
    if (c == target) continue;
    auto& list = lists[static_cast<int>(side)][c.index];
    std::stable_partition(list.begin(), list.end(), [&](std::uint32_t w) { return in_targets[w] != 0; });
    if (assigned[c.index] != Matching::kNone) move_to_front(list, assigned[c.index]);
  }
  return PreferenceBuilder::trusted(std::move(lists));
}

/// Does every stable matching saturate `side` under every preference
/// instance? With a counterexample when it does not.
struct SaturationVerdict {
  struct Counterexample {
    VertexId vertex;
    PreferenceInstance instance;
  };

  Side side = Side::X;
  bool holds = false;
  std::vector<VertexConditionReport> reports;
  std::optional<Counterexample> counterexample;
  /// Failing, non-isolated vertices that are nevertheless matched in every
  /// stable matching (see AdversaryPrecondition::Reason::NeighborsNotCoverable).
  /// For these the condition test is stricter than the truth. Never happens
  /// with three or fewer vertices per side.
  std::vector<VertexId> overcautious;

  std::vector<VertexId> failing() const {
    std::vector<VertexId> out;
    for (const auto& r : reports) {
      if (!r.satisfied) out.push_back(r.vertex);
    }
    return out;
  }
};

inline SaturationVerdict theorem1_verdict(const BipartiteGraph& g, Side side) {
  SaturationVerdict v;
  v.side = side;
  v.holds = true;
  for (std::uint32_t i = 0; i < g.side_size(side); ++i) {
    v.reports.push_back(vertex_report(g, {side, i}));
    const auto& r = v.reports.back();
    if (r.satisfied) continue;
    v.holds = false;
    if (r.isolated) continue;
    if (!detail::cover_neighbors(g, r.vertex).crowded.empty()) {
      v.overcautious.push_back(r.vertex);
    } else if (!v.counterexample) {
      v.counterexample = SaturationVerdict::Counterexample{r.vertex, adversarial_instance(g, r.vertex)};
    }
  }
  return v;
}

/// Every stable matching is perfect under every instance.
inline bool perfect_verdict(const BipartiteGraph& g) {
  return theorem1_verdict(g, Side::X).holds && theorem1_verdict(g, Side::Y).holds;
}

struct PerfectionVerdict {
  bool holds = false;
  std::optional<Edge> missing_edge;  ///< lowest (x, y) non-edge when !holds
};

namespace detail {

inline std::optional<Edge> first_missing_edge(const BipartiteGraph& g) {
  for (std::uint32_t x = 0; x < g.x_count(); ++x) {
    for (std::uint32_t y = 0; y < g.y_count(); ++y) {
      if (!g.has_edge(x, y)) return Edge{x, y};
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// For connected balanced graphs: all stable matchings are perfect under all
/// instances iff the graph is complete bipartite.
inline PerfectionVerdict theorem2_verdict(const BipartiteGraph& g) {
  if (g.x_count() != g.y_count() || g.x_count() == 0) {
    throw InputError("perfection test needs |X| = |Y| >= 1 (got " + std::to_string(g.x_count()) +
                     " and " + std::to_string(g.y_count()) + "); use corollary_verdict");
  }
  if (!is_connected(g)) {
    throw InputError("perfection test needs a connected graph; use corollary_verdict");
  }
  PerfectionVerdict v;
  v.holds = is_complete_bipartite_balanced(g);
  if (!v.holds) v.missing_edge = detail::first_missing_edge(g);
  return v;
}

struct ComponentVerdict {
  std::vector<std::uint32_t> x_ids;
  std::vector<std::uint32_t> y_ids;
  bool biclique = false;
  bool balanced = false;
  std::optional<Edge> missing_edge;  ///< in original ids
};

struct CorollaryVerdict {
  bool holds = false;
  std::vector<ComponentVerdict> components;
};

/// Per-component version for balanced graphs that may be disconnected. Each
/// component must be a biclique and have equal side sizes; a biclique
/// component such as K_{1,2} next to a K_{2,1} is balanced only globally and
/// always leaves a vertex unmatched.
inline CorollaryVerdict corollary_verdict(const BipartiteGraph& g) {
  if (g.x_count() != g.y_count()) {
    throw InputError("perfection test needs |X| = |Y| (got " + std::to_string(g.x_count()) + " and " +
                     std::to_string(g.y_count()) + ")");
  }
  CorollaryVerdict v;
  v.holds = true;
  for (const Component& c : components(g)) {
    ComponentVerdict cv;
    cv.x_ids = c.x_ids;
    cv.y_ids = c.y_ids;
    cv.biclique = is_biclique(c.graph);
    cv.balanced = c.x_ids.size() == c.y_ids.size();
    if (const auto e = detail::first_missing_edge(c.graph)) {
      cv.missing_edge = Edge{c.x_ids[e->x], c.y_ids[e->y]};
    }
    v.holds = v.holds && cv.biclique && cv.balanced;
    v.components.push_back(std::move(cv));
  }
  return v;
}

}  // namespace satmatch
