#pragma once

// Brute-force reference implementations for tests. Deliberately naive: every
// matching is generated and checked against the definition of stability.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "satmatch/graph.hpp"
#include "satmatch/matching.hpp"
#include "satmatch/preferences.hpp"

namespace oracle {

using satmatch::BipartiteGraph;
using satmatch::Edge;
using satmatch::Matching;
using satmatch::PreferenceInstance;
using satmatch::Side;
using satmatch::VertexId;

/// partner[x] = y index or -1.
using PartnerMap = std::vector<int>;

inline std::vector<PartnerMap> all_matchings(const BipartiteGraph& g) {
  std::vector<PartnerMap> out;
  PartnerMap cur(g.x_count(), -1);
  std::vector<bool> used(g.y_count(), false);
  std::function<void(std::uint32_t)> go = [&](std::uint32_t x) {
    if (x == g.x_count()) {
      out.push_back(cur);
      return;
    }
    go(x + 1);
    for (std::uint32_t y = 0; y < g.y_count(); ++y) {
      if (!used[y] && g.has_edge(x, y)) {
        used[y] = true;
        cur[x] = static_cast<int>(y);
        go(x + 1);
        cur[x] = -1;
        used[y] = false;
      }
    }
  };
  go(0);
  return out;
}

/// Position of `who` in v's list, or a large number for "unmatched" (-1).
inline std::size_t position(const PreferenceInstance& p, VertexId v, int who) {
  if (who < 0) return 1'000'000;
  const auto list = p.list(v);
  const auto it = std::find(list.begin(), list.end(), static_cast<std::uint32_t>(who));
  return static_cast<std::size_t>(it - list.begin());
}

inline bool stable_by_definition(const BipartiteGraph& g, const PreferenceInstance& p, const PartnerMap& m) {
  std::vector<int> y_partner(g.y_count(), -1);
  for (std::uint32_t x = 0; x < m.size(); ++x) {
    if (m[x] >= 0) y_partner[m[x]] = static_cast<int>(x);
  }
  for (std::uint32_t x = 0; x < g.x_count(); ++x) {
    for (std::uint32_t y = 0; y < g.y_count(); ++y) {
      if (!g.has_edge(x, y) || m[x] == static_cast<int>(y)) continue;
      const bool x_wants = position(p, {Side::X, x}, static_cast<int>(y)) < position(p, {Side::X, x}, m[x]);
      const bool y_wants =
          position(p, {Side::Y, y}, static_cast<int>(x)) < position(p, {Side::Y, y}, y_partner[y]);
      if (x_wants && y_wants) return false;
    }
  }
  return true;
}

inline std::vector<PartnerMap> stable_matchings(const BipartiteGraph& g, const PreferenceInstance& p) {
  std::vector<PartnerMap> out;
  for (const auto& m : all_matchings(g)) {
    if (stable_by_definition(g, p, m)) out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline PartnerMap to_partner_map(const Matching& m) {
  PartnerMap out(m.x_count(), -1);
  for (const Edge& e : m.pairs()) out[e.x] = static_cast<int>(e.y);
  return out;
}

inline std::vector<PartnerMap> to_partner_maps(const std::vector<Matching>& ms) {
  std::vector<PartnerMap> out;
  for (const auto& m : ms) out.push_back(to_partner_map(m));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t max_matching_size(const BipartiteGraph& g) {
  std::size_t best = 0;
  for (const auto& m : all_matchings(g)) {
    best = std::max<std::size_t>(best, static_cast<std::size_t>(std::count_if(m.begin(), m.end(), [](int y) {
                                   return y >= 0;
                                 })));
  }
  return best;
}

/// Every preference instance, built by permuting each sorted neighbourhood
/// independently (no use of the library's enumerator).
inline void for_each_instance(const BipartiteGraph& g, const std::function<void(const PreferenceInstance&)>& fn) {
  std::vector<std::vector<std::uint32_t>> lists;
  for (std::uint32_t x = 0; x < g.x_count(); ++x) {
    std::vector<std::uint32_t> l;
    for (std::uint32_t y = 0; y < g.y_count(); ++y) {
      if (g.has_edge(x, y)) l.push_back(y);
    }
    lists.push_back(l);
  }
  for (std::uint32_t y = 0; y < g.y_count(); ++y) {
    std::vector<std::uint32_t> l;
    for (std::uint32_t x = 0; x < g.x_count(); ++x) {
      if (g.has_edge(x, y)) l.push_back(x);
    }
    lists.push_back(l);
  }
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == lists.size()) {
      std::vector<std::vector<std::uint32_t>> xl(lists.begin(), lists.begin() + g.x_count());
      std::vector<std::vector<std::uint32_t>> yl(lists.begin() + g.x_count(), lists.end());
      fn(satmatch::validate(g, xl, yl));
      return;
    }
    std::vector<std::uint32_t> original = lists[i];
    std::sort(lists[i].begin(), lists[i].end());
    do {
      go(i + 1);
    } while (std::next_permutation(lists[i].begin(), lists[i].end()));
    lists[i] = original;
  };
  go(0);
}

inline std::uint64_t factorial(std::uint64_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

inline std::uint64_t count_instances(const BipartiteGraph& g) {
  std::uint64_t total = 1;
  for (std::uint32_t x = 0; x < g.x_count(); ++x) total *= factorial(g.adjacent(satmatch::x_vertex(x)).size());
  for (std::uint32_t y = 0; y < g.y_count(); ++y) total *= factorial(g.adjacent(satmatch::y_vertex(y)).size());
  return total;
}

/// True iff some vertex of `side` is unmatched in some stable matching of p.
inline bool leaves_unmatched(const BipartiteGraph& g, const PreferenceInstance& p, Side side) {
  for (const auto& m : stable_matchings(g, p)) {
    std::vector<bool> y_matched(g.y_count(), false);
    for (int y : m) {
      if (y >= 0) y_matched[y] = true;
    }
    if (side == Side::X) {
      if (std::any_of(m.begin(), m.end(), [](int y) { return y < 0; })) return true;
    } else {
      if (std::find(y_matched.begin(), y_matched.end(), false) != y_matched.end()) return true;
    }
  }
  return false;
}

/// Ground truth for "every stable matching saturates `side` under every
/// instance", by exhaustive enumeration when the instance count is at most
/// `cap`, otherwise over `samples` seeded instances.
inline bool always_saturating(const BipartiteGraph& g, Side side, std::uint64_t cap = 10'000,
                              std::uint32_t samples = 200, std::uint64_t seed = 7) {
  if (count_instances(g) <= cap) {
    bool ok = true;
    for_each_instance(g, [&](const PreferenceInstance& p) { ok = ok && !leaves_unmatched(g, p, side); });
    return ok;
  }
  for (std::uint32_t k = 0; k < samples; ++k) {
    if (leaves_unmatched(g, satmatch::sample_uniform(g, seed * 1'000'003 + k), side)) return false;
  }
  return true;
}

inline bool always_perfect(const BipartiteGraph& g, std::uint64_t cap = 10'000, std::uint32_t samples = 200,
                           std::uint64_t seed = 7) {
  if (count_instances(g) <= cap) {
    bool ok = true;
    for_each_instance(g, [&](const PreferenceInstance& p) {
      ok = ok && !leaves_unmatched(g, p, Side::X) && !leaves_unmatched(g, p, Side::Y);
    });
    return ok;
  }
  for (std::uint32_t k = 0; k < samples; ++k) {
    const auto p = satmatch::sample_uniform(g, seed * 1'000'003 + k);
    if (leaves_unmatched(g, p, Side::X) || leaves_unmatched(g, p, Side::Y)) return false;
  }
  return true;
}

}  // namespace oracle
