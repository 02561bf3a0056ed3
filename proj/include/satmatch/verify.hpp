#pragma once

// Exhaustive / sampled checks of the saturation characterizations against
// ground truth computed by enumerating stable matchings. Used by the
// `satmatch verify` command and by the acceptance tests.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "satmatch/compatibility.hpp"
#include "satmatch/graph.hpp"
#include "satmatch/matching.hpp"
#include "satmatch/preferences.hpp"
#include "satmatch/saturation.hpp"

namespace satmatch {

struct VerifyOptions {
  std::uint32_t max_side = 3;         ///< graph suites: |X|, |Y| <= max_side
  std::uint32_t market_max_side = 4;  ///< compatibility suite: vertices per side
  std::uint32_t max_classes = 3;
  std::uint64_t instance_cap = 10'000;  ///< exhaustive when |P| <= cap, else sample
  std::uint32_t seeds = 200;            ///< samples per graph above the cap
  std::uint32_t market_seeds = 50;      ///< sampled instances per market
  std::uint64_t seed = 20211;
  std::uint64_t node_cap = kDefaultNodeCap;
  /// Test-only: negate every predicted verdict so the harness must fail.
  bool inject_fault = false;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::uint64_t graphs = 0;
  std::uint64_t instances = 0;
  std::uint64_t stable_sets = 0;
  std::uint64_t matchings = 0;
  std::uint64_t discrepancies = 0;
  std::uint64_t sampled_graphs = 0;  ///< graphs checked on samples rather than all of P
  double seconds = 0;
  std::vector<std::string> failures;  ///< first few, for the report

  void fail(std::string what) {
    passed = false;
    ++discrepancies;
    if (failures.size() < 10) failures.push_back(std::move(what));
  }
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const {
    for (const auto& s : suites) {
      if (!s.passed) return false;
    }
    return true;
  }
};

namespace verify_detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ b);
}

inline std::string describe(const BipartiteGraph& g) {
  std::string s = std::to_string(g.x_count()) + "x" + std::to_string(g.y_count()) + " {";
  bool first = true;
  for (Edge e : g.edges()) {
    if (!first) s += ' ';
    first = false;
    s += "x" + std::to_string(e.x + 1) + "y" + std::to_string(e.y + 1);
  }
  return s + "}";
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace verify_detail

/// Calls fn(graph, code) for each of the 2^(nx*ny) graphs on fixed vertex
/// sets; bit (x*ny + y) of `code` is the edge (x, y).
inline void for_each_graph(std::uint32_t nx, std::uint32_t ny,
                           const std::function<void(const BipartiteGraph&, std::uint64_t)>& fn) {
  const std::uint32_t bits = nx * ny;
  if (bits >= 63) throw InputError("graph enumeration limited to fewer than 63 vertex pairs");
  std::vector<Edge> edges;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    edges.clear();
    for (std::uint32_t b = 0; b < bits; ++b) {
      if (code >> b & 1) edges.push_back({b / ny, b % ny});
    }
    fn(BipartiteGraph(nx, ny, edges), code);
  }
}

/// Every instance when |P| <= cap, otherwise `seeds` seeded samples.
/// Returns true when the walk was exhaustive. fn returns false to stop early.
inline bool for_each_instance(const BipartiteGraph& g, std::uint64_t cap, std::uint32_t seeds,
                              std::uint64_t seed,
                              const std::function<bool(const PreferenceInstance&)>& fn) {
  if (instance_count(g) <= cap) {
    for (const PreferenceInstance& p : enumerate_all(g, cap)) {
      if (!fn(p)) break;
    }
    return true;
  }
  for (std::uint32_t k = 0; k < seeds; ++k) {
    if (!fn(sample_uniform(g, verify_detail::derive_seed(seed, k, 0)))) break;
  }
  return false;
}

namespace verify_detail {

// Enumerates the stable set and tallies it, recording an invariance violation
// (InternalError from the enumerator) as a failure. Returns nullopt then.
inline std::optional<StableSet> checked_stable_set(const BipartiteGraph& g, const PreferenceInstance& p,
                                                   SuiteResult& r, std::uint64_t node_cap) {
  ++r.instances;
  try {
    StableSet s = enumerate_stable(g, p, node_cap);
    ++r.stable_sets;
    r.matchings += s.matchings.size();
    return s;
  } catch (const InternalError& e) {
    r.fail(describe(g) + ": " + e.what());
    return std::nullopt;
  }
}

// All stable matchings saturate `side` for every checked instance.
inline bool ground_truth_saturating(const BipartiteGraph& g, const VerifyOptions& o, std::uint64_t code,
                                    std::span<const Side> sides, SuiteResult& r) {
  bool all = true;
  const bool exhaustive = for_each_instance(
      g, o.instance_cap, o.seeds, derive_seed(o.seed, code, g.x_count() * 16 + g.y_count()),
      [&](const PreferenceInstance& p) {
        const auto set = checked_stable_set(g, p, r, o.node_cap);
        if (!set) return false;
        for (Side s : sides) {
          const auto& matched = s == Side::X ? set->matched_x : set->matched_y;
          if (matched.size() != g.side_size(s)) all = false;
        }
        // A single proposer-optimal matching answers the same question.
        const Matching da = deferred_acceptance(g, p, Side::X);
        if (!is_stable(g, p, da) || matched_set(da, Side::X) != set->matched_x ||
            matched_set(da, Side::Y) != set->matched_y) {
          r.fail(describe(g) + ": deferred acceptance disagrees with the stable set");
        }
        return all;
      });
  if (!exhaustive) ++r.sampled_graphs;
  return all;
}

}  // namespace verify_detail

/// Suite 1: the per-vertex condition verdict for side X agrees with "every
/// stable matching of every instance is X-saturating", over all graphs with
/// |X|, |Y| <= max_side.
inline SuiteResult verify_theorem1(const VerifyOptions& o) {
  using namespace verify_detail;
  const Timer timer;
  SuiteResult r;
  r.name = "saturation characterization";
  const Side sides[] = {Side::X};
  for (std::uint32_t nx = 0; nx <= o.max_side; ++nx) {
    for (std::uint32_t ny = 0; ny <= o.max_side; ++ny) {
      for_each_graph(nx, ny, [&](const BipartiteGraph& g, std::uint64_t code) {
        ++r.graphs;
        const bool predicted = theorem1_verdict(g, Side::X).holds != o.inject_fault;
        const bool truth = ground_truth_saturating(g, o, code, sides, r);
        if (predicted != truth) {
          r.fail(describe(g) + ": verdict " + (predicted ? "holds" : "fails") + ", ground truth " +
                 (truth ? "saturating" : "not saturating"));
        }
      });
    }
  }
  r.seconds = timer.seconds();
  return r;
}

/// Suite 2: for every vertex failing both conditions, the constructed
/// instance leaves it unmatched in every stable matching.
inline SuiteResult verify_adversary(const VerifyOptions& o) {
  using namespace verify_detail;
  const Timer timer;
  SuiteResult r;
  r.name = "adversarial construction";
  for (std::uint32_t nx = 1; nx <= o.max_side; ++nx) {
    for (std::uint32_t ny = 0; ny <= o.max_side; ++ny) {
      for_each_graph(nx, ny, [&](const BipartiteGraph& g, std::uint64_t) {
        bool counted = false;
        for (std::uint32_t x = 0; x < nx; ++x) {
          const auto rep = vertex_report(g, x_vertex(x));
          if (rep.satisfied || rep.isolated) continue;
          if (!counted) ++r.graphs;
          counted = true;
          const PreferenceInstance p = adversarial_instance(g, x_vertex(x));
          const auto set = checked_stable_set(g, p, r, o.node_cap);
          if (!set) continue;
          for (const Matching& m : set->matchings) {
            if (m.is_matched(x_vertex(x)) != o.inject_fault) {
              r.fail(describe(g) + ": x" + std::to_string(x + 1) +
                     " matched under its adversarial instance");
              break;
            }
          }
        }
      });
    }
  }
  r.seconds = timer.seconds();
  return r;
}

/// Suite 3: matched sets agree across every stable set enumerated by the
/// given suites. The enumerator itself checks this per set; this tallies it.
inline SuiteResult verify_invariance(std::span<const SuiteResult> sources) {
  SuiteResult r;
  r.name = "matched-set invariance";
  for (const auto& s : sources) {
    r.stable_sets += s.stable_sets;
    r.matchings += s.matchings;
    r.instances += s.instances;
    r.seconds += s.seconds;
    for (const auto& f : s.failures) {
      if (f.find("disagree") != std::string::npos) r.fail(f);
    }
  }
  if (r.stable_sets == 0) r.fail("no stable sets were produced");
  return r;
}

/// Suite 4: on connected balanced graphs, the complete-bipartite test agrees
/// with "every stable matching is perfect under every instance".
inline SuiteResult verify_theorem2(const VerifyOptions& o) {
  using namespace verify_detail;
  const Timer timer;
  SuiteResult r;
  r.name = "perfection on connected graphs";
  const Side sides[] = {Side::X, Side::Y};
  for (std::uint32_t n = 1; n <= o.max_side; ++n) {
    for_each_graph(n, n, [&](const BipartiteGraph& g, std::uint64_t code) {
      if (!is_connected(g)) return;
      ++r.graphs;
      const bool predicted = theorem2_verdict(g).holds != o.inject_fault;
      const bool truth = ground_truth_saturating(g, o, code, sides, r);
      if (predicted != truth) r.fail(describe(g) + ": perfection verdict disagrees with ground truth");
    });
  }
  r.seconds = timer.seconds();
  return r;
}

/// Suite 5: on all balanced graphs, the per-component biclique test (with
/// per-component balance) agrees with ground truth and with the two-sided
/// condition verdict.
inline SuiteResult verify_corollary(const VerifyOptions& o) {
  using namespace verify_detail;
  const Timer timer;
  SuiteResult r;
  r.name = "perfection per component";
  const Side sides[] = {Side::X, Side::Y};
  auto check = [&](const BipartiteGraph& g, std::uint64_t code) {
    ++r.graphs;
    const bool predicted = corollary_verdict(g).holds != o.inject_fault;
    if (perfect_verdict(g) != corollary_verdict(g).holds) {
      r.fail(describe(g) + ": component test and two-sided condition test disagree");
    }
    const bool truth = ground_truth_saturating(g, o, code, sides, r);
    if (predicted != truth) r.fail(describe(g) + ": component verdict disagrees with ground truth");
  };
  for (std::uint32_t n = 0; n <= o.max_side; ++n) for_each_graph(n, n, check);
  // The globally balanced but per-component unbalanced case, explicitly.
  check(disjoint_union(complete_bipartite(1, 2), complete_bipartite(2, 1)), ~std::uint64_t{0});
  r.seconds = timer.seconds();
  return r;
}

/// Calls fn for every way of writing `total` as `parts` ordered nonnegative sizes.
inline void for_each_composition(std::uint32_t total, std::uint32_t parts,
                                 const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  std::vector<std::uint32_t> sizes(parts, 0);
  auto place = [&](auto&& self, std::uint32_t i, std::uint32_t left) -> void {
    if (i + 1 == parts) {
      sizes[i] = left;
      fn(sizes);
      return;
    }
    for (std::uint32_t k = 0; k <= left; ++k) {
      sizes[i] = k;
      self(self, i + 1, left - k);
    }
  };
  if (parts > 0) place(place, 0, total);
}

/// Calls fn for every market with 1..max_classes classes and up to max_side
/// vertices per side, up to relabelling of vertices within a side: X
/// memberships are taken as a multiset of class subsets and Y as a vector of
/// class sizes.
inline void for_each_market(std::uint32_t max_classes, std::uint32_t max_side,
                            const std::function<void(const CompatibilityMarket&)>& fn) {
  for (std::uint32_t n = 1; n <= max_classes; ++n) {
    const std::uint32_t subsets = (1u << n) - 1;  // nonempty class subsets, as bitmasks 1..subsets
    for (std::uint32_t nx = n; nx <= max_side; ++nx) {
      // Nondecreasing sequences of subset masks of length nx.
      std::vector<std::uint32_t> masks(nx, 1);
      while (true) {
        std::vector<std::uint32_t> exclusive(n, 0);
        for (auto mask : masks) {
          if (std::has_single_bit(mask)) ++exclusive[static_cast<std::uint32_t>(std::countr_zero(mask))];
        }
        if (std::all_of(exclusive.begin(), exclusive.end(), [](auto c) { return c > 0; })) {
          std::vector<std::vector<std::uint32_t>> membership;
          for (auto mask : masks) {
            std::vector<std::uint32_t> classes;
            for (std::uint32_t c = 0; c < n; ++c) {
              if (mask >> c & 1) classes.push_back(c);
            }
            membership.push_back(std::move(classes));
          }
          for (std::uint32_t ny = 0; ny <= max_side; ++ny) {
            for_each_composition(ny, n, [&](const std::vector<std::uint32_t>& sizes) {
              std::vector<std::uint32_t> y_class;
              for (std::uint32_t c = 0; c < n; ++c) y_class.insert(y_class.end(), sizes[c], c);
              fn(CompatibilityMarket(n, membership, y_class));
            });
          }
        }
        std::uint32_t i = nx;
        while (i > 0 && masks[i - 1] == subsets) --i;
        if (i == 0) break;
        const std::uint32_t next = masks[i - 1] + 1;
        for (std::uint32_t j = i - 1; j < nx; ++j) masks[j] = next;
      }
    }
  }
}

/// Suite 6: the class-size test for compatibility markets.
inline SuiteResult verify_theorem3(const VerifyOptions& o) {
  using namespace verify_detail;
  const Timer timer;
  SuiteResult r;
  r.name = "compatibility classes";
  std::uint64_t market_index = 0;
  for_each_market(o.max_classes, o.market_max_side, [&](const CompatibilityMarket& m) {
    ++r.graphs;
    ++market_index;
    const BipartiteGraph g = induced_graph(m);
    const Theorem3Verdict verdict = theorem3_verdict(m);
    const auto consistency = verdict_consistency(m);
    const std::string label = "market #" + std::to_string(market_index) + " " + describe(g);
    if (!consistency.consistent) r.fail(label + ": class-size verdict holds but condition verdict fails");
    const bool predicted = verdict.holds != o.inject_fault;
    if (predicted) {
      for (std::uint32_t k = 0; k < o.market_seeds; ++k) {
        const PreferenceInstance p = sample_uniform(g, derive_seed(o.seed, market_index, k));
        const auto set = checked_stable_set(g, p, r, o.node_cap);
        if (set && set->matched_x.size() != g.x_count()) {
          r.fail(label + ": class sizes suffice but a stable matching leaves X unsaturated");
          break;
        }
      }
      return;
    }
    if (verdict.deficient.empty()) r.fail(label + ": class-size verdict fails without a deficient class");
    for (std::uint32_t c : verdict.deficient) {
      const std::uint32_t x = m.exclusive_vertex(c);
      const bool isolated = g.adjacent(x_vertex(x)).empty();
      // An exclusive vertex of a class with no Y members has nobody to match.
      const PreferenceInstance p = isolated ? ascending_instance(g) : adversarial_instance(g, x_vertex(x));
      const auto set = checked_stable_set(g, p, r, o.node_cap);
      if (!set) continue;
      for (const Matching& mt : set->matchings) {
        if (mt.is_matched(x_vertex(x))) {
          r.fail(label + ": exclusive vertex x" + std::to_string(x + 1) + " of a deficient class matched");
          break;
        }
      }
    }
  });
  r.seconds = timer.seconds();
  return r;
}

/// Runs suites 1-6 in order.
inline VerifyReport run_verification(const VerifyOptions& o) {
  VerifyReport report;
  report.suites.push_back(verify_theorem1(o));
  report.suites.push_back(verify_adversary(o));
  report.suites.push_back(verify_invariance(std::span<const SuiteResult>(report.suites.data(), 2)));
  report.suites.push_back(verify_theorem2(o));
  report.suites.push_back(verify_corollary(o));
  report.suites.push_back(verify_theorem3(o));
  return report;
}

}  // namespace satmatch
