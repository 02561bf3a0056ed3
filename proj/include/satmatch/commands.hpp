#pragma once

// The work behind each `satmatch` subcommand, separated from argument parsing
// so tests can drive it directly. Every report has a structured (JSON) form
// that round-trips, and a text form for terminals.

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "satmatch/compatibility.hpp"
#include "satmatch/market_file.hpp"
#include "satmatch/matching.hpp"
#include "satmatch/saturation.hpp"
#include "satmatch/verify.hpp"

namespace nlohmann {
template <typename T>
struct adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& v) {
    if (v) {
      j = *v;
    } else {
      j = nullptr;
    }
  }
  static void from_json(const json& j, std::optional<T>& v) {
    if (j.is_null()) {
      v.reset();
    } else {
      v = j.get<T>();
    }
  }
};
}  // namespace nlohmann

namespace satmatch {

/// Process exit codes shared by all subcommands.
enum ExitCode : int {
  kExitOk = 0,        ///< success / verdict holds
  kExitNegative = 1,  ///< domain-negative answer
  kExitUsage = 2,     ///< usage, parse or validation error
  kExitCap = 3,       ///< resource cap exceeded
};

using NamePair = std::array<std::string, 2>;

struct PreferenceTable {
  NameLists x;
  NameLists y;
  friend bool operator==(const PreferenceTable&, const PreferenceTable&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PreferenceTable, x, y)

struct VertexRow {
  std::string name;
  std::size_t n_size = 0;
  std::size_t nn_size = 0;
  bool cond1 = false;
  std::optional<std::string> witness;
  bool isolated = false;
  bool satisfied = false;
  friend bool operator==(const VertexRow&, const VertexRow&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(VertexRow, name, n_size, nn_size, cond1, witness, isolated, satisfied)

struct CounterexampleRow {
  std::string vertex;
  PreferenceTable preferences;
  friend bool operator==(const CounterexampleRow&, const CounterexampleRow&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CounterexampleRow, vertex, preferences)

struct ConnectedPerfectionRow {
  bool holds = false;
  std::optional<NamePair> missing_edge;
  friend bool operator==(const ConnectedPerfectionRow&, const ConnectedPerfectionRow&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConnectedPerfectionRow, holds, missing_edge)

struct ComponentRow {
  std::vector<std::string> x;
  std::vector<std::string> y;
  bool biclique = false;
  bool balanced = false;
  std::optional<NamePair> missing_edge;
  friend bool operator==(const ComponentRow&, const ComponentRow&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ComponentRow, x, y, biclique, balanced, missing_edge)

struct ComponentPerfectionRow {
  bool holds = false;
  std::vector<ComponentRow> components;
  friend bool operator==(const ComponentPerfectionRow&, const ComponentPerfectionRow&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ComponentPerfectionRow, holds, components)

struct ClassRow {
  std::string name;
  std::size_t a = 0;
  std::size_t b = 0;
  friend bool operator==(const ClassRow&, const ClassRow&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClassRow, name, a, b)

struct CompatibilityRow {
  bool holds = false;
  std::vector<ClassRow> classes;
  bool condition_verdict = false;
  bool consistent = false;
  friend bool operator==(const CompatibilityRow&, const CompatibilityRow&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CompatibilityRow, holds, classes, condition_verdict, consistent)

struct AnalyzeReport {
  std::string side;
  bool holds = false;
  std::vector<VertexRow> vertices;
  std::vector<std::string> failing;
  std::vector<std::string> overcautious;
  std::optional<CounterexampleRow> counterexample;
  bool perfect = false;
  std::optional<ConnectedPerfectionRow> connected_perfection;
  std::optional<ComponentPerfectionRow> component_perfection;
  std::optional<CompatibilityRow> compatibility;
  friend bool operator==(const AnalyzeReport&, const AnalyzeReport&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AnalyzeReport, side, holds, vertices, failing, overcautious, counterexample,
                                   perfect, connected_perfection, component_perfection, compatibility)

struct MatchReport {
  std::string proposing;
  std::vector<NamePair> pairs;
  std::vector<std::string> unmatched_x;
  std::vector<std::string> unmatched_y;
  bool stable = false;
  std::vector<NamePair> blocking_pairs;
  friend bool operator==(const MatchReport&, const MatchReport&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MatchReport, proposing, pairs, unmatched_x, unmatched_y, stable, blocking_pairs)

struct EnumerateReport {
  std::size_t count = 0;
  std::vector<std::vector<NamePair>> matchings;
  std::vector<std::string> matched_x;
  std::vector<std::string> matched_y;
  std::vector<std::string> unmatched_x;
  std::vector<std::string> unmatched_y;
  std::uint64_t nodes_visited = 0;
  friend bool operator==(const EnumerateReport&, const EnumerateReport&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EnumerateReport, count, matchings, matched_x, matched_y, unmatched_x,
                                   unmatched_y, nodes_visited)

struct AdversaryReport {
  std::string target;
  bool constructed = false;
  std::string reason;  ///< why not, when !constructed
  std::vector<std::string> crowded;
  std::optional<PreferenceTable> preferences;
  /// Every stable matching leaves the target unmatched; null if enumeration hit its cap.
  std::optional<bool> confirmed;
  std::optional<std::size_t> stable_matchings;
  std::optional<std::string> out_path;
  friend bool operator==(const AdversaryReport&, const AdversaryReport&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AdversaryReport, target, constructed, reason, crowded, preferences, confirmed,
                                   stable_matchings, out_path)

struct ErrorReport {
  std::string kind;  ///< "usage", "parse", "validation", "cap", "internal"
  std::string message;
  std::optional<std::size_t> line;
  std::optional<std::size_t> column;
  std::optional<std::uint64_t> estimate;
  friend bool operator==(const ErrorReport&, const ErrorReport&) = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ErrorReport, kind, message, line, column, estimate)

inline void to_json(nlohmann::json& j, const SuiteResult& s) {
  j = {{"name", s.name},
       {"passed", s.passed},
       {"graphs", s.graphs},
       {"instances", s.instances},
       {"stable_sets", s.stable_sets},
       {"matchings", s.matchings},
       {"discrepancies", s.discrepancies},
       {"sampled_graphs", s.sampled_graphs},
       {"seconds", s.seconds},
       {"failures", s.failures}};
}

inline void from_json(const nlohmann::json& j, SuiteResult& s) {
  j.at("name").get_to(s.name);
  j.at("passed").get_to(s.passed);
  j.at("graphs").get_to(s.graphs);
  j.at("instances").get_to(s.instances);
  j.at("stable_sets").get_to(s.stable_sets);
  j.at("matchings").get_to(s.matchings);
  j.at("discrepancies").get_to(s.discrepancies);
  j.at("sampled_graphs").get_to(s.sampled_graphs);
  j.at("seconds").get_to(s.seconds);
  j.at("failures").get_to(s.failures);
}

inline void to_json(nlohmann::json& j, const VerifyReport& r) {
  j = {{"passed", r.passed()}, {"suites", r.suites}};
}

inline void from_json(const nlohmann::json& j, VerifyReport& r) { j.at("suites").get_to(r.suites); }

// ---------------------------------------------------------------------------

namespace command_detail {

inline std::vector<std::string> names_of(const Market& m, const std::vector<VertexId>& vs) {
  std::vector<std::string> out;
  for (VertexId v : vs) out.push_back(m.name(v));
  return out;
}

inline PreferenceTable table_of(const Market& m, const PreferenceInstance& p) {
  Market copy = m;
  copy.preferences = p;
  const MarketFile f = to_market_file(copy);
  return {f.preferences->x, f.preferences->y};
}

inline std::vector<NamePair> pairs_of(const Market& m, const Matching& mt) {
  std::vector<NamePair> out;
  for (Edge e : mt.pairs()) out.push_back({m.x_names[e.x], m.y_names[e.y]});
  return out;
}

inline std::vector<std::string> unmatched_of(const Market& m, const Matching& mt, Side s) {
  std::vector<std::string> out;
  for (std::uint32_t i = 0; i < m.graph.side_size(s); ++i) {
    if (!mt.is_matched({s, i})) out.push_back(m.name({s, i}));
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, const char* sep = ", ") {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
  return out;
}

inline const PreferenceInstance& require_preferences(const Market& m) {
  if (!m.preferences) throw InputError("the market file has no \"preferences\" block");
  return *m.preferences;
}

}  // namespace command_detail

inline Side parse_side(std::string_view s) {
  if (s == "x" || s == "X") return Side::X;
  if (s == "y" || s == "Y") return Side::Y;
  throw InputError("side must be x or y, got \"" + std::string(s) + "\"");
}

inline std::string side_name(Side s) { return std::string(1, side_letter(s)); }

// --- analyze ---------------------------------------------------------------

inline AnalyzeReport analyze(const Market& m, Side side) {
  using namespace command_detail;
  const BipartiteGraph& g = m.graph;
  const SaturationVerdict verdict = theorem1_verdict(g, side);
  AnalyzeReport r;
  r.side = side_name(side);
  r.holds = verdict.holds;
  for (const auto& v : verdict.reports) {
    VertexRow row;
    row.name = m.name(v.vertex);
    row.n_size = v.n_size;
    row.nn_size = v.nn_size;
    row.cond1 = v.cond1;
    if (v.cond2_witness) row.witness = m.name(*v.cond2_witness);
    row.isolated = v.isolated;
    row.satisfied = v.satisfied;
    r.vertices.push_back(std::move(row));
  }
  r.failing = names_of(m, verdict.failing());
  r.overcautious = names_of(m, verdict.overcautious);
  if (verdict.counterexample) {
    r.counterexample = CounterexampleRow{m.name(verdict.counterexample->vertex),
                                         table_of(m, verdict.counterexample->instance)};
  }
  r.perfect = perfect_verdict(g);
  if (g.x_count() == g.y_count()) {
    const CorollaryVerdict cv = corollary_verdict(g);
    ComponentPerfectionRow row;
    row.holds = cv.holds;
    for (const auto& c : cv.components) {
      ComponentRow cr;
      for (auto x : c.x_ids) cr.x.push_back(m.x_names[x]);
      for (auto y : c.y_ids) cr.y.push_back(m.y_names[y]);
      cr.biclique = c.biclique;
      cr.balanced = c.balanced;
      if (c.missing_edge) cr.missing_edge = NamePair{m.x_names[c.missing_edge->x], m.y_names[c.missing_edge->y]};
      row.components.push_back(std::move(cr));
    }
    r.component_perfection = std::move(row);
    if (g.x_count() > 0 && is_connected(g)) {
      const PerfectionVerdict pv = theorem2_verdict(g);
      ConnectedPerfectionRow cp;
      cp.holds = pv.holds;
      if (pv.missing_edge) cp.missing_edge = NamePair{m.x_names[pv.missing_edge->x], m.y_names[pv.missing_edge->y]};
      r.connected_perfection = cp;
    }
  }
  if (m.compatibility) {
    const Theorem3Verdict tv = theorem3_verdict(*m.compatibility);
    const ConsistencyReport cr = verdict_consistency(*m.compatibility);
    CompatibilityRow row;
    row.holds = tv.holds;
    for (std::uint32_t c = 0; c < tv.classes.size(); ++c) {
      row.classes.push_back({m.class_names[c], tv.classes[c].a, tv.classes[c].b});
    }
    row.condition_verdict = cr.theorem1;
    row.consistent = cr.consistent;
    r.compatibility = std::move(row);
  }
  return r;
}

inline int exit_code(const AnalyzeReport& r) { return r.holds ? kExitOk : kExitNegative; }

inline std::string render_text(const AnalyzeReport& r) {
  using command_detail::join;
  std::ostringstream out;
  const std::string S = r.side == "x" ? "X" : "Y";
  out << "Side " << S << ": every stable matching is " << S << "-saturating under every preference instance: "
      << (r.holds ? "YES" : "NO") << "\n\n";
  out << "  vertex  |N(v)|  |N(N(v))|  cond1    cond2 witness    status\n";
  for (const auto& v : r.vertices) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-6s  %6zu  %9zu  %-7s  %-15s  %s\n", v.name.c_str(), v.n_size, v.nn_size,
                  v.cond1 ? "yes" : "no", v.witness ? v.witness->c_str() : "-",
                  v.isolated ? "ISOLATED" : v.satisfied ? "ok" : "FAILS");
    out << line;
  }
  if (!r.failing.empty()) out << "\nFailing vertices: " << join(r.failing) << "\n";
  if (r.counterexample) {
    out << "\nCounterexample: under these preferences " << r.counterexample->vertex
        << " is unmatched in every stable matching\n";
    for (const auto* side : {&r.counterexample->preferences.x, &r.counterexample->preferences.y}) {
      for (const auto& [name, list] : *side) out << "  " << name << ": " << join(list, " > ") << "\n";
    }
  }
  if (!r.overcautious.empty()) {
    out << "\nFail both conditions yet matched in every stable matching under every instance: "
        << join(r.overcautious) << "\n";
  }
  out << "\nPerfect (both sides saturated) under every instance: " << (r.perfect ? "YES" : "NO") << "\n";
  if (r.connected_perfection) {
    out << "  connected, balanced: complete bipartite = " << (r.connected_perfection->holds ? "yes" : "no");
    if (r.connected_perfection->missing_edge) {
      out << " (missing edge " << (*r.connected_perfection->missing_edge)[0] << "-"
          << (*r.connected_perfection->missing_edge)[1] << ")";
    }
    out << "\n";
  }
  if (r.component_perfection) {
    out << "  per component: every component a balanced biclique = "
        << (r.component_perfection->holds ? "yes" : "no") << "\n";
    for (const auto& c : r.component_perfection->components) {
      out << "    {" << join(c.x) << "} + {" << join(c.y) << "}: " << (c.biclique ? "biclique" : "not a biclique")
          << ", " << (c.balanced ? "balanced" : "unbalanced");
      if (c.missing_edge) out << ", missing " << (*c.missing_edge)[0] << "-" << (*c.missing_edge)[1];
      out << "\n";
    }
  }
  if (r.compatibility) {
    out << "\nCompatibility classes: |B_i| >= |A_i| for every class: " << (r.compatibility->holds ? "YES" : "NO")
        << "\n";
    for (const auto& c : r.compatibility->classes) {
      out << "  " << c.name << ": |A| = " << c.a << ", |B| = " << c.b << (c.b >= c.a ? "" : "  (deficient)") << "\n";
    }
    out << "  agrees with the condition verdict: " << (r.compatibility->consistent ? "yes" : "NO (engine bug)")
        << "\n";
  }
  return out.str();
}

// --- match -----------------------------------------------------------------

inline MatchReport match(const Market& m, Side proposing) {
  using namespace command_detail;
  const PreferenceInstance& p = require_preferences(m);
  const Matching mt = deferred_acceptance(m.graph, p, proposing);
  MatchReport r;
  r.proposing = side_name(proposing);
  r.pairs = pairs_of(m, mt);
  r.unmatched_x = unmatched_of(m, mt, Side::X);
  r.unmatched_y = unmatched_of(m, mt, Side::Y);
  for (const BlockingPair& b : find_blocking_pairs(m.graph, p, mt)) {
    r.blocking_pairs.push_back({m.x_names[b.x], m.y_names[b.y]});
  }
  r.stable = r.blocking_pairs.empty();
  return r;
}

inline std::string render_text(const MatchReport& r) {
  using command_detail::join;
  std::ostringstream out;
  out << (r.proposing == "x" ? "X" : "Y") << "-proposing deferred acceptance\n";
  for (const auto& [x, y] : r.pairs) out << "  " << x << " - " << y << "\n";
  out << "unmatched X: " << (r.unmatched_x.empty() ? "none" : join(r.unmatched_x)) << "\n";
  out << "unmatched Y: " << (r.unmatched_y.empty() ? "none" : join(r.unmatched_y)) << "\n";
  out << "stable: " << (r.stable ? "yes" : "NO") << "\n";
  return out.str();
}

// --- enumerate -------------------------------------------------------------

inline EnumerateReport enumerate(const Market& m, std::uint64_t node_cap) {
  using namespace command_detail;
  const StableSet set = enumerate_stable(m.graph, require_preferences(m), node_cap);
  EnumerateReport r;
  r.count = set.matchings.size();
  for (const Matching& mt : set.matchings) r.matchings.push_back(pairs_of(m, mt));
  r.matched_x = names_of(m, set.matched_x);
  r.matched_y = names_of(m, set.matched_y);
  r.unmatched_x = unmatched_of(m, set.matchings.front(), Side::X);
  r.unmatched_y = unmatched_of(m, set.matchings.front(), Side::Y);
  r.nodes_visited = set.nodes_visited;
  return r;
}

inline std::string render_text(const EnumerateReport& r) {
  using command_detail::join;
  std::ostringstream out;
  out << r.count << " stable matching" << (r.count == 1 ? "" : "s") << " (" << r.nodes_visited
      << " search nodes)\n";
  for (const auto& matching : r.matchings) {
    std::vector<std::string> parts;
    for (const auto& [x, y] : matching) parts.push_back(x + "-" + y);
    out << "  {" << join(parts) << "}\n";
  }
  out << "matched in every stable matching: X {" << join(r.matched_x) << "}, Y {" << join(r.matched_y) << "}\n";
  out << "unmatched in every stable matching: X {" << join(r.unmatched_x) << "}, Y {" << join(r.unmatched_y)
      << "}\n";
  return out.str();
}

// --- adversary -------------------------------------------------------------

/// Finds the target by name, on `side` if given. Throws InputError if the
/// name is unknown or ambiguous.
inline VertexId find_vertex(const Market& m, const std::string& name, std::optional<Side> side) {
  if (side) {
    if (const auto v = m.find(*side, name)) return *v;
    throw InputError("no " + side_name(*side) + " vertex named \"" + name + "\"");
  }
  const auto x = m.find(Side::X, name);
  const auto y = m.find(Side::Y, name);
  if (x && y) throw InputError("\"" + name + "\" names a vertex on both sides; pass --side");
  if (!x && !y) throw InputError("no vertex named \"" + name + "\"");
  return x ? *x : *y;
}

/// The emitted market (input market with the constructed preferences) is
/// returned through `emitted` when construction succeeds.
inline AdversaryReport adversary(const Market& m, VertexId target, std::uint64_t node_cap,
                                 std::optional<Market>* emitted = nullptr) {
  AdversaryReport r;
  r.target = m.name(target);
  PreferenceInstance p;
  try {
    p = adversarial_instance(m.graph, target);
  } catch (const AdversaryPrecondition& e) {
    r.constructed = false;
    r.reason = e.what();
    // Report in the file's names rather than positional ones.
    const auto& rep = e.report();
    switch (e.reason()) {
      case AdversaryPrecondition::Reason::Isolated:
        r.reason = r.target + " is isolated; it is unmatched under every instance";
        break;
      case AdversaryPrecondition::Reason::Condition1:
        r.reason = r.target + " satisfies condition (1): |N(N(" + r.target + "))| = " +
                   std::to_string(rep.nn_size) + " <= |N(" + r.target + ")| = " + std::to_string(rep.n_size);
        break;
      case AdversaryPrecondition::Reason::Condition2:
        r.reason = r.target + " satisfies condition (2) witness " + m.name(*rep.cond2_witness) + " (degree 1)";
        break;
      case AdversaryPrecondition::Reason::NeighborsNotCoverable:
        r.crowded = command_detail::names_of(m, e.crowded());
        r.reason = r.target + " fails both conditions but is matched in every stable matching: neighbours {" +
                   command_detail::join(r.crowded) + "} have only " + std::to_string(r.crowded.size() - 1) +
                   (r.crowded.size() == 2 ? " other partner" : " other partners") + " between them";
        break;
    }
    return r;
  }
  r.constructed = true;
  r.preferences = command_detail::table_of(m, p);
  try {
    const StableSet set = enumerate_stable(m.graph, p, node_cap);
    r.stable_matchings = set.matchings.size();
    bool all_unmatched = true;
    for (const Matching& mt : set.matchings) all_unmatched = all_unmatched && !mt.is_matched(target);
    r.confirmed = all_unmatched;
  } catch (const CapExceeded&) {
    // Left unconfirmed.
  }
  if (emitted) {
    Market out = m;
    out.preferences = p;
    *emitted = std::move(out);
  }
  return r;
}

inline int exit_code(const AdversaryReport& r) {
  if (!r.constructed) return kExitNegative;
  return r.confirmed.value_or(true) ? kExitOk : kExitNegative;
}

inline std::string render_text(const AdversaryReport& r) {
  using command_detail::join;
  std::ostringstream out;
  if (!r.constructed) {
    out << "No adversarial instance for " << r.target << ": " << r.reason << "\n";
    return out.str();
  }
  out << "Preferences under which " << r.target << " is unmatched in every stable matching:\n";
  for (const auto* side : {&r.preferences->x, &r.preferences->y}) {
    for (const auto& [name, list] : *side) out << "  " << name << ": " << join(list, " > ") << "\n";
  }
  if (r.confirmed) {
    out << "confirmed by enumeration: " << (*r.confirmed ? "yes" : "NO") << " (" << *r.stable_matchings
        << " stable matching" << (*r.stable_matchings == 1 ? "" : "s") << ")\n";
  } else {
    out << "confirmation skipped: enumeration cap reached\n";
  }
  if (r.out_path) out << "written to " << *r.out_path << "\n";
  return out.str();
}

// --- verify ----------------------------------------------------------------

inline int exit_code(const VerifyReport& r) { return r.passed() ? kExitOk : kExitNegative; }

inline std::string render_text(const VerifyReport& r) {
  std::ostringstream out;
  for (const auto& s : r.suites) {
    char line[320];
    std::snprintf(line, sizeof line,
                  "%-4s %-32s graphs %7llu  instances %9llu  matchings %9llu  sampled %4llu  %7.2fs\n",
                  s.passed ? "PASS" : "FAIL", s.name.c_str(), static_cast<unsigned long long>(s.graphs),
                  static_cast<unsigned long long>(s.instances), static_cast<unsigned long long>(s.matchings),
                  static_cast<unsigned long long>(s.sampled_graphs), s.seconds);
    out << line;
    for (const auto& f : s.failures) out << "       " << f << "\n";
  }
  out << (r.passed() ? "all suites passed" : "VERIFICATION FAILED") << "\n";
  return out.str();
}

}  // namespace satmatch
