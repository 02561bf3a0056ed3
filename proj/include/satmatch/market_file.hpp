#pragma once

// Market files: one JSON document describing a bipartite market by vertex
// name, with optional preference and compatibility-class blocks.
//
//   {
//     "schema_version": "1",
//     "x": ["x1", "x2"],
//     "y": ["y1", "y2"],
//     "edges": [["x1", "y1"], ["x1", "y2"], ["x2", "y2"]],
//     "preferences": {"x": {"x1": ["y2", "y1"], ...}, "y": {...}},
//     "compatibility": {"classes": ["en", "fr"],
//                       "x": {"x1": ["en"], "x2": ["en", "fr"]},
//                       "y": {"y1": "en", "y2": "fr"}}
//   }
//
// "edges" may be omitted when a compatibility block is present; the graph is
// then the class-complete one. If both are given they must agree. A vertex
// with no neighbours may omit its preference list.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "satmatch/compatibility.hpp"
#include "satmatch/errors.hpp"
#include "satmatch/graph.hpp"
#include "satmatch/preferences.hpp"

namespace satmatch {

inline constexpr std::string_view kSchemaVersion = "1";

/// JSON syntax error, located by 1-based line and column.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed JSON that does not describe a valid market. The message starts
/// with the path of the offending element, e.g. "edges[2]".
class MarketFileError : public InputError {
 public:
  using InputError::InputError;
};

using NameLists = std::map<std::string, std::vector<std::string>>;

struct MarketFile {
  struct Preferences {
    NameLists x;
    NameLists y;
    friend bool operator==(const Preferences&, const Preferences&) = default;
  };
  struct Compatibility {
    std::vector<std::string> classes;
    NameLists x;
    std::map<std::string, std::string> y;
    friend bool operator==(const Compatibility&, const Compatibility&) = default;
  };

  std::string schema_version{kSchemaVersion};
  std::vector<std::string> x_names;
  std::vector<std::string> y_names;
  std::optional<std::vector<std::pair<std::string, std::string>>> edges;
  std::optional<Preferences> preferences;
  std::optional<Compatibility> compatibility;

  friend bool operator==(const MarketFile&, const MarketFile&) = default;
};

namespace market_detail {

using json = nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw MarketFileError(path + ": " + msg);
}

inline const json& member(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing \"") + key + "\"");
  return *it;
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

inline std::vector<std::string> as_strings(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline NameLists as_name_lists(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object of name lists");
  NameLists out;
  for (const auto& [key, value] : j.items()) out[key] = as_strings(value, path + "." + key);
  return out;
}

inline void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace market_detail

/// Throws ParseError for malformed JSON and MarketFileError for a document
/// with the wrong shape. Name-level validation happens in resolve().
inline MarketFile parse_market_file(std::string_view text) {
  using namespace market_detail;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::string msg = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line 1, column 2: " prefix.
    if (const auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw ParseError(line, column, msg);
  }
  if (!doc.is_object()) fail("(document)", "expected an object");
  check_keys(doc, {"schema_version", "x", "y", "edges", "preferences", "compatibility"}, "");

  MarketFile f;
  f.schema_version = as_string(member(doc, "schema_version", "(document)"), "schema_version");
  if (f.schema_version != kSchemaVersion) {
    fail("schema_version", "unsupported version \"" + f.schema_version + "\" (expected \"1\")");
  }
  f.x_names = as_strings(member(doc, "x", "(document)"), "x");
  f.y_names = as_strings(member(doc, "y", "(document)"), "y");
  if (const auto it = doc.find("edges"); it != doc.end()) {
    if (!it->is_array()) fail("edges", "expected an array of [x, y] name pairs");
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "edges[" + std::to_string(i) + "]";
      const auto pair = as_strings((*it)[i], path);
      if (pair.size() != 2) fail(path, "expected an [x, y] name pair");
      edges.emplace_back(pair[0], pair[1]);
    }
    f.edges = std::move(edges);
  }
  if (const auto it = doc.find("preferences"); it != doc.end()) {
    if (!it->is_object()) fail("preferences", "expected an object with \"x\" and \"y\"");
    check_keys(*it, {"x", "y"}, "preferences");
    MarketFile::Preferences p;
    if (it->contains("x")) p.x = as_name_lists((*it)["x"], "preferences.x");
    if (it->contains("y")) p.y = as_name_lists((*it)["y"], "preferences.y");
    f.preferences = std::move(p);
  }
  if (const auto it = doc.find("compatibility"); it != doc.end()) {
    if (!it->is_object()) fail("compatibility", "expected an object");
    check_keys(*it, {"classes", "x", "y"}, "compatibility");
    MarketFile::Compatibility c;
    c.classes = as_strings(member(*it, "classes", "compatibility"), "compatibility.classes");
    c.x = as_name_lists(member(*it, "x", "compatibility"), "compatibility.x");
    const json& y = member(*it, "y", "compatibility");
    if (!y.is_object()) fail("compatibility.y", "expected an object mapping names to a class");
    for (const auto& [key, value] : y.items()) c.y[key] = as_string(value, "compatibility.y." + key);
    f.compatibility = std::move(c);
  }
  if (!f.edges && !f.compatibility) fail("(document)", "missing \"edges\"");
  return f;
}

inline std::string serialize_market_file(const MarketFile& f) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = f.schema_version;
  doc["x"] = f.x_names;
  doc["y"] = f.y_names;
  if (f.edges) {
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& [x, y] : *f.edges) doc["edges"].push_back({x, y});
  }
  if (f.preferences) {
    doc["preferences"]["x"] = f.preferences->x;
    doc["preferences"]["y"] = f.preferences->y;
  }
  if (f.compatibility) {
    doc["compatibility"]["classes"] = f.compatibility->classes;
    doc["compatibility"]["x"] = f.compatibility->x;
    doc["compatibility"]["y"] = f.compatibility->y;
  }
  return doc.dump(2) + "\n";
}

/// A market file resolved to dense indices.
struct Market {
  std::vector<std::string> x_names;
  std::vector<std::string> y_names;
  BipartiteGraph graph;
  std::optional<PreferenceInstance> preferences;
  std::optional<CompatibilityMarket> compatibility;
  std::vector<std::string> class_names;

  const std::vector<std::string>& names(Side s) const { return s == Side::X ? x_names : y_names; }

  const std::string& name(VertexId v) const { return names(v.side).at(v.index); }

  std::optional<VertexId> find(Side s, std::string_view n) const {
    const auto& list = names(s);
    const auto it = std::find(list.begin(), list.end(), n);
    if (it == list.end()) return std::nullopt;
    return VertexId{s, static_cast<std::uint32_t>(it - list.begin())};
  }
};

/// Maps names to indices and validates the graph, preferences and classes.
/// Throws MarketFileError naming the offending element.
inline Market resolve(const MarketFile& f) {
  using market_detail::fail;
  Market m;
  m.x_names = f.x_names;
  m.y_names = f.y_names;
  for (Side s : {Side::X, Side::Y}) {
    const auto& names = m.names(s);
    const std::string key(1, side_letter(s));
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty()) fail(key + "[" + std::to_string(i) + "]", "empty name");
      if (std::find(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(i), names[i]) !=
          names.begin() + static_cast<std::ptrdiff_t>(i)) {
        fail(key + "[" + std::to_string(i) + "]", "duplicate name \"" + names[i] + "\"");
      }
    }
  }
  auto lookup = [&](Side s, const std::string& n, const std::string& path) {
    const auto v = m.find(s, n);
    if (!v) fail(path, std::string("unknown ") + side_letter(s) + " vertex \"" + n + "\"");
    return *v;
  };

  if (f.compatibility) {
    const auto& c = *f.compatibility;
    m.class_names = c.classes;
    auto class_index = [&](const std::string& n, const std::string& path) {
      const auto it = std::find(c.classes.begin(), c.classes.end(), n);
      if (it == c.classes.end()) fail(path, "unknown class \"" + n + "\"");
      return static_cast<std::uint32_t>(it - c.classes.begin());
    };
    std::vector<std::vector<std::uint32_t>> membership(m.x_names.size());
    std::vector<char> seen_x(m.x_names.size(), 0);
    for (const auto& [name, classes] : c.x) {
      const std::string path = "compatibility.x." + name;
      const VertexId v = lookup(Side::X, name, path);
      seen_x[v.index] = 1;
      for (const auto& cls : classes) membership[v.index].push_back(class_index(cls, path));
    }
    std::vector<std::uint32_t> y_class(m.y_names.size());
    std::vector<char> seen_y(m.y_names.size(), 0);
    for (const auto& [name, cls] : c.y) {
      const std::string path = "compatibility.y." + name;
      const VertexId v = lookup(Side::Y, name, path);
      seen_y[v.index] = 1;
      y_class[v.index] = class_index(cls, path);
    }
    for (std::size_t i = 0; i < seen_x.size(); ++i) {
      if (!seen_x[i]) fail("compatibility.x", "no classes for x vertex \"" + m.x_names[i] + "\"");
    }
    for (std::size_t i = 0; i < seen_y.size(); ++i) {
      if (!seen_y[i]) fail("compatibility.y", "no class for y vertex \"" + m.y_names[i] + "\"");
    }
    try {
      m.compatibility.emplace(static_cast<std::uint32_t>(c.classes.size()), std::move(membership),
                              std::move(y_class));
    } catch (const MarketFileError&) {
      throw;
    } catch (const InputError& e) {
      fail("compatibility", e.what());
    }
  }

  if (f.edges) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < f.edges->size(); ++i) {
      const std::string path = "edges[" + std::to_string(i) + "]";
      const auto& [xn, yn] = (*f.edges)[i];
      const Edge e{lookup(Side::X, xn, path).index, lookup(Side::Y, yn, path).index};
      if (std::find(edges.begin(), edges.end(), e) != edges.end()) {
        fail(path, "duplicate edge (" + xn + ", " + yn + ")");
      }
      edges.push_back(e);
    }
    m.graph = BipartiteGraph(static_cast<std::uint32_t>(m.x_names.size()),
                             static_cast<std::uint32_t>(m.y_names.size()), edges);
    if (m.compatibility && !(m.graph == induced_graph(*m.compatibility))) {
      fail("edges", "edges differ from the class-complete graph of the compatibility block");
    }
  } else {
    m.graph = induced_graph(*m.compatibility);
  }

  if (f.preferences) {
    RawPreferences raw;
    for (Side s : {Side::X, Side::Y}) {
      const NameLists& src = s == Side::X ? f.preferences->x : f.preferences->y;
      const std::string prefix = std::string("preferences.") + side_letter(s);
      auto& dst = s == Side::X ? raw.x_lists : raw.y_lists;
      dst.resize(m.names(s).size());
      for (const auto& [name, list] : src) {
        const std::string path = prefix + "." + name;
        const VertexId v = lookup(s, name, path);
        std::vector<VertexId> row;
        for (const auto& entry : list) {
          // Same-side names are kept so validate() reports them as such.
          if (const auto w = m.find(opposite(s), entry)) {
            row.push_back(*w);
          } else if (const auto same = m.find(s, entry)) {
            row.push_back(*same);
          } else {
            fail(path, "unknown vertex \"" + entry + "\"");
          }
        }
        dst[v.index] = std::move(row);
      }
      for (std::uint32_t i = 0; i < dst.size(); ++i) {
        if (!dst[i] && m.graph.adjacent({s, i}).empty()) dst[i].emplace();
      }
    }
    try {
      m.preferences = validate(m.graph, raw);
    } catch (const PreferenceError& e) {
      std::string msg = to_string(e.kind());
      if (e.entry()) msg += " \"" + m.name(*e.entry()) + "\"";
      fail(std::string("preferences.") + side_letter(e.vertex().side) + "." + m.name(e.vertex()), msg);
    }
  }
  return m;
}

/// The file form of a resolved market, edges listed explicitly.
inline MarketFile to_market_file(const Market& m) {
  MarketFile f;
  f.x_names = m.x_names;
  f.y_names = m.y_names;
  std::vector<std::pair<std::string, std::string>> edges;
  for (Edge e : m.graph.edges()) edges.emplace_back(m.x_names[e.x], m.y_names[e.y]);
  f.edges = std::move(edges);
  if (m.preferences) {
    MarketFile::Preferences p;
    for (Side s : {Side::X, Side::Y}) {
      NameLists& dst = s == Side::X ? p.x : p.y;
      for (std::uint32_t i = 0; i < m.graph.side_size(s); ++i) {
        auto& list = dst[m.name({s, i})];
        for (std::uint32_t w : m.preferences->list({s, i})) list.push_back(m.name({opposite(s), w}));
      }
    }
    f.preferences = std::move(p);
  }
  if (m.compatibility) {
    MarketFile::Compatibility c;
    c.classes = m.class_names;
    for (std::uint32_t x = 0; x < m.compatibility->x_count(); ++x) {
      auto& list = c.x[m.x_names[x]];
      for (std::uint32_t cls : m.compatibility->classes_of(x)) list.push_back(m.class_names[cls]);
    }
    for (std::uint32_t y = 0; y < m.compatibility->y_count(); ++y) {
      c.y[m.y_names[y]] = m.class_names[m.compatibility->class_of_y(y)];
    }
    f.compatibility = std::move(c);
  }
  return f;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Market load_market(const std::string& path) {
  return resolve(parse_market_file(read_text_file(path)));
}

}  // namespace satmatch
