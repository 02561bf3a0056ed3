#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "satmatch/errors.hpp"

namespace satmatch {

enum class Side : std::uint8_t { X = 0, Y = 1 };

constexpr Side opposite(Side s) noexcept { return s == Side::X ? Side::Y : Side::X; }

constexpr char side_letter(Side s) noexcept { return s == Side::X ? 'x' : 'y'; }

/// A vertex named by its side and a dense 0-based index within that side.
struct VertexId {
  Side side = Side::X;
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(const VertexId&, const VertexId&) = default;
};

constexpr VertexId x_vertex(std::uint32_t i) noexcept { return {Side::X, i}; }
constexpr VertexId y_vertex(std::uint32_t i) noexcept { return {Side::Y, i}; }

/// "x1", "y3", ... (1-based, the way markets are usually drawn).
inline std::string to_string(VertexId v) {
  return side_letter(v.side) + std::to_string(v.index + 1);
}

struct Edge {
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable bipartite graph. Adjacency is stored for both sides as sorted
/// index lists; the Y-side lists are the exact transpose of the X-side ones.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// Throws InputError on an out-of-range endpoint or a repeated edge.
  BipartiteGraph(std::uint32_t x_count, std::uint32_t y_count, std::span<const Edge> edges)
      : adj_{std::vector<std::vector<std::uint32_t>>(x_count),
             std::vector<std::vector<std::uint32_t>>(y_count)} {
    for (const Edge& e : edges) {
      if (e.x >= x_count || e.y >= y_count) {
        throw InputError("edge (x" + std::to_string(e.x + 1) + ", y" + std::to_string(e.y + 1) +
                         ") references a vertex outside the graph");
      }
      adj_[0][e.x].push_back(e.y);
    }
    for (std::uint32_t x = 0; x < x_count; ++x) {
      auto& row = adj_[0][x];
      std::sort(row.begin(), row.end());
      if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
        throw InputError("duplicate edge at x" + std::to_string(x + 1));
      }
      for (std::uint32_t y : row) adj_[1][y].push_back(x);
    }
    edge_count_ = edges.size();
  }

  BipartiteGraph(std::uint32_t x_count, std::uint32_t y_count, std::initializer_list<Edge> edges)
      : BipartiteGraph(x_count, y_count, std::span<const Edge>(edges.begin(), edges.size())) {}

  std::uint32_t x_count() const noexcept { return static_cast<std::uint32_t>(adj_[0].size()); }
  std::uint32_t y_count() const noexcept { return static_cast<std::uint32_t>(adj_[1].size()); }
  std::uint32_t side_size(Side s) const noexcept {
    return static_cast<std::uint32_t>(adj_[static_cast<int>(s)].size());
  }
  std::size_t vertex_count() const noexcept { return adj_[0].size() + adj_[1].size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  bool contains(VertexId v) const noexcept { return v.index < side_size(v.side); }

  /// Sorted indices of the opposite-side neighbours of `v`.
  std::span<const std::uint32_t> adjacent(VertexId v) const {
    require(v);
    return adj_[static_cast<int>(v.side)][v.index];
  }

  bool has_edge(std::uint32_t x, std::uint32_t y) const {
    if (x >= x_count() || y >= y_count()) return false;
    const auto& row = adj_[0][x];
    return std::binary_search(row.begin(), row.end(), y);
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::uint32_t x = 0; x < x_count(); ++x) {
      for (std::uint32_t y : adj_[0][x]) out.push_back({x, y});
    }
    return out;
  }

  void require(VertexId v) const {
    if (!contains(v)) {
      throw InputError("vertex " + to_string(v) + " is not in the graph (side size " +
                       std::to_string(side_size(v.side)) + ")");
    }
  }

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.adj_[0] == b.adj_[0] && a.adj_[1].size() == b.adj_[1].size();
  }

 private:
  std::vector<std::vector<std::uint32_t>> adj_[2];
  std::size_t edge_count_ = 0;
};

inline BipartiteGraph complete_bipartite(std::uint32_t x_count, std::uint32_t y_count) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(x_count) * y_count);
  for (std::uint32_t x = 0; x < x_count; ++x) {
    for (std::uint32_t y = 0; y < y_count; ++y) edges.push_back({x, y});
  }
  return {x_count, y_count, edges};
}

/// Places `b` beside `a`; b's indices are shifted past a's on both sides.
inline BipartiteGraph disjoint_union(const BipartiteGraph& a, const BipartiteGraph& b) {
  std::vector<Edge> edges = a.edges();
  for (Edge e : b.edges()) edges.push_back({e.x + a.x_count(), e.y + a.y_count()});
  return {a.x_count() + b.x_count(), a.y_count() + b.y_count(), edges};
}

/// N(v), sorted by index.
inline std::vector<VertexId> neighborhood(const BipartiteGraph& g, VertexId v) {
  std::vector<VertexId> out;
  const Side other = opposite(v.side);
  for (std::uint32_t w : g.adjacent(v)) out.push_back({other, w});
  return out;
}

/// N(S) = union of N(v) over v in S. All members of S must share a side.
inline std::vector<VertexId> neighborhood_of_set(const BipartiteGraph& g,
                                                 std::span<const VertexId> s) {
  if (s.empty()) return {};
  const Side side = s.front().side;
  std::vector<char> hit(g.side_size(opposite(side)), 0);
  for (VertexId v : s) {
    if (v.side != side) {
      throw InputError("neighborhood_of_set: vertex set mixes sides (" + to_string(s.front()) +
                       ", " + to_string(v) + ")");
    }
    for (std::uint32_t w : g.adjacent(v)) hit[w] = 1;
  }
  std::vector<VertexId> out;
  for (std::uint32_t w = 0; w < hit.size(); ++w) {
    if (hit[w]) out.push_back({opposite(side), w});
  }
  return out;
}

inline std::size_t degree(const BipartiteGraph& g, VertexId v) { return g.adjacent(v).size(); }

/// A connected piece of a larger graph, with the maps from its local indices
/// back to the original ones.
struct Component {
  BipartiteGraph graph;
  std::vector<std::uint32_t> x_ids;
  std::vector<std::uint32_t> y_ids;
};

/// Maximal connected subgraphs. Ordered by smallest original X index, then
/// smallest Y index; components without X vertices come last.
inline std::vector<Component> components(const BipartiteGraph& g) {
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  const std::uint32_t nx = g.x_count();
  const std::uint32_t ny = g.y_count();
  // Vertices numbered X first, then Y.
  std::vector<std::uint32_t> label(nx + ny, kNone);
  std::uint32_t count = 0;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t start = 0; start < nx + ny; ++start) {
    if (label[start] != kNone) continue;
    label[start] = count;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::uint32_t u = stack.back();
      stack.pop_back();
      const bool is_x = u < nx;
      const VertexId v = is_x ? x_vertex(u) : y_vertex(u - nx);
      for (std::uint32_t w : g.adjacent(v)) {
        const std::uint32_t id = is_x ? nx + w : w;
        if (label[id] == kNone) {
          label[id] = count;
          stack.push_back(id);
        }
      }
    }
    ++count;
  }
  // Scanning X before Y already yields the required order.
  std::vector<Component> out(count);
  std::vector<std::uint32_t> local(nx + ny);
  for (std::uint32_t u = 0; u < nx + ny; ++u) {
    Component& c = out[label[u]];
    auto& ids = u < nx ? c.x_ids : c.y_ids;
    local[u] = static_cast<std::uint32_t>(ids.size());
    ids.push_back(u < nx ? u : u - nx);
  }
  std::vector<std::vector<Edge>> edges(count);
  for (Edge e : g.edges()) edges[label[e.x]].push_back({local[e.x], local[nx + e.y]});
  for (std::uint32_t c = 0; c < count; ++c) {
    out[c].graph = BipartiteGraph(static_cast<std::uint32_t>(out[c].x_ids.size()),
                                  static_cast<std::uint32_t>(out[c].y_ids.size()), edges[c]);
  }
  return out;
}

inline bool is_biclique(const BipartiteGraph& g) {
  return g.edge_count() == static_cast<std::size_t>(g.x_count()) * g.y_count();
}

inline bool is_complete_bipartite_balanced(const BipartiteGraph& g) {
  return g.x_count() == g.y_count() && is_biclique(g);
}

inline bool is_connected(const BipartiteGraph& g) {
  return g.vertex_count() > 0 && components(g).size() == 1;
}

}  // namespace satmatch
