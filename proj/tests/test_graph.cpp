#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "graphs.hpp"
#include "satmatch/graph.hpp"
#include "satmatch/verify.hpp"

using namespace satmatch;
using namespace testgraphs;

namespace {

std::vector<VertexId> ys(std::initializer_list<std::uint32_t> idx) {
  std::vector<VertexId> out;
  for (auto i : idx) out.push_back(y_vertex(i));
  return out;
}

std::vector<VertexId> xs(std::initializer_list<std::uint32_t> idx) {
  std::vector<VertexId> out;
  for (auto i : idx) out.push_back(x_vertex(i));
  return out;
}

BipartiteGraph random_graph(std::mt19937_64& rng, std::uint32_t max_side = 4) {
  std::uniform_int_distribution<std::uint32_t> size(0, max_side);
  const std::uint32_t nx = size(rng), ny = size(rng);
  std::vector<Edge> edges;
  std::bernoulli_distribution coin(0.45);
  for (std::uint32_t x = 0; x < nx; ++x)
    for (std::uint32_t y = 0; y < ny; ++y)
      if (coin(rng)) edges.push_back({x, y});
  return BipartiteGraph(nx, ny, edges);
}

}  // namespace

TEST(Graph, ConstructionRejectsBadEdges) {
  EXPECT_THROW(BipartiteGraph(2, 2, {{0, 2}}), InputError);
  EXPECT_THROW(BipartiteGraph(2, 2, {{2, 0}}), InputError);
  EXPECT_THROW(BipartiteGraph(2, 2, {{0, 1}, {0, 1}}), InputError);
}

TEST(Graph, AdjacencySortedAndTransposed) {
  const auto g = fig1c();
  const auto n = g.adjacent(x_vertex(1));
  EXPECT_TRUE(std::is_sorted(n.begin(), n.end()));
  EXPECT_EQ(std::vector<std::uint32_t>(n.begin(), n.end()), (std::vector<std::uint32_t>{0, 1, 3}));
  EXPECT_EQ(g.edge_count(), 8u);
}

TEST(Graph, VertexNames) {
  EXPECT_EQ(to_string(x_vertex(0)), "x1");
  EXPECT_EQ(to_string(y_vertex(3)), "y4");
}

TEST(Neighborhood, Fig1aX2) { EXPECT_EQ(neighborhood(fig1a(), x_vertex(1)), ys({1})); }

TEST(Neighborhood, IsolatedVertexIsEmpty) {
  const BipartiteGraph g(2, 2, {{0, 0}});
  EXPECT_TRUE(neighborhood(g, x_vertex(1)).empty());
  EXPECT_TRUE(neighborhood(g, y_vertex(1)).empty());
}

TEST(Neighborhood, Fig1cX3) { EXPECT_EQ(neighborhood(fig1c(), x_vertex(2)), ys({1, 2})); }

TEST(Neighborhood, InvalidVertexThrows) {
  EXPECT_THROW(neighborhood(fig1a(), x_vertex(2)), InputError);
  EXPECT_THROW(degree(fig1a(), y_vertex(5)), InputError);
}

TEST(NeighborhoodOfSet, Fig1aY2) { EXPECT_EQ(neighborhood_of_set(fig1a(), ys({1})), xs({0, 1})); }

TEST(NeighborhoodOfSet, EmptySet) { EXPECT_TRUE(neighborhood_of_set(fig1a(), {}).empty()); }

TEST(NeighborhoodOfSet, Fig1bNeighboursOfX2) {
  const auto g = fig1b();
  EXPECT_EQ(neighborhood_of_set(g, neighborhood(g, x_vertex(1))), xs({0, 1}));
}

TEST(NeighborhoodOfSet, MixedSidesThrow) {
  EXPECT_THROW(neighborhood_of_set(fig1a(), std::vector<VertexId>{x_vertex(0), y_vertex(0)}), InputError);
}

TEST(Degree, Examples) {
  EXPECT_EQ(degree(fig1b(), y_vertex(2)), 1u);
  EXPECT_EQ(degree(BipartiteGraph(1, 1, {}), x_vertex(0)), 0u);
  const auto k33 = complete_bipartite(3, 3);
  for (std::uint32_t i = 0; i < 3; ++i) {
    EXPECT_EQ(degree(k33, x_vertex(i)), 3u);
    EXPECT_EQ(degree(k33, y_vertex(i)), 3u);
  }
}

TEST(Components, Fig2bSplitsIntoTwoK22) {
  const auto cs = components(fig2b());
  ASSERT_EQ(cs.size(), 2u);
  for (const auto& c : cs) {
    EXPECT_EQ(c.graph, complete_bipartite(2, 2));
  }
  EXPECT_EQ(cs[0].x_ids, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(cs[1].y_ids, (std::vector<std::uint32_t>{2, 3}));
}

TEST(Components, ConnectedGraphIsOneComponent) {
  const auto g = fig2a();
  const auto cs = components(g);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].graph, g);
}

TEST(Components, IsolatedYIsItsOwnComponent) {
  const BipartiteGraph g(1, 2, {{0, 0}});
  const auto cs = components(g);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[1].x_ids.size(), 0u);
  EXPECT_EQ(cs[1].y_ids, (std::vector<std::uint32_t>{1}));
}

TEST(Biclique, Examples) {
  EXPECT_TRUE(is_biclique(complete_bipartite(2, 2)));
  EXPECT_FALSE(is_biclique(fig2a()));
  EXPECT_TRUE(is_biclique(BipartiteGraph(0, 0, {})));
}

TEST(CompleteBalanced, Examples) {
  EXPECT_TRUE(is_complete_bipartite_balanced(complete_bipartite(3, 3)));
  EXPECT_FALSE(is_complete_bipartite_balanced(complete_bipartite(2, 3)));
  EXPECT_FALSE(is_complete_bipartite_balanced(fig2a()));
}

TEST(Connected, Examples) {
  EXPECT_TRUE(is_connected(fig2a()));
  EXPECT_FALSE(is_connected(fig2b()));
  EXPECT_TRUE(is_connected(complete_bipartite(1, 1)));
  EXPECT_FALSE(is_connected(BipartiteGraph(0, 0, {})));
}

TEST(GraphProperties, TransposeConsistency) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_graph(rng);
    for (std::uint32_t x = 0; x < g.x_count(); ++x) {
      for (std::uint32_t y = 0; y < g.y_count(); ++y) {
        const auto nx = neighborhood(g, x_vertex(x));
        const auto ny = neighborhood(g, y_vertex(y));
        const bool a = std::find(nx.begin(), nx.end(), y_vertex(y)) != nx.end();
        const bool b = std::find(ny.begin(), ny.end(), x_vertex(x)) != ny.end();
        EXPECT_EQ(a, b);
        EXPECT_EQ(a, g.has_edge(x, y));
      }
    }
  }
}

TEST(GraphProperties, NeighbourhoodSubadditiveAndMonotone) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_graph(rng);
    if (g.x_count() == 0) continue;
    std::vector<VertexId> s, u;
    std::bernoulli_distribution coin(0.5);
    for (std::uint32_t x = 0; x < g.x_count(); ++x) {
      if (coin(rng)) s.push_back(x_vertex(x));
      if (coin(rng)) u.push_back(x_vertex(x));
    }
    std::vector<VertexId> su = s;
    su.insert(su.end(), u.begin(), u.end());
    std::sort(su.begin(), su.end());
    su.erase(std::unique(su.begin(), su.end()), su.end());
    const auto ns = neighborhood_of_set(g, s), nu = neighborhood_of_set(g, u), nsu = neighborhood_of_set(g, su);
    EXPECT_LE(nsu.size(), ns.size() + nu.size());
    EXPECT_TRUE(std::includes(nsu.begin(), nsu.end(), ns.begin(), ns.end()));
    EXPECT_TRUE(std::includes(nsu.begin(), nsu.end(), nu.begin(), nu.end()));
  }
}

TEST(GraphProperties, ComponentsPartitionVertices) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_graph(rng);
    std::size_t vertices = 0, edges = 0;
    std::vector<int> x_owner(g.x_count(), -1), y_owner(g.y_count(), -1);
    const auto cs = components(g);
    for (std::size_t c = 0; c < cs.size(); ++c) {
      vertices += cs[c].x_ids.size() + cs[c].y_ids.size();
      edges += cs[c].graph.edge_count();
      for (auto x : cs[c].x_ids) x_owner[x] = static_cast<int>(c);
      for (auto y : cs[c].y_ids) y_owner[y] = static_cast<int>(c);
      EXPECT_TRUE(is_connected(cs[c].graph));
    }
    EXPECT_EQ(vertices, g.vertex_count());
    EXPECT_EQ(edges, g.edge_count());
    for (const Edge& e : g.edges()) EXPECT_EQ(x_owner[e.x], y_owner[e.y]);
  }
}

TEST(GraphProperties, BicliqueDegreesFull) {
  for (std::uint32_t nx = 0; nx <= 3; ++nx) {
    for (std::uint32_t ny = 0; ny <= 3; ++ny) {
      for_each_graph(nx, ny, [&](const BipartiteGraph& g, std::uint64_t) {
        if (!is_biclique(g)) return;
        for (std::uint32_t x = 0; x < nx; ++x) EXPECT_EQ(degree(g, x_vertex(x)), ny);
        for (std::uint32_t y = 0; y < ny; ++y) EXPECT_EQ(degree(g, y_vertex(y)), nx);
      });
    }
  }
}
