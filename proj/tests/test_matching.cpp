#include <gtest/gtest.h>

#include <random>

#include "graphs.hpp"
#include "oracle.hpp"
#include "satmatch/matching.hpp"
#include "satmatch/saturation.hpp"
#include "satmatch/verify.hpp"

using namespace satmatch;
using namespace testgraphs;

namespace {

/// x1:[y1,y2], x2:[y2,y1], y1:[x2,x1], y2:[x1,x2].
PreferenceInstance k22_cycle() { return validate(complete_bipartite(2, 2), {{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}); }

BipartiteGraph random_graph(std::mt19937_64& rng, std::uint32_t max_side) {
  const std::uint32_t nx = rng() % (max_side + 1), ny = rng() % (max_side + 1);
  std::vector<Edge> edges;
  for (std::uint32_t x = 0; x < nx; ++x)
    for (std::uint32_t y = 0; y < ny; ++y)
      if (rng() % 2) edges.push_back({x, y});
  return BipartiteGraph(nx, ny, edges);
}

/// Picks a uniformly random free proposer.
struct RandomPick {
  std::mt19937_64* rng;
  std::size_t operator()(std::span<const std::uint32_t> free) const { return (*rng)() % free.size(); }
};

}  // namespace

TEST(Matching, FromPairsValidates) {
  const auto g = fig1a();
  EXPECT_THROW(Matching::from_pairs(g, {{1, 0}}), InputError);
  EXPECT_THROW(Matching::from_pairs(g, {{0, 1}, {1, 1}}), InputError);
  const auto m = Matching::from_pairs(g, {{0, 0}, {1, 1}});
  EXPECT_EQ(m.partner(x_vertex(0)), y_vertex(0));
  EXPECT_EQ(m.partner(y_vertex(1)), x_vertex(1));
  EXPECT_EQ(m.size(), 2u);
}

TEST(DeferredAcceptance, K11) {
  const auto g = complete_bipartite(1, 1);
  const auto p = ascending_instance(g);
  EXPECT_EQ(deferred_acceptance(g, p, Side::X), Matching::from_pairs(g, {{0, 0}}));
}

TEST(DeferredAcceptance, K22SharedFavourites) {
  const auto g = complete_bipartite(2, 2);
  const auto p = validate(g, {{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
  const auto m = deferred_acceptance(g, p, Side::X);
  EXPECT_EQ(m, Matching::from_pairs(g, {{0, 0}, {1, 1}}));
  // Oracle: the X-optimal member of the brute-force stable set.
  const auto stable = oracle::stable_matchings(g, p);
  ASSERT_EQ(stable.size(), 1u);
  EXPECT_EQ(oracle::to_partner_map(m), stable.front());
}

TEST(DeferredAcceptance, Fig1aLeavesX2Unmatched) {
  const auto g = fig1a();
  const auto p = validate(g, {{1, 0}, {1}}, {{0}, {0, 1}});
  const auto m = deferred_acceptance(g, p, Side::X);
  EXPECT_EQ(m, Matching::from_pairs(g, {{0, 1}}));
  EXPECT_FALSE(m.is_matched(x_vertex(1)));
  EXPECT_FALSE(m.is_matched(y_vertex(0)));
  EXPECT_EQ(oracle::stable_matchings(g, p), (std::vector<oracle::PartnerMap>{{1, -1}}));
}

TEST(DeferredAcceptance, K22CycleSidesDiffer) {
  const auto g = complete_bipartite(2, 2);
  const auto p = k22_cycle();
  const auto mx = deferred_acceptance(g, p, Side::X);
  const auto my = deferred_acceptance(g, p, Side::Y);
  EXPECT_NE(mx, my);
  EXPECT_TRUE(is_stable(g, p, mx));
  EXPECT_TRUE(is_stable(g, p, my));
  EXPECT_EQ(mx, Matching::from_pairs(g, {{0, 0}, {1, 1}}));
  EXPECT_EQ(my, Matching::from_pairs(g, {{0, 1}, {1, 0}}));
}

TEST(BlockingPairs, EmptyMatchingOnK11) {
  const auto g = complete_bipartite(1, 1);
  const auto bp = find_blocking_pairs(g, ascending_instance(g), Matching(1, 1));
  ASSERT_EQ(bp.size(), 1u);
  EXPECT_EQ(bp[0], (BlockingPair{0, 0}));
}

TEST(BlockingPairs, Fig1aUnmatchedPairBlocks) {
  const auto g = fig1a();
  // x1:[y1,y2], x2:[y2], y1:[x1], y2:[x2,x1]; matching {(x1,y1)}.
  const auto p = validate(g, {{0, 1}, {1}}, {{0}, {1, 0}});
  const auto bp = find_blocking_pairs(g, p, Matching::from_pairs(g, {{0, 0}}));
  ASSERT_EQ(bp.size(), 1u);
  EXPECT_EQ(bp[0], (BlockingPair{1, 1}));
}

TEST(BlockingPairs, Fig1aX1ContentNoBlockViaY2) {
  const auto g = fig1a();
  // x1 holds its first choice y1, so (x1,y2) never blocks whatever y2 ranks.
  for (const auto& y2 : {std::vector<std::uint32_t>{0, 1}, std::vector<std::uint32_t>{1, 0}}) {
    const auto p = validate(g, {{0, 1}, {1}}, {{0}, y2});
    for (const auto& b : find_blocking_pairs(g, p, Matching::from_pairs(g, {{0, 0}}))) {
      EXPECT_FALSE(b.x == 0 && b.y == 1);
    }
  }
}

TEST(Stability, EmptyMatchingUnstableWhenEdgesExist) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const auto g = random_graph(rng, 4);
    const auto p = sample_uniform(g, rng());
    EXPECT_EQ(is_stable(g, p, Matching(g.x_count(), g.y_count())), g.edge_count() == 0);
  }
}

TEST(Stability, K22CycleHasTwoStableMatchings) {
  const auto g = complete_bipartite(2, 2);
  const auto p = k22_cycle();
  EXPECT_TRUE(is_stable(g, p, Matching::from_pairs(g, {{0, 0}, {1, 1}})));
  EXPECT_TRUE(is_stable(g, p, Matching::from_pairs(g, {{0, 1}, {1, 0}})));
  EXPECT_EQ(oracle::all_matchings(g).size(), 7u);
  EXPECT_EQ(oracle::stable_matchings(g, p).size(), 2u);
}

TEST(EnumerateStable, Examples) {
  const auto k11 = complete_bipartite(1, 1);
  EXPECT_EQ(enumerate_stable(k11, ascending_instance(k11)).matchings.size(), 1u);
  const auto k22 = complete_bipartite(2, 2);
  EXPECT_EQ(enumerate_stable(k22, k22_cycle()).matchings.size(), 2u);

  const auto g = fig1a();
  const auto set = enumerate_stable(g, adversarial_instance(g, x_vertex(1)));
  for (const auto& m : set.matchings) EXPECT_FALSE(m.is_matched(x_vertex(1)));
  EXPECT_EQ(set.matched_x, (std::vector<VertexId>{x_vertex(0)}));
}

TEST(EnumerateStable, SortedByPartnerMap) {
  const auto set = enumerate_stable(complete_bipartite(2, 2), k22_cycle());
  EXPECT_TRUE(std::is_sorted(set.matchings.begin(), set.matchings.end()));
}

TEST(EnumerateStable, CapExceededCarriesEstimate) {
  const auto g = complete_bipartite(3, 3);
  try {
    enumerate_stable(g, ascending_instance(g), 3);
    FAIL() << "expected CapExceeded";
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.estimate(), stable_search_bound(g));
    EXPECT_EQ(e.cap(), 3u);
  }
}

TEST(EnumerateStable, AgreesWithOracle) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 300; ++t) {
    const auto g = random_graph(rng, 4);
    const auto p = sample_uniform(g, rng());
    EXPECT_EQ(oracle::to_partner_maps(enumerate_stable(g, p).matchings), oracle::stable_matchings(g, p));
  }
}

TEST(MaximumMatching, Examples) {
  EXPECT_EQ(maximum_matching(complete_bipartite(3, 3)).size(), 3u);
  const auto g = fig1a();
  const auto m = maximum_matching(g);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.size(), oracle::max_matching_size(g));
  EXPECT_LT(maximum_matching(BipartiteGraph(2, 2, {{0, 0}})).size(), 2u);
}

TEST(MaximumMatching, AgreesWithOracleSize) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_graph(rng, 4);
    const auto m = maximum_matching(g);
    EXPECT_EQ(m.size(), oracle::max_matching_size(g));
    for (const Edge& e : m.pairs()) EXPECT_TRUE(g.has_edge(e.x, e.y));
  }
}

TEST(MatchedSet, Examples) {
  EXPECT_TRUE(matched_set(Matching(2, 2), Side::X).empty());
  const auto g = complete_bipartite(3, 3);
  const auto m = Matching::from_pairs(g, {{0, 2}, {1, 0}, {2, 1}});
  EXPECT_EQ(matched_set(m, Side::X).size(), 3u);
  EXPECT_EQ(matched_set(m, Side::Y).size(), 3u);
}

// Property tests over random graphs and instances.

TEST(MatchingProperties, DeferredAcceptanceStableBothSides) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 500; ++t) {
    const auto g = random_graph(rng, 5);
    const auto p = sample_uniform(g, rng());
    for (Side s : {Side::X, Side::Y}) EXPECT_TRUE(is_stable(g, p, deferred_acceptance(g, p, s)));
  }
}

TEST(MatchingProperties, ProposalOrderDoesNotMatter) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 500; ++t) {
    const auto g = random_graph(rng, 5);
    const auto p = sample_uniform(g, rng());
    for (Side s : {Side::X, Side::Y}) {
      EXPECT_EQ(deferred_acceptance_with(g, p, s, RandomPick{&rng}), deferred_acceptance(g, p, s));
    }
  }
}

TEST(MatchingProperties, ProposingSideOptimal) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 300; ++t) {
    const auto g = random_graph(rng, 4);
    const auto p = sample_uniform(g, rng());
    const auto set = enumerate_stable(g, p);
    for (Side s : {Side::X, Side::Y}) {
      const auto best = deferred_acceptance(g, p, s);
      for (const auto& m : set.matchings) {
        for (std::uint32_t i = 0; i < g.side_size(s); ++i) {
          const VertexId v{s, i};
          EXPECT_TRUE(best.partner(v) == m.partner(v) || prefers(p, v, best.partner(v), m.partner(v)));
        }
      }
    }
  }
}

TEST(MatchingProperties, MatchedSetsInvariant) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 300; ++t) {
    const auto g = random_graph(rng, 4);
    const auto p = sample_uniform(g, rng());
    const auto stable = oracle::stable_matchings(g, p);
    std::vector<bool> first(g.x_count());
    for (std::uint32_t x = 0; x < g.x_count(); ++x) first[x] = stable.front()[x] >= 0;
    for (const auto& m : stable) {
      for (std::uint32_t x = 0; x < g.x_count(); ++x) EXPECT_EQ(m[x] >= 0, first[x]);
    }
    const auto set = enumerate_stable(g, p);
    for (const auto& m : set.matchings) {
      EXPECT_EQ(matched_set(m, Side::X), set.matched_x);
      EXPECT_EQ(matched_set(m, Side::Y), set.matched_y);
    }
  }
}

TEST(MatchingProperties, StableSizeBoundedByMaximum) {
  std::mt19937_64 rng(35);
  for (int t = 0; t < 300; ++t) {
    const auto g = random_graph(rng, 4);
    const auto p = sample_uniform(g, rng());
    const auto max = maximum_matching(g).size();
    for (const auto& m : enumerate_stable(g, p).matchings) {
      EXPECT_LE(m.size(), max);
      if (is_saturating(m, Side::X)) {
        EXPECT_EQ(max, g.x_count());
      }
    }
  }
}
