//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <set>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "subcard/cycle_index.hpp"

using namespace subcard;

namespace {

LabeledGraph complete(std::size_t n) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b) e.emplace_back(a, b);
  return LabeledGraph::from_edges(std::vector<Label>(n, 0), e);
}

}  // namespace

TEST(CycleIndex, CompleteGraphTotals) {
  auto idx = CycleIndex::build(complete(4));
  EXPECT_EQ(idx.total_triangles(), 4u);
  EXPECT_EQ(idx.total_four_cycles(), 3u);
  auto k5 = CycleIndex::build(complete(5));
  EXPECT_EQ(k5.total_triangles(), 10u);
  EXPECT_EQ(k5.total_four_cycles(), 15u);
}

TEST(CycleIndex, K4KeepsDistinctCyclesThroughOneEdge) {
  auto g = complete(4);
  auto idx = CycleIndex::build(g);
  // Edge (0, 1) lies on the cycles 0-1-2-3 and 0-1-3-2.
  std::set<std::pair<VertexId, VertexId>> seen;
  idx.for_each_four_cycle(g, 0, 1, [&](VertexId x, VertexId y) { seen.emplace(x, y); });
  EXPECT_EQ(seen, (std::set<std::pair<VertexId, VertexId>>{{2, 3}, {3, 2}}));
}

TEST(CycleIndex, PerEdgeListsMatchBruteForce) {
  fixtures::Rng rng(21);
  for (int rep = 0; rep < 40; ++rep) {
    auto g = fixtures::random_graph(4 + rep % 9, 0.5, 1, rng);
    auto idx = CycleIndex::build(g);
    EXPECT_EQ(idx.total_triangles(), fixtures::brute_triangles(g));
    EXPECT_EQ(idx.total_four_cycles(), fixtures::brute_four_cycles(g));
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      auto [a, b] = g.edge(e);
      std::set<VertexId> apex;
      for (VertexId c = 0; c < g.vertex_count(); ++c)
        if (g.has_edge(a, c) && g.has_edge(b, c)) apex.insert(c);
      auto got = idx.triangle_apexes(e);
      EXPECT_EQ(std::set<VertexId>(got.begin(), got.end()), apex);
      EXPECT_LE(got.size(), std::min(g.degree(a), g.degree(b)) - 1);
      for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        std::set<std::pair<VertexId, VertexId>> seen;
        std::size_t calls = 0;
        idx.for_each_four_cycle(g, x, y, [&](VertexId c, VertexId d) {
          seen.emplace(c, d);
          ++calls;
        });
        EXPECT_EQ(calls, seen.size());
        EXPECT_EQ(seen, fixtures::brute_four_cycle_pairs(g, x, y));
      }
    }
  }
}

TEST(CycleIndex, CapsDisableStorageButKeepTotals) {
  auto g = complete(5);
  auto idx = CycleIndex::build(g, 3, 3);
  EXPECT_FALSE(idx.triangles_enabled());
  EXPECT_FALSE(idx.four_cycles_enabled());
  EXPECT_EQ(idx.total_triangles(), 10u);
  EXPECT_TRUE(idx.triangle_apexes(0).empty());
  auto ok = CycleIndex::build(g, 10, 15);
  EXPECT_TRUE(ok.triangles_enabled());
  EXPECT_TRUE(ok.four_cycles_enabled());
}
