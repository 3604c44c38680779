//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <map>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "subcard/exact.hpp"
#include "subcard/refine.hpp"
#include "subcard/tree_sampler.hpp"

using namespace subcard;

namespace {

using Edges = std::vector<std::pair<VertexId, VertexId>>;

// Path u0-u1-u2 with C(u) = {a, b} for every u and all four cross pairs as
// candidate edges: 8 candidate trees.
struct PathInstance {
  LabeledGraph q = LabeledGraph::from_edges({0, 0, 0}, Edges{{0, 1}, {1, 2}});
  LabeledGraph g = LabeledGraph::from_edges({0, 0, 0, 0}, Edges{{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  CandidateSpace cs{q, g};
  PathInstance() {
    // u0, u2 -> {0, 1}; u1 -> {2, 3}.
    for (VertexId v : {0u, 1u}) {
      cs.add_candidate(0, v);
      cs.add_candidate(2, v);
    }
    for (VertexId v : {2u, 3u}) cs.add_candidate(1, v);
    for (VertexId a : {0u, 1u})
      for (VertexId b : {2u, 3u}) {
        cs.add_candidate_edge(0, a, 1, b);
        cs.add_candidate_edge(2, a, 1, b);
      }
  }
};

}  // namespace

TEST(SpanningTree, RunningExampleDropsTheDenseEdges) {
  auto ex = fixtures::running_example();
  auto tree = choose_spanning_tree(*ex->cs);
  ASSERT_TRUE(tree);
  EXPECT_EQ(tree->root, 0u);
  EXPECT_EQ(tree->parent, (std::vector<VertexId>{kNoVertex, 0, 0, 0, 2}));
  EXPECT_EQ(tree->non_tree_edges, (Edges{{1, 3}, {2, 3}}));
  EXPECT_DOUBLE_EQ(edge_density(*ex->cs, 1, 3), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(edge_density(*ex->cs, 2, 4), 4.0 / 9.0);
}

TEST(SpanningTree, TriangleKeepsTheTwoSparsestEdges) {
  // Triangle with densities 1/3 (u0-u1), 2/3 (u1-u2), 2/3 (u0-u2).
  auto q = LabeledGraph::from_edges({0, 1, 2}, Edges{{0, 1}, {1, 2}, {0, 2}});
  auto g = LabeledGraph::from_edges({0, 0, 0, 1, 1, 1, 2, 2, 2},
                                    Edges{{0, 3}, {1, 4}, {2, 5}, {3, 6}, {3, 7}, {4, 7}, {4, 8}, {5, 8}, {5, 6},
                                          {0, 6}, {0, 7}, {1, 7}, {1, 8}, {2, 8}, {2, 6}});
  auto cs = build_initial_cs(q, g);
  ASSERT_DOUBLE_EQ(edge_density(cs, 0, 1), 1.0 / 3.0);
  ASSERT_DOUBLE_EQ(edge_density(cs, 1, 2), 2.0 / 3.0);
  ASSERT_DOUBLE_EQ(edge_density(cs, 0, 2), 2.0 / 3.0);
  auto tree = choose_spanning_tree(cs);
  ASSERT_TRUE(tree);
  ASSERT_EQ(tree->non_tree_edges.size(), 1u);
  EXPECT_NE(tree->non_tree_edges[0], (std::pair<VertexId, VertexId>{0, 1}));
}

TEST(SpanningTree, TreeQueryHasNoNonTreeEdges) {
  auto q = LabeledGraph::from_edges({0, 0, 0, 0}, Edges{{0, 1}, {1, 2}, {1, 3}});
  fixtures::Rng rng(1);
  auto g = fixtures::random_graph(20, 0.3, 1, rng);
  auto cs = build_initial_cs(q, g);
  auto tree = choose_spanning_tree(cs);
  ASSERT_TRUE(tree);
  EXPECT_TRUE(tree->non_tree_edges.empty());
  EXPECT_EQ(tree->bfs_order.front(), tree->root);
}

TEST(SpanningTree, MissingCandidateEdgesShortCircuit) {
  auto q = LabeledGraph::from_edges({0, 1}, Edges{{0, 1}});
  auto g = LabeledGraph::from_edges({0, 1}, Edges{});
  CandidateSpace cs(q, g);
  cs.add_candidate(0, 0);
  cs.add_candidate(1, 1);
  EXPECT_FALSE(choose_spanning_tree(cs));
}

TEST(SpanningTree, FromParentsValidates) {
  auto q = LabeledGraph::from_edges({0, 0, 0}, Edges{{0, 1}, {1, 2}});
  EXPECT_THROW(RootedSpanningTree::from_parents(q, 0, {kNoVertex, 0, 0}), std::invalid_argument);  // 0-2 not an edge
  EXPECT_THROW(RootedSpanningTree::from_parents(q, 0, {kNoVertex, 2, 1}), std::invalid_argument);  // cycle
  auto t = RootedSpanningTree::from_parents(q, 2, {1, 2, kNoVertex});
  EXPECT_EQ(t.bfs_order, (std::vector<VertexId>{2, 1, 0}));
}

TEST(TreeCounting, PathWithFullCrossPairsHasEightTrees) {
  PathInstance p;
  auto tree = choose_spanning_tree(p.cs);
  ASSERT_TRUE(tree);
  auto table = count_candidate_trees<double>(p.cs, *tree);
  EXPECT_DOUBLE_EQ(table.total, 8.0);
  auto exact = count_candidate_trees<BigCount>(p.cs, *tree);
  EXPECT_EQ(exact.total, 8);
  EXPECT_EQ(enumerate_candidate_trees(p.cs, *tree).size(), 8u);
  for (VertexId u = 0; u < 3; ++u) {
    if (!tree->children[u].empty()) continue;
    for (VertexId v : p.cs.candidates(u)) EXPECT_DOUBLE_EQ(table.at(p.cs, u, v), 1.0);
  }
}

TEST(TreeCounting, RunningExampleHasSixTrees) {
  auto ex = fixtures::running_example();
  auto tree = choose_spanning_tree(*ex->cs);
  auto table = count_candidate_trees<double>(*ex->cs, *tree);
  EXPECT_DOUBLE_EQ(table.total, 6.0);
  EXPECT_DOUBLE_EQ(table.at(*ex->cs, 0, 0), 2.0);
  EXPECT_DOUBLE_EQ(table.at(*ex->cs, 0, 1), 4.0);
}

TEST(TreeCounting, DynamicProgramMatchesBruteForce) {
  fixtures::Rng rng(12);
  for (int rep = 0; rep < 40; ++rep) {
    auto g = fixtures::random_graph(16 + rep % 10, 0.3, 2, rng);
    auto q = fixtures::random_connected_query(3 + rep % 4, 0.3, 2, rng);
    auto cs = build_initial_cs(q, g);
    cs.remove_unsupported();
    if (cs.has_empty_candidate_set()) continue;
    auto tree = choose_spanning_tree(cs);
    if (!tree) continue;
    auto brute = fixtures::brute_candidate_trees(cs, tree->parent);
    EXPECT_EQ(count_candidate_trees<BigCount>(cs, *tree).total, brute.size());
    auto listed = enumerate_candidate_trees(cs, *tree);
    std::sort(listed.begin(), listed.end());
    std::sort(brute.begin(), brute.end());
    EXPECT_EQ(listed, brute);
  }
}

TEST(TreeSampling, SingleVertexQuerySplitsEvenly) {
  auto q = LabeledGraph::from_edges({0}, Edges{});
  auto g = LabeledGraph::from_edges({0, 0}, Edges{});
  auto cs = build_initial_cs(q, g);
  auto tree = choose_spanning_tree(cs);
  ASSERT_TRUE(tree);
  auto table = count_candidate_trees<double>(cs, *tree);
  TreeSampler sampler(cs, *tree, table);
  std::mt19937_64 rng(3);
  std::vector<VertexId> m(1);
  int first = 0;
  for (int i = 0; i < 20000; ++i) {
    sampler.sample(rng, m);
    first += m[0] == 0;
  }
  EXPECT_NEAR(first / 20000.0, 0.5, 0.02);
}

TEST(TreeSampling, EightTreeInstanceIsUniform) {
  PathInstance p;
  auto tree = choose_spanning_tree(p.cs);
  auto table = count_candidate_trees<double>(p.cs, *tree);
  TreeSampler sampler(p.cs, *tree, table);
  std::mt19937_64 rng(5);
  std::map<std::vector<VertexId>, int> freq;
  std::vector<VertexId> m(3);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    sampler.sample(rng, m);
    ++freq[m];
  }
  EXPECT_EQ(freq.size(), 8u);
  for (auto &[k, c] : freq) EXPECT_NEAR(c / double(draws), 1.0 / 8, 0.01);
}

TEST(TreeSampling, UniqueTreeIsAlwaysReturned) {
  auto q = LabeledGraph::from_edges({0, 1}, Edges{{0, 1}});
  auto g = LabeledGraph::from_edges({0, 1, 1}, Edges{{0, 1}});
  auto cs = build_initial_cs(q, g);
  cs.remove_unsupported();
  auto tree = choose_spanning_tree(cs);
  auto table = count_candidate_trees<double>(cs, *tree);
  ASSERT_DOUBLE_EQ(table.total, 1.0);
  TreeSampler sampler(cs, *tree, table);
  std::mt19937_64 rng(1);
  std::vector<VertexId> m(2);
  for (int i = 0; i < 100; ++i) {
    sampler.sample(rng, m);
    EXPECT_EQ(m, (std::vector<VertexId>{0, 1}));
  }
}

TEST(CheckEmbedding, RunningExampleCases) {
  auto ex = fixtures::running_example();
  const auto &cs = *ex->cs;
  auto tree = *choose_spanning_tree(cs);
  // v_i has id i - 1.
  EXPECT_TRUE(check_embedding(cs, tree, std::vector<VertexId>{1, 3, 5, 7, 2}));   // success
  EXPECT_FALSE(check_embedding(cs, tree, std::vector<VertexId>{1, 3, 5, 7, 3}));  // u2, u5 -> v4
  EXPECT_FALSE(check_embedding(cs, tree, std::vector<VertexId>{0, 2, 4, 6, 2}));  // v7 not in C(u4|u2,v3)
}

TEST(TreeSampling, InjectedOutcomesGiveTheRatioTimesTotal) {
  auto ex = fixtures::running_example();
  std::mt19937_64 rng(0);
  const bool outcomes[] = {false, true, false};
  int k = 0;
  auto r = candidate_tree_sampling(*ex->cs, StoppingConfig::fixed(3), rng,
                                   [&](const RootedSpanningTree &, std::span<const VertexId>) { return outcomes[k++]; });
  EXPECT_EQ(r.trials, 3u);
  EXPECT_EQ(r.successes, 1u);
  EXPECT_DOUBLE_EQ(r.total, 6.0);
  EXPECT_DOUBLE_EQ(r.estimate, 2.0);
  EXPECT_FALSE(r.early_fail);
}

TEST(TreeSampling, ZeroTotalReturnsZeroImmediately) {
  auto q = LabeledGraph::from_edges({0, 1}, Edges{{0, 1}});
  auto g = LabeledGraph::from_edges({0, 1}, Edges{});
  CandidateSpace cs(q, g);
  cs.add_candidate(0, 0);
  cs.add_candidate(1, 1);
  std::mt19937_64 rng(0);
  auto r = candidate_tree_sampling(cs, StoppingConfig{}, rng);
  EXPECT_EQ(r.estimate, 0.0);
  EXPECT_EQ(r.trials, 0u);
  EXPECT_FALSE(r.early_fail);
}

TEST(TreeSampling, RunningExampleEstimateConverges) {
  auto ex = fixtures::running_example();
  std::mt19937_64 rng(9);
  auto r = candidate_tree_sampling(*ex->cs, StoppingConfig{}, rng);
  EXPECT_EQ(r.reason, StopReason::interval);
  EXPECT_NEAR(r.estimate, 2.0, 2.0 * 0.25);
}
