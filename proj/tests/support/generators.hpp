//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "subcard/candidate_space.hpp"
#include "subcard/graph.hpp"

namespace subcard::fixtures {

using Rng = std::mt19937_64;

/// G(n, p) with uniformly drawn labels in [0, labels).
inline LabeledGraph random_graph(std::size_t n, double p, Label labels, Rng &rng) {
  std::vector<Label> lab(n);
  std::uniform_int_distribution<Label> pick(0, labels - 1);
  for (auto &l : lab) l = pick(rng);
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b)
      if (coin(rng)) edges.emplace_back(a, b);
  return LabeledGraph::from_edges(std::move(lab), edges);
}

/// Connected induced subgraph of g on `size` vertices grown from a random
/// start, vertex ids shuffled. Returns nullopt if the component is too small.
inline std::optional<LabeledGraph> random_induced_query(const LabeledGraph &g, std::size_t size, Rng &rng) {
  std::uniform_int_distribution<VertexId> start(0, static_cast<VertexId>(g.vertex_count() - 1));
  std::vector<VertexId> chosen{start(rng)};
  std::vector<char> in(g.vertex_count(), 0);
  in[chosen[0]] = 1;
  while (chosen.size() < size) {
    std::vector<VertexId> frontier;
    for (VertexId v : chosen)
      for (VertexId w : g.neighbors(v))
        if (!in[w]) frontier.push_back(w);
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    if (frontier.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
    VertexId w = frontier[pick(rng)];
    in[w] = 1;
    chosen.push_back(w);
  }
  std::shuffle(chosen.begin(), chosen.end(), rng);
  std::vector<VertexId> id(g.vertex_count(), kNoVertex);
  for (VertexId i = 0; i < chosen.size(); ++i) id[chosen[i]] = i;
  std::vector<Label> labels(size);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId i = 0; i < chosen.size(); ++i) {
    labels[i] = g.label(chosen[i]);
    for (VertexId w : g.neighbors(chosen[i]))
      if (id[w] != kNoVertex && id[w] > i) edges.emplace_back(i, id[w]);
  }
  return LabeledGraph::from_edges(std::move(labels), edges);
}

/// Random connected query on `size` vertices: a random tree plus extra edges
/// with probability p.
inline LabeledGraph random_connected_query(std::size_t size, double p, Label labels, Rng &rng) {
  std::vector<Label> lab(size);
  std::uniform_int_distribution<Label> pick(0, labels - 1);
  for (auto &l : lab) l = pick(rng);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId v = 1; v < size; ++v) {
    std::uniform_int_distribution<VertexId> parent(0, v - 1);
    edges.emplace_back(parent(rng), v);
  }
  std::bernoulli_distribution coin(p);
  for (VertexId a = 0; a < size; ++a)
    for (VertexId b = a + 1; b < size; ++b)
      if (coin(rng)) edges.emplace_back(a, b);
  return LabeledGraph::from_edges(std::move(lab), edges);
}

/// Query q, data g and a candidate space over them, kept at stable addresses.
struct Instance {
  LabeledGraph q;
  LabeledGraph g;
  std::unique_ptr<CandidateSpace> cs;
};

/// Five-vertex query with six candidate trees and exactly two embeddings.
///
/// Query u1..u5 (ids 0..4), tree edges u1-u2, u1-u3, u1-u4, u3-u5 and
/// non-tree edges u2-u4, u3-u4. Data v1..v11 (ids 0..10). The candidate
/// edges of every query edge are listed explicitly; the data graph is their
/// union.
inline std::unique_ptr<Instance> running_example() {
  auto inst = std::make_unique<Instance>();
  auto v = [](int i) { return static_cast<VertexId>(i - 1); };
  // Labels: u1 A, u2 B, u3 C, u4 D, u5 B.
  inst->q = LabeledGraph::from_edges({0, 1, 2, 3, 1}, std::vector<std::pair<VertexId, VertexId>>{
                                                          {0, 1}, {0, 2}, {0, 3}, {2, 4}, {1, 3}, {2, 3}});
  struct CandEdge {
    VertexId u, u2;
    int v, v2;
  };
  const std::vector<CandEdge> cand_edges = {
      {0, 1, 1, 3}, {0, 1, 2, 4},                                            // u1-u2
      {0, 2, 1, 5}, {0, 2, 1, 10}, {0, 2, 2, 6},                             // u1-u3
      {0, 3, 1, 7}, {0, 3, 2, 8},  {0, 3, 2, 9},                             // u1-u4
      {2, 4, 5, 3}, {2, 4, 10, 3}, {2, 4, 6, 3}, {2, 4, 6, 4},               // u3-u5
      {1, 3, 4, 8}, {1, 3, 4, 9},  {1, 3, 3, 8}, {1, 3, 3, 9},               // u2-u4
      {2, 3, 6, 8}, {2, 3, 6, 9},  {2, 3, 5, 7}, {2, 3, 10, 7}, {2, 3, 5, 8}, {2, 3, 10, 9},  // u3-u4
  };
  // v1 v2: A, v3 v4 v11: B, v5 v6 v10: C, v7 v8 v9: D
  std::vector<Label> labels = {0, 0, 1, 1, 2, 2, 3, 3, 3, 2, 1};
  std::vector<std::pair<VertexId, VertexId>> data_edges;
  for (const auto &e : cand_edges) data_edges.emplace_back(v(e.v), v(e.v2));
  inst->g = LabeledGraph::from_edges(std::move(labels), data_edges);
  inst->cs = std::make_unique<CandidateSpace>(inst->q, inst->g);
  const std::vector<std::vector<int>> cands = {{1, 2}, {3, 4}, {5, 6, 10}, {7, 8, 9}, {3, 4, 11}};
  for (VertexId u = 0; u < cands.size(); ++u)
    for (int x : cands[u]) inst->cs->add_candidate(u, v(x));
  for (const auto &e : cand_edges) inst->cs->add_candidate_edge(e.u, v(e.v), e.u2, v(e.v2));
  return inst;
}

}  // namespace subcard::fixtures
