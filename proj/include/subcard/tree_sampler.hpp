//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subcard/candidate_space.hpp"
#include "subcard/clopper_pearson.hpp"

namespace subcard {

/// Spanning tree T_q of the query, rooted and oriented away from the root.
struct RootedSpanningTree {
  VertexId root = 0;
  /// parent[u], kNoVertex for the root.
  std::vector<VertexId> parent;
  /// Position of u in the query neighbor list of parent[u].
  std::vector<std::size_t> parent_slot;
  std::vector<std::vector<VertexId>> children;
  /// Starts at the root; every vertex appears after its parent.
  std::vector<VertexId> bfs_order;
  std::vector<std::pair<VertexId, VertexId>> non_tree_edges;

  std::size_t vertex_count() const noexcept { return parent.size(); }

  /// Builds the tree from a parent array (parent[root] == kNoVertex). Throws
  /// std::invalid_argument if the parents do not form a spanning tree of q
  /// made of query edges.
  static RootedSpanningTree from_parents(const LabeledGraph &q, VertexId root, std::vector<VertexId> parent);
};

inline RootedSpanningTree RootedSpanningTree::from_parents(const LabeledGraph &q, VertexId root,
                                                           std::vector<VertexId> parent) {
  const std::size_t n = q.vertex_count();
  if (parent.size() != n || root >= n || parent[root] != kNoVertex) {
    throw std::invalid_argument("parent array does not describe a rooted tree");
  }
  RootedSpanningTree t;
  t.root = root;
  t.parent = std::move(parent);
  t.parent_slot.assign(n, 0);
  t.children.assign(n, {});
  for (VertexId u = 0; u < n; ++u) {
    if (u == root) continue;
    VertexId p = t.parent[u];
    if (p >= n || !q.has_edge(u, p)) throw std::invalid_argument("tree edge is not a query edge");
    t.children[p].push_back(u);
    auto nbrs = q.neighbors(p);
    t.parent_slot[u] = static_cast<std::size_t>(std::lower_bound(nbrs.begin(), nbrs.end(), u) - nbrs.begin());
  }
  t.bfs_order.push_back(root);
  for (std::size_t i = 0; i < t.bfs_order.size(); ++i) {
    for (VertexId c : t.children[t.bfs_order[i]]) t.bfs_order.push_back(c);
  }
  if (t.bfs_order.size() != n) throw std::invalid_argument("parent array contains a cycle or misses vertices");
  for (auto [a, b] : q.edges()) {
    if (t.parent[a] != b && t.parent[b] != a) t.non_tree_edges.emplace_back(a, b);
  }
  return t;
}

/// |E_CS(u, u')| / (|C(u)| |C(u')|).
inline double edge_density(const CandidateSpace &cs, VertexId u, VertexId u_nbr) {
  return static_cast<double>(cs.candidate_edge_count(u, u_nbr)) /
         (static_cast<double>(cs.candidate_count(u)) * static_cast<double>(cs.candidate_count(u_nbr)));
}

/// Prim weight of a query edge: log |E_CS| - log(|C(u)| |C(u')|).
inline double density_weight(const CandidateSpace &cs, VertexId u, VertexId u_nbr) {
  return std::log(static_cast<double>(cs.candidate_edge_count(u, u_nbr))) -
         std::log(static_cast<double>(cs.candidate_count(u))) - std::log(static_cast<double>(cs.candidate_count(u_nbr)));
}

namespace detail {

/// Exact density comparison by cross-multiplication: a < b.
inline bool density_less(const CandidateSpace &cs, std::pair<VertexId, VertexId> a, std::pair<VertexId, VertexId> b) {
  using Wide = unsigned __int128;
  Wide lhs = Wide(cs.candidate_edge_count(a.first, a.second)) * cs.candidate_count(b.first) * cs.candidate_count(b.second);
  Wide rhs = Wide(cs.candidate_edge_count(b.first, b.second)) * cs.candidate_count(a.first) * cs.candidate_count(a.second);
  return lhs < rhs;
}

}  // namespace detail

/// Minimum-density spanning tree grown by Prim's algorithm from the query
/// vertex with the fewest candidates (ties: smaller id). Among equally dense
/// frontier edges the one reaching the smaller vertex id wins, then the one
/// leaving the smaller id. Returns nullopt when some query edge has no
/// candidate edge (q then has no embedding).
///
/// Densities are compared exactly, so the tree minimizes the product of
/// densities, i.e. the sum of `density_weight`.
inline std::optional<RootedSpanningTree> choose_spanning_tree(const CandidateSpace &cs) {
  const auto &q = cs.query();
  const std::size_t n = q.vertex_count();
  if (n == 0) return std::nullopt;
  for (EdgeId e = 0; e < q.edge_count(); ++e) {
    if (cs.candidate_edge_count(e) == 0) return std::nullopt;
  }
  for (VertexId u = 0; u < n; ++u) {
    if (cs.candidate_count(u) == 0) return std::nullopt;
  }
  VertexId root = 0;
  for (VertexId u = 1; u < n; ++u) {
    if (cs.candidate_count(u) < cs.candidate_count(root)) root = u;
  }
  std::vector<char> in_tree(n, 0);
  std::vector<VertexId> parent(n, kNoVertex);
  in_tree[root] = 1;
  for (std::size_t added = 1; added < n; ++added) {
    std::optional<std::pair<VertexId, VertexId>> best;  // (tree vertex, new vertex)
    for (VertexId a = 0; a < n; ++a) {
      if (!in_tree[a]) continue;
      for (VertexId b : q.neighbors(a)) {
        if (in_tree[b]) continue;
        std::pair<VertexId, VertexId> cand{a, b};
        if (!best) {
          best = cand;
          continue;
        }
        if (detail::density_less(cs, cand, *best)) {
          best = cand;
        } else if (!detail::density_less(cs, *best, cand) &&
                   std::make_pair(cand.second, cand.first) < std::make_pair(best->second, best->first)) {
          best = cand;
        }
      }
    }
    if (!best) throw std::invalid_argument("query graph is disconnected");
    in_tree[best->second] = 1;
    parent[best->second] = best->first;
  }
  return RootedSpanningTree::from_parents(q, root, std::move(parent));
}

/// D(u, v): number of candidate trees of the subtree rooted at u with u
/// mapped to v, indexed by candidate slot. `Count` is double by default;
/// an arbitrary-precision integer type gives exact counts.
template <class Count = double>
struct TreeCountTable {
  std::vector<std::vector<Count>> weights;
  Count total{0};

  const Count &at(const CandidateSpace &cs, VertexId u, VertexId v) const {
    return weights[u][static_cast<std::size_t>(cs.slot(u, v))];
  }
};

/// Bottom-up evaluation of
///   D(u, v) = prod over children c of sum over v_c in C(c | u, v) of D(c, v_c)
/// with D = 1 at leaves; total sums D(root, .) over C(root).
template <class Count = double>
TreeCountTable<Count> count_candidate_trees(const CandidateSpace &cs, const RootedSpanningTree &tree) {
  const auto &q = cs.query();
  TreeCountTable<Count> table;
  table.weights.resize(q.vertex_count());
  for (auto it = tree.bfs_order.rbegin(); it != tree.bfs_order.rend(); ++it) {
    VertexId u = *it;
    auto &row = table.weights[u];
    row.assign(cs.slot_count(u), Count{0});
    for (VertexId v : cs.candidates(u)) {
      Count d{1};
      for (VertexId c : tree.children[u]) {
        Count choices{0};
        const auto &child_row = table.weights[c];
        for (VertexId vc : cs.candidate_neighbors_at(u, v, static_cast<std::size_t>(cs.neighbor_index(u, c)))) {
          choices += child_row[static_cast<std::size_t>(cs.slot(c, vc))];
        }
        d *= choices;
        if (d == Count{0}) break;
      }
      row[static_cast<std::size_t>(cs.slot(u, v))] = d;
    }
  }
  table.total = Count{0};
  for (VertexId v : cs.candidates(tree.root)) table.total += table.at(cs, tree.root, v);
  return table;
}

/// Uniform sampler over candidate trees: the root is drawn proportionally to
/// D(root, .), then each vertex in BFS order from C(u | parent, s(parent))
/// proportionally to D(u, .).
class TreeSampler {
 public:
  TreeSampler(const CandidateSpace &cs, const RootedSpanningTree &tree, const TreeCountTable<double> &table)
      : cs_(&cs), tree_(&tree), table_(&table) {
    double acc = 0;
    for (VertexId v : cs.candidates(tree.root)) {
      acc += table.at(cs, tree.root, v);
      root_prefix_.push_back(acc);
    }
  }

  double total() const noexcept { return table_->total; }

  /// Writes one candidate tree into `mapping` (indexed by query vertex).
  template <class Rng>
  void sample(Rng &rng, std::span<VertexId> mapping) const {
    if (!(table_->total > 0)) throw std::logic_error("no candidate tree to sample");
    const auto &cs = *cs_;
    const auto &tree = *tree_;
    auto roots = cs.candidates(tree.root);
    mapping[tree.root] = roots[draw(rng, root_prefix_)];
    for (std::size_t k = 1; k < tree.bfs_order.size(); ++k) {
      VertexId u = tree.bfs_order[k];
      VertexId p = tree.parent[u];
      auto options = cs.candidate_neighbors_at(p, mapping[p], tree.parent_slot[u]);
      scratch_.clear();
      double acc = 0;
      for (VertexId w : options) {
        acc += table_->at(cs, u, w);
        scratch_.push_back(acc);
      }
      mapping[u] = options[draw(rng, scratch_)];
    }
  }

 private:
  template <class Rng>
  static std::size_t draw(Rng &rng, const std::vector<double> &prefix) {
    std::uniform_real_distribution<double> dist(0.0, prefix.back());
    double r = dist(rng);
    auto it = std::upper_bound(prefix.begin(), prefix.end(), r);
    if (it == prefix.end()) --it;
    while (it != prefix.begin() && *it == *(it - 1)) --it;  // never land on a zero-weight entry
    return static_cast<std::size_t>(it - prefix.begin());
  }

  const CandidateSpace *cs_;
  const RootedSpanningTree *tree_;
  const TreeCountTable<double> *table_;
  std::vector<double> root_prefix_;
  mutable std::vector<double> scratch_;
};

/// True iff the candidate tree is injective and every non-tree query edge is
/// mapped onto a candidate edge.
inline bool check_embedding(const CandidateSpace &cs, const RootedSpanningTree &tree,
                            std::span<const VertexId> mapping) {
  std::vector<VertexId> sorted(mapping.begin(), mapping.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (auto [a, b] : tree.non_tree_edges) {
    if (!cs.has_candidate_edge(a, mapping[a], b, mapping[b])) return false;
  }
  return true;
}

struct TreeSamplingResult {
  double estimate = 0;
  double total = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  bool early_fail = false;
  StopReason reason = StopReason::trial_cap;
  std::optional<RootedSpanningTree> tree;
};

/// Adaptive candidate-tree sampling: draws uniform candidate trees until the
/// stopping rule fires, and scales the success ratio by the number of
/// candidate trees. `check(tree, mapping)` decides success for a sample.
template <class Rng, class Check>
TreeSamplingResult candidate_tree_sampling(const CandidateSpace &cs, const StoppingConfig &stopping, Rng &rng,
                                           Check &&check) {
  TreeSamplingResult result;
  result.tree = choose_spanning_tree(cs);
  if (!result.tree) return result;
  auto table = count_candidate_trees<double>(cs, *result.tree);
  result.total = table.total;
  if (!(table.total > 0)) return result;
  TreeSampler sampler(cs, *result.tree, table);
  std::vector<VertexId> mapping(cs.query().vertex_count());
  auto run = run_adaptive_sampling(
      [&] {
        sampler.sample(rng, mapping);
        return static_cast<bool>(check(*result.tree, std::span<const VertexId>(mapping)));
      },
      stopping);
  result.trials = run.trials;
  result.successes = run.successes;
  result.reason = run.reason;
  result.early_fail = run.reason == StopReason::early_fail;
  result.estimate = run.success_ratio() * table.total;
  return result;
}

template <class Rng>
TreeSamplingResult candidate_tree_sampling(const CandidateSpace &cs, const StoppingConfig &stopping, Rng &rng) {
  return candidate_tree_sampling(cs, stopping, rng, [&](const RootedSpanningTree &tree, std::span<const VertexId> m) {
    return check_embedding(cs, tree, m);
  });
}

}  // namespace subcard
