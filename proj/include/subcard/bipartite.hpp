//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

#include "subcard/types.hpp"

namespace subcard {

/// Local bipartite graph B(u, v): left vertices are the query neighbors of u,
/// right vertices data neighbors of v, and left i is adjacent to right j when
/// right[j] is a candidate neighbor of (u, v) for left[i].
struct LocalBipartiteGraph {
  std::vector<VertexId> left;
  std::vector<VertexId> right;
  /// adjacency[i]: sorted indices into `right`.
  std::vector<std::vector<std::uint32_t>> adjacency;
};

struct BipartiteMatching {
  std::size_t size = 0;
  /// left_match[i]: matched right index of left i, or -1.
  std::vector<std::int32_t> left_match;
  std::vector<std::int32_t> right_match;
};

namespace detail {

inline bool try_augment(const LocalBipartiteGraph &b, std::size_t l, std::vector<char> &visited,
                        BipartiteMatching &m) {
  // Iterative DFS over alternating paths starting at free left vertex l.
  struct Frame {
    std::size_t left;
    std::size_t next;
  };
  std::vector<Frame> stack{{l, 0}};
  std::vector<std::uint32_t> via;  // right vertex used to enter stack[k + 1]
  while (!stack.empty()) {
    auto &f = stack.back();
    const auto &adj = b.adjacency[f.left];
    if (f.next == adj.size()) {
      stack.pop_back();
      if (!via.empty()) via.pop_back();
      continue;
    }
    std::uint32_t r = adj[f.next++];
    if (visited[r]) continue;
    visited[r] = 1;
    if (m.right_match[r] < 0) {
      // Flip the path.
      via.push_back(r);
      for (std::size_t k = 0; k < stack.size(); ++k) {
        std::size_t left = stack[k].left;
        std::uint32_t right = via[k];
        m.left_match[left] = static_cast<std::int32_t>(right);
        m.right_match[right] = static_cast<std::int32_t>(left);
      }
      return true;
    }
    via.push_back(r);
    stack.push_back({static_cast<std::size_t>(m.right_match[r]), 0});
  }
  return false;
}

}  // namespace detail

/// Maximum matching by repeated augmenting-path search (Ford-Fulkerson on
/// unit capacities). Deterministic for a fixed adjacency order.
inline BipartiteMatching max_bipartite_matching(const LocalBipartiteGraph &b) {
  BipartiteMatching m;
  m.left_match.assign(b.left.size(), -1);
  m.right_match.assign(b.right.size(), -1);
  std::vector<char> visited(b.right.size());
  for (std::size_t l = 0; l < b.left.size(); ++l) {
    std::fill(visited.begin(), visited.end(), 0);
    if (detail::try_augment(b, l, visited, m)) ++m.size;
  }
  return m;
}

namespace detail {

inline bool has_augmenting_path(const LocalBipartiteGraph &b, const BipartiteMatching &m) {
  BipartiteMatching copy = m;
  std::vector<char> visited(b.right.size(), 0);
  for (std::size_t l = 0; l < b.left.size(); ++l) {
    if (copy.left_match[l] >= 0) continue;
    if (try_augment(b, l, visited, copy)) return true;
  }
  return false;
}

}  // namespace detail

/// Edges of B that belong to at least one maximum matching, as sorted
/// (left index, right index) pairs. `m` must be a maximum matching of `b`.
///
/// Orient matched edges right->left and unmatched edges left->right. An edge
/// is maximally matchable iff it is matched, both endpoints share a strongly
/// connected component (alternating cycle), its left end is reachable from a
/// free left vertex, or its right end reaches a free right vertex (even
/// alternating paths).
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> maximally_matchable_edges(
    const LocalBipartiteGraph &b, const BipartiteMatching &m) {
  assert(!detail::has_augmenting_path(b, m) && "matching must be maximum");
  const std::size_t nl = b.left.size();
  const std::size_t nr = b.right.size();
  const std::size_t n = nl + nr;
  // Node ids: left i -> i, right j -> nl + j.
  std::vector<std::vector<std::uint32_t>> out(n), in(n);
  for (std::size_t i = 0; i < nl; ++i) {
    for (std::uint32_t j : b.adjacency[i]) {
      if (m.left_match[i] == static_cast<std::int32_t>(j)) {
        out[nl + j].push_back(static_cast<std::uint32_t>(i));
        in[i].push_back(static_cast<std::uint32_t>(nl + j));
      } else {
        out[i].push_back(static_cast<std::uint32_t>(nl + j));
        in[nl + j].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  auto reach = [&](const std::vector<std::vector<std::uint32_t>> &adj, std::vector<std::uint32_t> seeds) {
    std::vector<char> seen(n, 0);
    for (auto s : seeds) seen[s] = 1;
    while (!seeds.empty()) {
      auto x = seeds.back();
      seeds.pop_back();
      for (auto y : adj[x]) {
        if (!seen[y]) {
          seen[y] = 1;
          seeds.push_back(y);
        }
      }
    }
    return seen;
  };
  std::vector<std::uint32_t> free_left, free_right;
  for (std::size_t i = 0; i < nl; ++i) {
    if (m.left_match[i] < 0) free_left.push_back(static_cast<std::uint32_t>(i));
  }
  for (std::size_t j = 0; j < nr; ++j) {
    if (m.right_match[j] < 0) free_right.push_back(static_cast<std::uint32_t>(nl + j));
  }
  auto from_free_left = reach(out, free_left);
  auto to_free_right = reach(in, free_right);

  // Tarjan's SCC, iterative.
  std::vector<std::int32_t> comp(n, -1), index(n, -1), low(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<char> on_stack(n, 0);
  std::int32_t counter = 0, ncomp = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (index[s] >= 0) continue;
    call.emplace_back(s, 0);
    while (!call.empty()) {
      auto &[x, k] = call.back();
      if (k == 0) {
        index[x] = low[x] = counter++;
        stack.push_back(x);
        on_stack[x] = 1;
      }
      if (k < out[x].size()) {
        auto y = out[x][k++];
        if (index[y] < 0) {
          call.emplace_back(y, 0);
        } else if (on_stack[y]) {
          low[x] = std::min(low[x], index[y]);
        }
        continue;
      }
      if (low[x] == index[x]) {
        std::uint32_t y;
        do {
          y = stack.back();
          stack.pop_back();
          on_stack[y] = 0;
          comp[y] = ncomp;
        } while (y != x);
        ++ncomp;
      }
      auto done = x;
      call.pop_back();
      if (!call.empty()) {
        auto parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> result;
  for (std::size_t i = 0; i < nl; ++i) {
    for (std::uint32_t j : b.adjacency[i]) {
      const bool keep = m.left_match[i] == static_cast<std::int32_t>(j) || comp[i] == comp[nl + j] ||
                        from_free_left[i] || to_free_right[nl + j];
      if (keep) result.emplace_back(static_cast<std::uint32_t>(i), j);
    }
  }
  return result;
}

}  // namespace subcard
