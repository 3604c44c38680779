//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "subcard/candidate_space.hpp"
#include "subcard/graph_sampler.hpp"
#include "subcard/tree_sampler.hpp"

namespace subcard {

using BigCount = boost::multiprecision::cpp_int;

/// Label-only candidate space: C(u) = vertices of the same label, and every
/// data edge between candidates of adjacent query vertices is a candidate
/// edge. Complete by construction; used when no refined space is supplied.
inline CandidateSpace build_label_cs(const LabeledGraph &q, const LabeledGraph &g) {
  CandidateSpace cs(q, g);
  for (VertexId u = 0; u < q.vertex_count(); ++u) {
    for (VertexId v : g.vertices_with_label(q.label(u))) cs.add_candidate(u, v);
  }
  for (auto [u, u2] : q.edges()) {
    for (VertexId v : cs.candidates(u)) {
      for (VertexId v2 : g.neighbors(v)) {
        if (cs.contains(u2, v2)) cs.add_candidate_edge(u, v, u2, v2);
      }
    }
  }
  return cs;
}

struct ExactOptions {
  std::optional<std::uint64_t> limit;
  std::optional<std::chrono::milliseconds> timeout;
  /// Embeddings kept in the result; counting continues past the cap.
  std::size_t max_embeddings = 0;
};

struct OracleResult {
  BigCount count = 0;
  std::vector<std::vector<VertexId>> embeddings;
  bool embeddings_capped = false;
  bool partial = false;
  bool limit_reached = false;
  std::chrono::nanoseconds elapsed{0};
};

/// Backtracking over `cs` in matching order. Calls f(mapping) per embedding;
/// f returns false to stop. `should_stop` is polled periodically.
template <class F, class Stop>
void for_each_embedding(const CandidateSpace &cs, F &&f, Stop &&should_stop) {
  const auto &q = cs.query();
  if (q.vertex_count() == 0 || cs.has_empty_candidate_set()) return;
  auto order = matching_order(cs);
  PartialEmbedding m(q.vertex_count(), cs.data().vertex_count());
  std::vector<std::vector<VertexId>> cands(order.size());
  std::vector<std::size_t> next(order.size(), 0);
  std::size_t depth = 0;
  std::uint64_t steps = 0;
  extendable_candidates(cs, m, order[0], cands[0]);
  while (true) {
    if ((++steps & 0xfff) == 0 && should_stop()) return;
    if (next[depth] == cands[depth].size()) {
      if (depth == 0) return;
      --depth;
      m.pop();
      continue;
    }
    m.push(order[depth], cands[depth][next[depth]++]);
    if (m.complete()) {
      if (!f(m.mapping())) return;
      m.pop();
      continue;
    }
    ++depth;
    next[depth] = 0;
    extendable_candidates(cs, m, order[depth], cands[depth]);
  }
}

/// Exact embedding count of q in g. Without `cs` the label-only space is
/// used. The timeout sets `partial`; the limit stops once `count` reaches it.
inline OracleResult exact_count(const LabeledGraph &q, const LabeledGraph &g, const CandidateSpace *cs = nullptr,
                                const ExactOptions &options = {}) {
  if (q.vertex_count() > 0 && !q.is_connected()) throw graph_error("query graph is disconnected");
  const auto start = std::chrono::steady_clock::now();
  std::optional<CandidateSpace> own;
  if (!cs) {
    own.emplace(build_label_cs(q, g));
    cs = &*own;
  }
  OracleResult result;
  std::uint64_t count = 0;
  for_each_embedding(
      *cs,
      [&](std::span<const VertexId> mapping) {
        ++count;
        if (result.embeddings.size() < options.max_embeddings) {
          result.embeddings.emplace_back(mapping.begin(), mapping.end());
        } else {
          result.embeddings_capped = true;
        }
        if (options.limit && count >= *options.limit) {
          result.limit_reached = true;
          return false;
        }
        return true;
      },
      [&] {
        if (options.timeout && std::chrono::steady_clock::now() - start > *options.timeout) {
          result.partial = true;
          return true;
        }
        return false;
      });
  result.count = count;
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

inline constexpr std::uint64_t kTreeEnumerationGuard = 1'000'000;

/// Every candidate tree of T as a mapping indexed by query vertex. Throws
/// std::length_error when more than `guard` trees exist.
inline std::vector<std::vector<VertexId>> enumerate_candidate_trees(const CandidateSpace &cs,
                                                                    const RootedSpanningTree &tree,
                                                                    std::uint64_t guard = kTreeEnumerationGuard) {
  auto exact = count_candidate_trees<BigCount>(cs, tree);
  if (exact.total > guard) throw std::length_error("too many candidate trees to enumerate");
  std::vector<std::vector<VertexId>> out;
  const std::size_t n = tree.bfs_order.size();
  if (n == 0) return out;
  std::vector<VertexId> mapping(cs.query().vertex_count(), kNoVertex);
  auto options = [&](std::size_t k) -> std::span<const VertexId> {
    VertexId u = tree.bfs_order[k];
    if (k == 0) return cs.candidates(u);
    VertexId p = tree.parent[u];
    return cs.candidate_neighbors_at(p, mapping[p], tree.parent_slot[u]);
  };
  std::vector<std::size_t> next(n, 0);
  std::size_t k = 0;
  while (true) {
    auto opts = options(k);
    if (next[k] == opts.size()) {
      mapping[tree.bfs_order[k]] = kNoVertex;
      if (k == 0) break;
      --k;
      continue;
    }
    mapping[tree.bfs_order[k]] = opts[next[k]++];
    if (k + 1 == n) {
      out.push_back(mapping);
      continue;
    }
    ++k;
    next[k] = 0;
  }
  return out;
}

}  // namespace subcard
