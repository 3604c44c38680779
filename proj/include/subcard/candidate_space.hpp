//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "subcard/graph.hpp"

namespace subcard {

/// Candidate sets C(u) and candidate edges of a query graph q in a data
/// graph G.
///
/// Candidate edges are stored twice, once per endpoint: for a query vertex u,
/// its i-th query neighbor u' = N_q(u)[i] and a candidate v of u, the sorted
/// list C(u' | u, v) holds the data vertices v' such that (v, v') is a
/// candidate edge for (u, u'). Both directions are always kept in sync.
///
/// Each candidate v of u owns a stable slot index, so per-candidate arrays
/// (e.g. tree counts) can be indexed by `slot(u, v)` without rebuilding
/// after removals.
///
/// Removing a candidate drops all its candidate edges. Whenever a removal
/// empties a list C(u' | u, v), v is removed from C(u) as well; this cascade
/// only discards vertices that no embedding can use.
class CandidateSpace {
 public:
  static constexpr std::int32_t kNoSlot = -1;

  CandidateSpace(const LabeledGraph &query, const LabeledGraph &data);

  const LabeledGraph &query() const noexcept { return *query_; }
  const LabeledGraph &data() const noexcept { return *data_; }

  std::span<const VertexId> candidates(VertexId u) const { return candidates_[u]; }
  std::size_t candidate_count(VertexId u) const { return candidates_[u].size(); }

  bool contains(VertexId u, VertexId v) const { return v < data_->vertex_count() && slot_of_[u][v] != kNoSlot; }

  /// Stable slot of candidate v of u, or kNoSlot.
  std::int32_t slot(VertexId u, VertexId v) const { return slot_of_[u][v]; }
  /// Number of slots ever handed out for u (live or dead).
  std::size_t slot_count(VertexId u) const { return slot_vertex_[u].size(); }

  /// True if some query vertex has no candidates left.
  bool has_empty_candidate_set() const {
    return std::any_of(candidates_.begin(), candidates_.end(), [](const auto &c) { return c.empty(); });
  }

  /// Position of u' among the sorted query neighbors of u, or -1.
  int neighbor_index(VertexId u, VertexId u_nbr) const {
    auto nbrs = query_->neighbors(u);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), u_nbr);
    if (it == nbrs.end() || *it != u_nbr) return -1;
    return static_cast<int>(it - nbrs.begin());
  }

  /// C(N_q(u)[i] | u, v).
  std::span<const VertexId> candidate_neighbors_at(VertexId u, VertexId v, std::size_t i) const {
    auto s = slot_of_[u][v];
    if (s == kNoSlot) return {};
    return lists_[u][static_cast<std::size_t>(s) * query_->degree(u) + i];
  }

  /// C(u_nbr | u, v); empty if u_nbr is not a query neighbor of u.
  std::span<const VertexId> candidate_neighbors(VertexId u, VertexId v, VertexId u_nbr) const {
    int i = neighbor_index(u, u_nbr);
    if (i < 0) return {};
    return candidate_neighbors_at(u, v, static_cast<std::size_t>(i));
  }

  bool has_candidate_edge(VertexId u, VertexId v, VertexId u_nbr, VertexId v_nbr) const {
    auto list = candidate_neighbors(u, v, u_nbr);
    return std::binary_search(list.begin(), list.end(), v_nbr);
  }

  /// |E_CS(u, u')| for the query edge with the given id.
  std::size_t candidate_edge_count(EdgeId query_edge) const { return edge_counts_[query_edge]; }
  std::size_t candidate_edge_count(VertexId u, VertexId u_nbr) const {
    auto e = query_->edge_id(u, u_nbr);
    return e ? edge_counts_[*e] : 0;
  }
  std::size_t total_candidate_edges() const {
    std::size_t t = 0;
    for (auto c : edge_counts_) t += c;
    return t;
  }

  /// Adds v to C(u). Throws graph_error if the labels differ.
  void add_candidate(VertexId u, VertexId v);

  /// Adds (v, v') as a candidate edge for query edge (u, u'). Both endpoints
  /// must already be candidates and (v, v') must be a data edge.
  void add_candidate_edge(VertexId u, VertexId v, VertexId u_nbr, VertexId v_nbr);

  /// Removes v from C(u) together with its candidate edges (cascading).
  /// Returns false if v was not a candidate.
  bool remove_candidate(VertexId u, VertexId v);

  /// Removes candidate edge (v, v') for (u, N_q(u)[i]) in both directions
  /// (cascading). Returns false if the edge was not present.
  bool remove_candidate_edge(VertexId u, VertexId v, std::size_t i, VertexId v_nbr);

  /// Removes every candidate with an empty candidate-neighbor list.
  void remove_unsupported();

  /// Text dump: one `C(u): v...` line per query vertex, then one
  /// `C(u'|u,v): v'...` line per query vertex u, candidate v and query
  /// neighbor u'.
  void dump(std::ostream &out) const;

 private:
  std::vector<VertexId> &list_at(VertexId u, std::int32_t s, std::size_t i) {
    return lists_[u][static_cast<std::size_t>(s) * query_->degree(u) + i];
  }
  void drain(std::vector<std::pair<VertexId, VertexId>> &pending);
  void erase_edge_half(VertexId u, VertexId v, std::size_t i, VertexId v_nbr,
                       std::vector<std::pair<VertexId, VertexId>> &pending);

  const LabeledGraph *query_;
  const LabeledGraph *data_;
  std::vector<std::vector<VertexId>> candidates_;
  std::vector<std::vector<std::int32_t>> slot_of_;
  std::vector<std::vector<VertexId>> slot_vertex_;
  std::vector<std::vector<std::vector<VertexId>>> lists_;
  // reverse_[u][i]: position of u among the query neighbors of N_q(u)[i].
  std::vector<std::vector<std::size_t>> reverse_;
  std::vector<std::size_t> edge_counts_;
};

inline CandidateSpace::CandidateSpace(const LabeledGraph &query, const LabeledGraph &data)
    : query_(&query), data_(&data) {
  const std::size_t nq = query.vertex_count();
  candidates_.resize(nq);
  slot_of_.assign(nq, std::vector<std::int32_t>(data.vertex_count(), kNoSlot));
  slot_vertex_.resize(nq);
  lists_.resize(nq);
  reverse_.resize(nq);
  for (VertexId u = 0; u < nq; ++u) {
    for (VertexId w : query.neighbors(u)) reverse_[u].push_back(static_cast<std::size_t>(neighbor_index(w, u)));
  }
  edge_counts_.assign(query.edge_count(), 0);
}

inline void CandidateSpace::add_candidate(VertexId u, VertexId v) {
  if (u >= query_->vertex_count() || v >= data_->vertex_count()) throw graph_error("candidate out of range");
  if (query_->label(u) != data_->label(v)) {
    throw graph_error("candidate " + std::to_string(v) + " has a different label than query vertex " + std::to_string(u));
  }
  if (slot_of_[u][v] != kNoSlot) return;
  slot_of_[u][v] = static_cast<std::int32_t>(slot_vertex_[u].size());
  slot_vertex_[u].push_back(v);
  lists_[u].resize(slot_vertex_[u].size() * query_->degree(u));
  auto &c = candidates_[u];
  c.insert(std::lower_bound(c.begin(), c.end(), v), v);
}

inline void CandidateSpace::add_candidate_edge(VertexId u, VertexId v, VertexId u_nbr, VertexId v_nbr) {
  int i = neighbor_index(u, u_nbr);
  if (i < 0) throw graph_error("not a query edge");
  if (!contains(u, v) || !contains(u_nbr, v_nbr)) throw graph_error("candidate edge endpoint is not a candidate");
  if (!data_->has_edge(v, v_nbr)) throw graph_error("candidate edge is not a data edge");
  auto &fwd = list_at(u, slot_of_[u][v], static_cast<std::size_t>(i));
  auto it = std::lower_bound(fwd.begin(), fwd.end(), v_nbr);
  if (it != fwd.end() && *it == v_nbr) return;
  fwd.insert(it, v_nbr);
  auto &bwd = list_at(u_nbr, slot_of_[u_nbr][v_nbr], reverse_[u][static_cast<std::size_t>(i)]);
  bwd.insert(std::lower_bound(bwd.begin(), bwd.end(), v), v);
  ++edge_counts_[*query_->edge_id(u, u_nbr)];
}

inline void CandidateSpace::erase_edge_half(VertexId u, VertexId v, std::size_t i, VertexId v_nbr,
                                            std::vector<std::pair<VertexId, VertexId>> &pending) {
  auto &list = list_at(u, slot_of_[u][v], i);
  auto it = std::lower_bound(list.begin(), list.end(), v_nbr);
  if (it == list.end() || *it != v_nbr) return;
  list.erase(it);
  if (list.empty()) pending.emplace_back(u, v);
}

inline void CandidateSpace::drain(std::vector<std::pair<VertexId, VertexId>> &pending) {
  while (!pending.empty()) {
    auto [u, v] = pending.back();
    pending.pop_back();
    auto s = slot_of_[u][v];
    if (s == kNoSlot) continue;
    auto nbrs = query_->neighbors(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      VertexId u2 = nbrs[i];
      auto &list = list_at(u, s, i);
      for (VertexId v2 : list) {
        erase_edge_half(u2, v2, reverse_[u][i], v, pending);
      }
      edge_counts_[query_->incident_edges(u)[i]] -= list.size();
      list.clear();
      list.shrink_to_fit();
    }
    slot_of_[u][v] = kNoSlot;
    auto &c = candidates_[u];
    c.erase(std::lower_bound(c.begin(), c.end(), v));
  }
}

inline bool CandidateSpace::remove_candidate(VertexId u, VertexId v) {
  if (!contains(u, v)) return false;
  std::vector<std::pair<VertexId, VertexId>> pending{{u, v}};
  drain(pending);
  return true;
}

inline bool CandidateSpace::remove_candidate_edge(VertexId u, VertexId v, std::size_t i, VertexId v_nbr) {
  if (!contains(u, v)) return false;
  auto &fwd = list_at(u, slot_of_[u][v], i);
  auto it = std::lower_bound(fwd.begin(), fwd.end(), v_nbr);
  if (it == fwd.end() || *it != v_nbr) return false;
  std::vector<std::pair<VertexId, VertexId>> pending;
  fwd.erase(it);
  if (fwd.empty()) pending.emplace_back(u, v);
  VertexId u2 = query_->neighbors(u)[i];
  erase_edge_half(u2, v_nbr, reverse_[u][i], v, pending);
  --edge_counts_[query_->incident_edges(u)[i]];
  drain(pending);
  return true;
}

inline void CandidateSpace::remove_unsupported() {
  std::vector<std::pair<VertexId, VertexId>> pending;
  for (VertexId u = 0; u < query_->vertex_count(); ++u) {
    const std::size_t deg = query_->degree(u);
    for (VertexId v : candidates_[u]) {
      for (std::size_t i = 0; i < deg; ++i) {
        if (candidate_neighbors_at(u, v, i).empty()) {
          pending.emplace_back(u, v);
          break;
        }
      }
    }
  }
  drain(pending);
}

inline void CandidateSpace::dump(std::ostream &out) const {
  const std::size_t nq = query_->vertex_count();
  for (VertexId u = 0; u < nq; ++u) {
    out << "C(" << u << "):";
    for (VertexId v : candidates_[u]) out << ' ' << v;
    out << '\n';
  }
  for (VertexId u = 0; u < nq; ++u) {
    auto nbrs = query_->neighbors(u);
    for (VertexId v : candidates_[u]) {
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        out << "C(" << nbrs[i] << '|' << u << ',' << v << "):";
        for (VertexId w : candidate_neighbors_at(u, v, i)) out << ' ' << w;
        out << '\n';
      }
    }
  }
}

/// Initial candidate space: v is a candidate of u iff both carry the same
/// label and d_G(v, l) >= d_q(u, l) for every label l; candidate edges are
/// all data edges between candidate sets of adjacent query vertices.
///
/// Callers should test `has_empty_candidate_set()` afterwards; an empty set
/// means q has no embedding in G.
inline CandidateSpace build_initial_cs(const LabeledGraph &q, const LabeledGraph &g) {
  CandidateSpace cs(q, g);
  for (VertexId u = 0; u < q.vertex_count(); ++u) {
    auto need = q.label_degrees(u);
    for (VertexId v : g.vertices_with_label(q.label(u))) {
      if (g.degree(v) < q.degree(u)) continue;
      bool ok = std::all_of(need.begin(), need.end(),
                            [&](const LabelCount &lc) { return g.label_degree(v, lc.label) >= lc.count; });
      if (ok) cs.add_candidate(u, v);
    }
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

}  // namespace subcard
