//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "subcard/bipartite.hpp"
#include "subcard/candidate_space.hpp"
#include "subcard/cycle_index.hpp"

namespace subcard {

enum class FilterMode {
  /// Triangle, four-cycle and edge-bipartite safety.
  full,
  /// Per-label neighbor counting only; kept as an ablation baseline.
  neighbor_safety,
};

struct RefineConfig {
  double phi = 2.0 / 3.0;
  double tau = 0.9;
  double budget_multiplier = 5.0;
  bool triangle_safety = true;
  bool four_cycle_safety = true;
  bool bipartite_safety = true;
  FilterMode mode = FilterMode::full;
};

/// Promising-first bookkeeping: per-query-vertex penalties plus the degree
/// budget consumed so far.
struct RefinementState {
  std::vector<double> penalty;
  std::size_t degree_budget_used = 0;
  std::size_t steps = 0;
  double tau = 0.9;
  double budget_limit = 0;

  RefinementState(const LabeledGraph &q, const RefineConfig &config)
      : penalty(q.vertex_count(), config.phi),
        tau(config.tau),
        budget_limit(config.budget_multiplier * static_cast<double>(q.edge_count())) {}

  double min_penalty() const {
    return penalty.empty() ? 1.0 : *std::min_element(penalty.begin(), penalty.end());
  }
};

/// Query vertex with the lowest penalty; ties go to the smallest id.
inline VertexId choose_refinement_vertex(const RefinementState &state) {
  return static_cast<VertexId>(std::min_element(state.penalty.begin(), state.penalty.end()) - state.penalty.begin());
}

/// Penalty recurrence after refining `refined`, whose candidate set went from
/// `before` to `after` elements.
inline void update_penalties(RefinementState &state, const LabeledGraph &q, VertexId refined, std::size_t before,
                             std::size_t after) {
  const double ratio = before == 0 ? 0.0 : static_cast<double>(after) / static_cast<double>(before);
  for (VertexId w : q.neighbors(refined)) state.penalty[w] *= ratio;
  state.penalty[refined] = 1.0;
}

/// Triangle safety of data edge (v, v') for query edge (u, u'). Evaluates to
/// true when either index has triangles disabled.
inline bool triangle_safe(const CandidateSpace &cs, const CycleIndex &cycles_q, const CycleIndex &cycles_g,
                          VertexId u, VertexId u_nbr, VertexId v, VertexId v_nbr) {
  if (!cycles_q.triangles_enabled() || !cycles_g.triangles_enabled()) return true;
  const auto &q = cs.query();
  const auto &g = cs.data();
  auto qe = q.edge_id(u, u_nbr);
  auto ge = g.edge_id(v, v_nbr);
  if (!qe || !ge) return false;
  auto query_apexes = cycles_q.triangle_apexes(*qe);
  auto data_apexes = cycles_g.triangle_apexes(*ge);
  if (query_apexes.size() > data_apexes.size()) return false;
  for (VertexId apex : query_apexes) {
    auto from_u = cs.candidate_neighbors(u, v, apex);
    auto from_nbr = cs.candidate_neighbors(u_nbr, v_nbr, apex);
    bool found = std::any_of(data_apexes.begin(), data_apexes.end(), [&](VertexId w) {
      return std::binary_search(from_u.begin(), from_u.end(), w) &&
             std::binary_search(from_nbr.begin(), from_nbr.end(), w);
    });
    if (!found) return false;
  }
  return true;
}

/// Four-cycle safety of data edge (v, v') for query edge (u, u'). For every
/// query cycle u-u'-x-y-u there must be a data cycle v-v'-x'-y'-v with
/// x' in C(x | u', v'), y' in C(y | u, v) and (x', y') a candidate edge for
/// (x, y). Evaluates to true when either index has 4-cycles disabled.
inline bool four_cycle_safe(const CandidateSpace &cs, const CycleIndex &cycles_q, const CycleIndex &cycles_g,
                            VertexId u, VertexId u_nbr, VertexId v, VertexId v_nbr) {
  if (!cycles_q.four_cycles_enabled() || !cycles_g.four_cycles_enabled()) return true;
  const auto &q = cs.query();
  const auto &g = cs.data();
  std::vector<std::pair<VertexId, VertexId>> query_cycles, data_cycles;
  cycles_q.for_each_four_cycle(q, u, u_nbr, [&](VertexId x, VertexId y) { query_cycles.emplace_back(x, y); });
  if (query_cycles.empty()) return true;
  cycles_g.for_each_four_cycle(g, v, v_nbr, [&](VertexId x, VertexId y) { data_cycles.emplace_back(x, y); });
  if (query_cycles.size() > data_cycles.size()) return false;
  for (auto [x, y] : query_cycles) {
    auto x_side = cs.candidate_neighbors(u_nbr, v_nbr, x);
    auto y_side = cs.candidate_neighbors(u, v, y);
    bool found = std::any_of(data_cycles.begin(), data_cycles.end(), [&](const auto &dc) {
      return std::binary_search(x_side.begin(), x_side.end(), dc.first) &&
             std::binary_search(y_side.begin(), y_side.end(), dc.second) &&
             cs.has_candidate_edge(x, dc.first, y, dc.second);
    });
    if (!found) return false;
  }
  return true;
}

/// B(u, v) over the current candidate neighbors of (u, v).
inline LocalBipartiteGraph build_local_bipartite(const CandidateSpace &cs, VertexId u, VertexId v) {
  LocalBipartiteGraph b;
  auto nbrs = cs.query().neighbors(u);
  b.left.assign(nbrs.begin(), nbrs.end());
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    auto list = cs.candidate_neighbors_at(u, v, i);
    b.right.insert(b.right.end(), list.begin(), list.end());
  }
  std::sort(b.right.begin(), b.right.end());
  b.right.erase(std::unique(b.right.begin(), b.right.end()), b.right.end());
  b.adjacency.resize(nbrs.size());
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    for (VertexId w : cs.candidate_neighbors_at(u, v, i)) {
      auto j = std::lower_bound(b.right.begin(), b.right.end(), w) - b.right.begin();
      b.adjacency[i].push_back(static_cast<std::uint32_t>(j));
    }
  }
  return b;
}

/// Vertex-level bipartite check: B(u, v) must match every query neighbor.
inline bool bipartite_vertex_safe(const CandidateSpace &cs, VertexId u, VertexId v) {
  auto b = build_local_bipartite(cs, u, v);
  return max_bipartite_matching(b).size == b.left.size();
}

struct EdgeBipartiteOutcome {
  bool vertex_ok = true;
  /// (u', v') pairs removed from C(u' | u, v).
  std::vector<std::pair<VertexId, VertexId>> removed;
};

/// Edge bipartite safety for candidate v of u. If B(u, v) has no matching
/// covering all query neighbors, v is removed from C(u). Otherwise every
/// candidate edge that lies in no maximum matching of B(u, v) is removed.
inline EdgeBipartiteOutcome edge_bipartite_refine(CandidateSpace &cs, VertexId u, VertexId v) {
  EdgeBipartiteOutcome outcome;
  auto b = build_local_bipartite(cs, u, v);
  auto m = max_bipartite_matching(b);
  if (m.size < b.left.size()) {
    outcome.vertex_ok = false;
    cs.remove_candidate(u, v);
    return outcome;
  }
  auto keep = maximally_matchable_edges(b, m);
  std::size_t k = 0;
  for (std::uint32_t i = 0; i < b.left.size(); ++i) {
    for (std::uint32_t j : b.adjacency[i]) {
      while (k < keep.size() && keep[k] < std::make_pair(i, j)) ++k;
      if (k < keep.size() && keep[k] == std::make_pair(i, j)) continue;
      outcome.removed.emplace_back(b.left[i], b.right[j]);
    }
  }
  for (auto [u2, v2] : outcome.removed) {
    if (!cs.contains(u, v)) break;
    cs.remove_candidate_edge(u, v, static_cast<std::size_t>(cs.neighbor_index(u, u2)), v2);
  }
  return outcome;
}

/// Neighbor safety: for each label l, the candidate neighbors of (u, v) over
/// query neighbors labeled l must cover at least d_q(u, l) distinct vertices.
inline bool neighbor_safe(const CandidateSpace &cs, VertexId u, VertexId v) {
  const auto &q = cs.query();
  auto nbrs = q.neighbors(u);
  for (const auto &lc : q.label_degrees(u)) {
    std::vector<VertexId> pool;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (q.label(nbrs[i]) != lc.label) continue;
      auto list = cs.candidate_neighbors_at(u, v, i);
      pool.insert(pool.end(), list.begin(), list.end());
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (pool.size() < lc.count) return false;
  }
  return true;
}

/// One refinement pass over C(u).
inline void refine_vertex(CandidateSpace &cs, const CycleIndex &cycles_q, const CycleIndex &cycles_g, VertexId u,
                          const RefineConfig &config) {
  const auto &q = cs.query();
  const std::size_t deg = q.degree(u);
  std::vector<VertexId> snapshot(cs.candidates(u).begin(), cs.candidates(u).end());
  std::vector<VertexId> list;
  for (VertexId v : snapshot) {
    if (!cs.contains(u, v)) continue;
    if (config.mode == FilterMode::neighbor_safety) {
      if (!neighbor_safe(cs, u, v)) cs.remove_candidate(u, v);
      continue;
    }
    if (config.bipartite_safety && !bipartite_vertex_safe(cs, u, v)) {
      cs.remove_candidate(u, v);
      continue;
    }
    if (config.triangle_safety || config.four_cycle_safety) {
      for (std::size_t i = 0; i < deg && cs.contains(u, v); ++i) {
        VertexId u2 = q.neighbors(u)[i];
        auto cur = cs.candidate_neighbors_at(u, v, i);
        list.assign(cur.begin(), cur.end());
        for (VertexId v2 : list) {
          if (!cs.contains(u, v)) break;
          if (!cs.contains(u2, v2)) continue;
          bool safe = (!config.triangle_safety || triangle_safe(cs, cycles_q, cycles_g, u, u2, v, v2)) &&
                      (!config.four_cycle_safety || four_cycle_safe(cs, cycles_q, cycles_g, u, u2, v, v2));
          if (!safe) cs.remove_candidate_edge(u, v, i, v2);
        }
      }
    }
    if (!cs.contains(u, v)) continue;
    if (config.bipartite_safety) edge_bipartite_refine(cs, u, v);
  }
}

struct RefineReport {
  std::size_t steps = 0;
  std::size_t degree_budget_used = 0;
  double final_min_penalty = 0;
  /// Some candidate set became empty: q has no embedding.
  bool empty = false;
};

/// Promising-first refinement loop. Stops when the minimum penalty exceeds
/// tau or refining the next vertex would push the consumed degree budget
/// past R * |E_q|. `on_step`, if set, observes the space after every step.
inline RefineReport refine_candidate_space(
    CandidateSpace &cs, const CycleIndex &cycles_q, const CycleIndex &cycles_g, const RefineConfig &config,
    const std::function<void(const CandidateSpace &, const RefinementState &, VertexId)> &on_step = {}) {
  const auto &q = cs.query();
  RefineReport report;
  cs.remove_unsupported();
  if (cs.has_empty_candidate_set()) {
    report.empty = true;
    return report;
  }
  RefinementState state(q, config);
  while (state.min_penalty() <= state.tau) {
    VertexId u = choose_refinement_vertex(state);
    if (static_cast<double>(state.degree_budget_used + q.degree(u)) > state.budget_limit) break;
    const std::size_t before = cs.candidate_count(u);
    refine_vertex(cs, cycles_q, cycles_g, u, config);
    state.degree_budget_used += q.degree(u);
    ++state.steps;
    update_penalties(state, q, u, before, cs.candidate_count(u));
    if (on_step) on_step(cs, state, u);
    if (cs.has_empty_candidate_set()) {
      report.empty = true;
      break;
    }
  }
  report.steps = state.steps;
  report.degree_budget_used = state.degree_budget_used;
  report.final_min_penalty = state.min_penalty();
  return report;
}

}  // namespace subcard
