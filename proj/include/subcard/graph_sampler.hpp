//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subcard/candidate_space.hpp"

namespace subcard {

inline constexpr double kUnboundedBudget = std::numeric_limits<double>::infinity();

/// Query vertex order: fewest candidates first, then the vertex with the most
/// already placed neighbors (ties: smaller id). Throws on a disconnected query.
inline std::vector<VertexId> matching_order(const CandidateSpace &cs) {
  const auto &q = cs.query();
  const std::size_t n = q.vertex_count();
  std::vector<VertexId> order;
  if (n == 0) return order;
  VertexId first = 0;
  for (VertexId u = 1; u < n; ++u) {
    if (cs.candidate_count(u) < cs.candidate_count(first)) first = u;
  }
  std::vector<std::size_t> placed_nbrs(n, 0);
  std::vector<char> placed(n, 0);
  auto place = [&](VertexId u) {
    placed[u] = 1;
    order.push_back(u);
    for (VertexId w : q.neighbors(u)) ++placed_nbrs[w];
  };
  place(first);
  while (order.size() < n) {
    VertexId best = kNoVertex;
    for (VertexId u = 0; u < n; ++u) {
      if (placed[u] || placed_nbrs[u] == 0) continue;
      if (best == kNoVertex || placed_nbrs[u] > placed_nbrs[best]) best = u;
    }
    if (best == kNoVertex) throw graph_error("query graph is disconnected");
    place(best);
  }
  return order;
}

/// Partial embedding M: assignments in insertion order plus the image set.
class PartialEmbedding {
 public:
  PartialEmbedding(std::size_t query_vertices, std::size_t data_vertices)
      : mapping_(query_vertices, kNoVertex), used_(data_vertices, 0) {}

  std::size_t size() const noexcept { return pairs_.size(); }
  bool complete() const noexcept { return pairs_.size() == mapping_.size(); }
  bool mapped(VertexId u) const { return mapping_[u] != kNoVertex; }
  VertexId image(VertexId u) const { return mapping_[u]; }
  bool used(VertexId v) const { return used_[v] != 0; }
  std::span<const std::pair<VertexId, VertexId>> pairs() const { return pairs_; }
  std::span<const VertexId> mapping() const { return mapping_; }

  void push(VertexId u, VertexId v) {
    if (mapping_[u] != kNoVertex || used_[v]) throw std::logic_error("assignment breaks injectivity");
    mapping_[u] = v;
    used_[v] = 1;
    pairs_.emplace_back(u, v);
  }

  void pop() {
    auto [u, v] = pairs_.back();
    pairs_.pop_back();
    mapping_[u] = kNoVertex;
    used_[v] = 0;
  }

 private:
  std::vector<VertexId> mapping_;
  std::vector<char> used_;
  std::vector<std::pair<VertexId, VertexId>> pairs_;
};

/// C_M(u): intersection of C(u | u', M(u')) over mapped neighbors u', minus
/// the image of M, written to `out` in sorted order. With no mapped neighbor
/// the start set is C(u).
inline void extendable_candidates(const CandidateSpace &cs, const PartialEmbedding &m, VertexId u,
                                  std::vector<VertexId> &out) {
  const auto &q = cs.query();
  auto nbrs = q.neighbors(u);
  std::vector<std::span<const VertexId>> lists;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    VertexId w = nbrs[i];
    if (!m.mapped(w)) continue;
    lists.push_back(cs.candidate_neighbors(w, m.image(w), u));
  }
  out.clear();
  if (lists.empty()) {
    for (VertexId v : cs.candidates(u)) {
      if (!m.used(v)) out.push_back(v);
    }
    return;
  }
  std::sort(lists.begin(), lists.end(), [](auto a, auto b) { return a.size() < b.size(); });
  for (VertexId v : lists[0]) {
    if (!m.used(v)) out.push_back(v);
  }
  for (std::size_t j = 1; j < lists.size() && !out.empty(); ++j) {
    auto keep = out.begin();
    auto it = lists[j].begin();
    for (VertexId v : out) {
      it = std::lower_bound(it, lists[j].end(), v);
      if (it == lists[j].end()) break;
      if (*it == v) *keep++ = v;
    }
    out.erase(keep, out.end());
  }
}

/// Sampling budget |V_q| * K / sqrt(successes + 1).
inline double get_sample_size(std::size_t query_vertices, std::uint64_t tree_successes, double K) {
  return static_cast<double>(query_vertices) * K / std::sqrt(static_cast<double>(tree_successes) + 1.0);
}

struct WeightEstimate {
  double w_hat = 0;
  std::uint64_t samples_used = 0;
};

/// Stratified recursive estimator of the number of embeddings extending M.
///
/// At each level the next vertex u in `order` is extended: a uniform subset S
/// of C_M(u) of size max(1, min(ceil(|C_M(u)| / k), floor(ub))) is explored,
/// child i receiving (ub - used so far) / (children left), and the result is
/// (|C_M(u)| / |S|) * sum of child estimates. ub = kUnboundedBudget with
/// k = 1 explores everything.
class GraphSampler {
 public:
  /// Called on entry of every recursive call with (|M|, ub).
  using Observer = std::function<void(std::size_t depth, double ub)>;

  GraphSampler(const CandidateSpace &cs, std::vector<VertexId> order, std::uint32_t k = 4)
      : cs_(&cs), order_(std::move(order)), k_(k), embedding_(cs.query().vertex_count(), cs.data().vertex_count()),
        scratch_(order_.size() + 1) {
    if (k_ == 0) throw std::invalid_argument("subset divisor k must be positive");
    if (order_.size() != cs.query().vertex_count()) throw std::invalid_argument("order must cover the query");
  }

  void set_observer(Observer f) { observer_ = std::move(f); }

  PartialEmbedding &embedding() { return embedding_; }

  /// Estimates from the current embedding (empty unless the caller seeded it).
  template <class Rng>
  WeightEstimate estimate(double ub, Rng &rng) {
    if (!(ub >= 1)) throw std::invalid_argument("budget must be at least 1");
    return recurse(ub, rng);
  }

 private:
  template <class Rng>
  WeightEstimate recurse(double ub, Rng &rng) {
    const std::size_t depth = embedding_.size();
    if (observer_) observer_(depth, ub);
    if (embedding_.complete()) return {1.0, 1};
    VertexId u = order_[depth];
    auto &cands = scratch_[depth];
    extendable_candidates(*cs_, embedding_, u, cands);
    if (cands.empty()) return {0.0, 1};

    const std::size_t n = cands.size();
    std::size_t sz = (n + k_ - 1) / k_;
    if (ub < static_cast<double>(sz)) sz = static_cast<std::size_t>(std::floor(ub));
    sz = std::max<std::size_t>(sz, 1);
    // Partial Fisher-Yates: the first sz entries become a uniform subset.
    if (sz < n) {
      for (std::size_t i = 0; i < sz; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(cands[i], cands[pick(rng)]);
      }
    }

    WeightEstimate out;
    double sum = 0;
    for (std::size_t i = 0; i < sz; ++i) {
      double child_ub = kUnboundedBudget;
      if (std::isfinite(ub)) {
        child_ub = std::max(1.0, (ub - static_cast<double>(out.samples_used)) / static_cast<double>(sz - i));
      }
      embedding_.push(u, cands[i]);
      auto child = recurse(child_ub, rng);
      embedding_.pop();
      sum += child.w_hat;
      out.samples_used += child.samples_used;
    }
    out.w_hat = static_cast<double>(n) / static_cast<double>(sz) * sum;
    return out;
  }

  const CandidateSpace *cs_;
  std::vector<VertexId> order_;
  std::uint32_t k_;
  PartialEmbedding embedding_;
  std::vector<std::vector<VertexId>> scratch_;
  Observer observer_;
};

/// ŵ_M for the given partial embedding M (copied) and budget.
template <class Rng>
WeightEstimate estimate_w(const CandidateSpace &cs, const PartialEmbedding &m, double ub,
                          std::span<const VertexId> order, Rng &rng, std::uint32_t k = 4) {
  std::vector<VertexId> ord(order.begin(), order.end());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (ord[i] != m.pairs()[i].first) throw std::invalid_argument("embedding does not follow the matching order");
  }
  GraphSampler sampler(cs, std::move(ord), k);
  for (auto [u, v] : m.pairs()) sampler.embedding().push(u, v);
  return sampler.estimate(ub, rng);
}

struct GraphSamplingResult {
  double estimate = 0;
  std::uint64_t samples_used = 0;
  double budget = 0;
};

/// Full stratified estimate from the empty embedding with budget
/// get_sample_size(|V_q|, tree_successes, K).
template <class Rng>
GraphSamplingResult candidate_graph_sampling(const CandidateSpace &cs, std::uint64_t tree_successes, double K,
                                             std::uint32_t k, Rng &rng) {
  GraphSamplingResult result;
  result.budget = get_sample_size(cs.query().vertex_count(), tree_successes, K);
  if (cs.query().vertex_count() == 0 || cs.has_empty_candidate_set()) return result;
  GraphSampler sampler(cs, matching_order(cs), k);
  auto w = sampler.estimate(std::max(1.0, result.budget), rng);
  result.estimate = w.w_hat;
  result.samples_used = w.samples_used;
  return result;
}

}  // namespace subcard
