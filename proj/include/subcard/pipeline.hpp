//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "subcard/candidate_space.hpp"
#include "subcard/clopper_pearson.hpp"
#include "subcard/cycle_index.hpp"
#include "subcard/graph_sampler.hpp"
#include "subcard/refine.hpp"
#include "subcard/tree_sampler.hpp"

namespace subcard {

enum class SamplerMode { automatic, tree_only, graph_only };

enum class Method { tree, graph, zero_shortcut };

inline const char *to_string(Method m) {
  switch (m) {
    case Method::tree: return "tree";
    case Method::graph: return "graph";
    case Method::zero_shortcut: return "zero-shortcut";
  }
  return "unknown";
}

struct EstimatorConfig {
  double alpha = 0.05;
  double c = 1.25;
  double tau = 0.9;
  double R = 5.0;
  double phi = 2.0 / 3.0;
  double K = 100'000;
  std::uint32_t k_frac = 4;
  std::uint64_t tri_cap = kDefaultCycleCap;
  std::uint64_t quad_cap = kDefaultCycleCap;
  std::uint64_t early_fail_trials = 50'000;
  std::uint64_t early_fail_successes = 10;
  std::uint64_t trial_cap = 400'000;
  std::uint64_t seed = 0;
  SamplerMode mode = SamplerMode::automatic;
  FilterMode filter = FilterMode::full;

  void validate() const {
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(c > 1)) throw std::invalid_argument("c must exceed 1");
    if (!(tau >= 0)) throw std::invalid_argument("tau must be non-negative");
    if (!(R >= 0)) throw std::invalid_argument("R must be non-negative");
    if (!(phi > 0 && phi < 1)) throw std::invalid_argument("phi must lie in (0, 1)");
    if (!(K > 0)) throw std::invalid_argument("K must be positive");
    if (k_frac == 0) throw std::invalid_argument("k must be positive");
    if (trial_cap == 0) throw std::invalid_argument("trial cap must be positive");
  }

  RefineConfig refine_config() const {
    RefineConfig rc;
    rc.phi = phi;
    rc.tau = tau;
    rc.budget_multiplier = R;
    rc.mode = filter;
    return rc;
  }

  StoppingConfig stopping() const {
    StoppingConfig sc;
    sc.alpha = alpha;
    sc.c = c;
    sc.early_fail_trials = early_fail_trials;
    sc.early_fail_successes = early_fail_successes;
    sc.trial_cap = trial_cap;
    return sc;
  }
};

struct StageTimings {
  double filter_ms = 0;
  double tree_ms = 0;
  double graph_ms = 0;
  double total_ms = 0;
};

struct EstimateResult {
  double estimate = 0;
  Method method = Method::zero_shortcut;
  std::uint64_t tree_trials = 0;
  std::uint64_t tree_successes = 0;
  bool tree_early_fail = false;
  double tree_total = 0;
  std::uint64_t graph_samples_used = 0;
  std::size_t refinement_steps = 0;
  std::size_t candidate_vertices = 0;
  std::size_t candidate_edges = 0;
  StageTimings timings;
  std::uint64_t seed = 0;
};

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace detail

/// Filtering, tree sampling and, when the tree stage early-fails, stratified
/// graph sampling for one query. `cycles_g` must index `g` and should be
/// built once per data graph.
inline EstimateResult estimate(const LabeledGraph &q, const LabeledGraph &g, const CycleIndex &cycles_g,
                               const EstimatorConfig &config) {
  config.validate();
  if (q.vertex_count() == 0) throw graph_error("query graph is empty");
  if (!q.is_connected()) throw graph_error("query graph is disconnected");
  const auto start = std::chrono::steady_clock::now();
  EstimateResult result;
  result.seed = config.seed;
  std::mt19937_64 rng(config.seed);

  auto finish = [&](Method method) {
    result.method = method;
    if (method == Method::zero_shortcut) result.estimate = 0;
    result.timings.total_ms = detail::ms_since(start);
    return result;
  };

  auto filter_start = std::chrono::steady_clock::now();
  auto cycles_q = CycleIndex::build(q, config.tri_cap, config.quad_cap);
  auto cs = build_initial_cs(q, g);
  if (cs.has_empty_candidate_set()) {
    result.timings.filter_ms = detail::ms_since(filter_start);
    return finish(Method::zero_shortcut);
  }
  auto report = refine_candidate_space(cs, cycles_q, cycles_g, config.refine_config());
  result.refinement_steps = report.steps;
  result.timings.filter_ms = detail::ms_since(filter_start);
  if (cs.has_empty_candidate_set()) return finish(Method::zero_shortcut);
  for (VertexId u = 0; u < q.vertex_count(); ++u) result.candidate_vertices += cs.candidate_count(u);
  result.candidate_edges = cs.total_candidate_edges();

  if (config.mode != SamplerMode::graph_only) {
    auto tree_start = std::chrono::steady_clock::now();
    auto tree = candidate_tree_sampling(cs, config.stopping(), rng);
    result.timings.tree_ms = detail::ms_since(tree_start);
    result.tree_trials = tree.trials;
    result.tree_successes = tree.successes;
    result.tree_early_fail = tree.early_fail;
    result.tree_total = tree.total;
    if (!tree.tree || !(tree.total > 0)) return finish(Method::zero_shortcut);
    if (config.mode == SamplerMode::tree_only || !tree.early_fail) {
      result.estimate = tree.estimate;
      return finish(Method::tree);
    }
  }

  auto graph_start = std::chrono::steady_clock::now();
  auto graph = candidate_graph_sampling(cs, result.tree_successes, config.K, config.k_frac, rng);
  result.timings.graph_ms = detail::ms_since(graph_start);
  result.graph_samples_used = graph.samples_used;
  result.estimate = graph.estimate;
  return finish(Method::graph);
}

/// max(t/e, e/t) with both clamped to at least 1.
inline double q_error(double estimate, double truth) {
  const double e = std::max(1.0, estimate);
  const double t = std::max(1.0, truth);
  return std::max(e / t, t / e);
}

/// log10 of the clamped ratio estimate / truth: positive for overestimates.
inline double signed_log_q_error(double estimate, double truth) {
  return std::log10(std::max(1.0, estimate)) - std::log10(std::max(1.0, truth));
}

/// Outcome of one query in a batch: either a result or the error message.
struct BatchItem {
  EstimateResult result;
  std::string error;
  bool ok() const { return error.empty(); }
};

/// Runs `estimate` over all queries on `jobs` threads. Query i uses seed
/// config.seed + i, so results do not depend on the thread count. Null
/// entries are skipped and reported as errors.
inline std::vector<BatchItem> estimate_batch(const std::vector<const LabeledGraph *> &queries, const LabeledGraph &g,
                                             const CycleIndex &cycles_g, const EstimatorConfig &config,
                                             unsigned jobs = 1) {
  std::vector<BatchItem> items(queries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < queries.size(); i = next++) {
      if (!queries[i]) {
        items[i].error = "query not loaded";
        continue;
      }
      EstimatorConfig local = config;
      local.seed = config.seed + i;
      try {
        items[i].result = estimate(*queries[i], g, cycles_g, local);
      } catch (const std::exception &e) {
        items[i].error = e.what();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, queries.size()))));
  if (jobs == 1) {
    worker();
    return items;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto &t : pool) t.join();
  return items;
}

}  // namespace subcard
