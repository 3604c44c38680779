//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

#include <boost/math/special_functions/beta.hpp>

namespace subcard {

struct ConfidenceInterval {
  double lower = 0;
  double upper = 1;
};

/// Exact binomial (Clopper-Pearson) interval for `successes` out of `trials`
/// at confidence 1 - alpha, via Beta quantiles.
inline ConfidenceInterval clopper_pearson(std::uint64_t trials, std::uint64_t successes, double alpha) {
  if (trials == 0) throw std::invalid_argument("clopper_pearson: trials must be positive");
  if (successes > trials) throw std::invalid_argument("clopper_pearson: successes exceed trials");
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("clopper_pearson: alpha must lie in (0, 1)");
  const double n = static_cast<double>(trials);
  const double s = static_cast<double>(successes);
  ConfidenceInterval ci;
  if (successes > 0) ci.lower = boost::math::ibeta_inv(s, n - s + 1, alpha / 2);
  if (successes < trials) ci.upper = boost::math::ibeta_inv(s + 1, n - s, 1 - alpha / 2);
  return ci;
}

struct StoppingConfig {
  double alpha = 0.05;
  double c = 1.25;
  std::uint64_t early_fail_trials = 50'000;
  std::uint64_t early_fail_successes = 10;
  std::uint64_t trial_cap = 400'000;
  /// Interval re-check period when no success occurred.
  std::uint64_t check_interval = 1024;
  /// When set, exactly this many trials run and the interval rule is off.
  std::optional<std::uint64_t> fixed_trials;

  void validate() const {
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(c > 1)) throw std::invalid_argument("c must exceed 1");
    if (trial_cap == 0 && !fixed_trials) throw std::invalid_argument("trial cap must be positive");
    if (check_interval == 0) throw std::invalid_argument("check interval must be positive");
  }

  static StoppingConfig fixed(std::uint64_t n) {
    StoppingConfig cfg;
    cfg.fixed_trials = n;
    return cfg;
  }
};

enum class StopReason { interval, early_fail, trial_cap, fixed };

inline const char *to_string(StopReason r) {
  switch (r) {
    case StopReason::interval: return "interval";
    case StopReason::early_fail: return "early_fail";
    case StopReason::trial_cap: return "trial_cap";
    case StopReason::fixed: return "fixed";
  }
  return "unknown";
}

struct SamplingRun {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  StopReason reason = StopReason::trial_cap;

  double success_ratio() const {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }
};

/// True when c^-1 * rho <= L and U <= c * rho.
inline bool interval_rule_met(std::uint64_t trials, std::uint64_t successes, double alpha, double c) {
  if (successes == 0) return false;
  const double rho = static_cast<double>(successes) / static_cast<double>(trials);
  auto ci = clopper_pearson(trials, successes, alpha);
  return rho / c <= ci.lower && ci.upper <= c * rho;
}

/// Repeats the Bernoulli experiment `draw` until the interval rule holds,
/// the early-fail condition triggers, or the trial cap is reached. The
/// interval is evaluated after every success and every `check_interval`
/// trials.
template <class Draw>
SamplingRun run_adaptive_sampling(Draw &&draw, const StoppingConfig &cfg) {
  cfg.validate();
  SamplingRun run;
  if (cfg.fixed_trials) {
    for (; run.trials < *cfg.fixed_trials; ++run.trials) {
      if (draw()) ++run.successes;
    }
    run.reason = StopReason::fixed;
    return run;
  }
  while (run.trials < cfg.trial_cap) {
    const bool hit = draw();
    ++run.trials;
    if (hit) ++run.successes;
    if ((hit || run.trials % cfg.check_interval == 0) &&
        interval_rule_met(run.trials, run.successes, cfg.alpha, cfg.c)) {
      run.reason = StopReason::interval;
      return run;
    }
    if (run.trials == cfg.early_fail_trials && run.successes <= cfg.early_fail_successes) {
      run.reason = StopReason::early_fail;
      return run;
    }
  }
  run.reason = StopReason::trial_cap;
  return run;
}

}  // namespace subcard
