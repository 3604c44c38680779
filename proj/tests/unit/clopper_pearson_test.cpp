//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "subcard/clopper_pearson.hpp"

using namespace subcard;

TEST(ClopperPearson, AllSuccesses) {
  auto ci = clopper_pearson(10, 10, 0.05);
  EXPECT_NEAR(ci.lower, std::pow(0.025, 0.1), 1e-12);
  EXPECT_NEAR(ci.lower, 0.6915, 1e-4);
  EXPECT_EQ(ci.upper, 1.0);
}

TEST(ClopperPearson, NoSuccesses) {
  auto ci = clopper_pearson(50000, 0, 0.05);
  EXPECT_EQ(ci.lower, 0.0);
  EXPECT_NEAR(ci.upper, 1 - std::pow(0.025, 1.0 / 50000), 1e-12);
}

TEST(ClopperPearson, RejectsBadArguments) {
  EXPECT_THROW(clopper_pearson(0, 0, 0.05), std::invalid_argument);
  EXPECT_THROW(clopper_pearson(5, 6, 0.05), std::invalid_argument);
  EXPECT_THROW(clopper_pearson(5, 2, 0.0), std::invalid_argument);
}

TEST(ClopperPearson, AgreesWithBisectionOnBinomialTails) {
  const std::pair<std::uint64_t, std::uint64_t> cases[] = {{1, 0},    {1, 1},     {7, 3},     {20, 1},
                                                          {100, 37}, {500, 499}, {2000, 88}, {3000, 1500}};
  for (auto [n, s] : cases) {
    for (double alpha : {0.01, 0.05, 0.2}) {
      auto ci = clopper_pearson(n, s, alpha);
      auto [lo, hi] = fixtures::cp_bisection(n, s, alpha);
      EXPECT_NEAR(ci.lower, lo, 1e-9) << n << " " << s << " " << alpha;
      EXPECT_NEAR(ci.upper, hi, 1e-9) << n << " " << s << " " << alpha;
    }
  }
}

TEST(StoppingRule, MatchesTheOracleInterval) {
  for (std::uint64_t s = 1; s <= 150; ++s) {
    const std::uint64_t n = 10 * s;
    auto [lo, hi] = fixtures::cp_bisection(n, s, 0.05);
    const double rho = 0.1;
    const bool want = rho / 1.25 <= lo && hi <= 1.25 * rho;
    // Skip cases sitting on the boundary within bisection accuracy.
    if (std::abs(lo - rho / 1.25) < 1e-9 || std::abs(hi - 1.25 * rho) < 1e-9) continue;
    EXPECT_EQ(interval_rule_met(n, s, 0.05, 1.25), want) << s;
  }
  EXPECT_FALSE(interval_rule_met(100, 0, 0.05, 1.25));
}

TEST(StoppingRule, AlwaysSuccessfulDrawsStopOnTheInterval) {
  auto run = run_adaptive_sampling([] { return true; }, StoppingConfig{});
  EXPECT_EQ(run.reason, StopReason::interval);
  EXPECT_EQ(run.successes, run.trials);
  // Smallest n with 0.025^(1/n) >= 0.8.
  EXPECT_EQ(run.trials, static_cast<std::uint64_t>(std::ceil(std::log(0.025) / std::log(0.8))));
}

TEST(StoppingRule, NeverSuccessfulDrawsFailEarly) {
  std::uint64_t calls = 0;
  auto run = run_adaptive_sampling(
      [&] {
        ++calls;
        return false;
      },
      StoppingConfig{});
  EXPECT_EQ(run.reason, StopReason::early_fail);
  EXPECT_EQ(run.trials, 50000u);
  EXPECT_EQ(calls, 50000u);
}

TEST(StoppingRule, RareSuccessesHitTheCap) {
  // 11 successes by trial 50000 avoid the early fail; the rate is too low for
  // the interval to tighten within the cap.
  StoppingConfig cfg;
  cfg.trial_cap = 60000;
  std::uint64_t t = 0;
  auto run = run_adaptive_sampling([&] { return ++t % 4000 == 0; }, cfg);
  EXPECT_EQ(run.reason, StopReason::trial_cap);
  EXPECT_EQ(run.trials, 60000u);
  EXPECT_EQ(run.successes, 15u);
}

TEST(StoppingRule, FixedModeRunsExactly) {
  std::uint64_t t = 0;
  auto run = run_adaptive_sampling([&] { return ++t % 2 == 0; }, StoppingConfig::fixed(7));
  EXPECT_EQ(run.reason, StopReason::fixed);
  EXPECT_EQ(run.trials, 7u);
  EXPECT_EQ(run.successes, 3u);
}

TEST(StoppingRule, BernoulliRunsStopNearTheTrueRate) {
  std::mt19937_64 rng(2);
  std::bernoulli_distribution coin(0.3);
  auto run = run_adaptive_sampling([&] { return coin(rng); }, StoppingConfig{});
  EXPECT_EQ(run.reason, StopReason::interval);
  EXPECT_NEAR(run.success_ratio(), 0.3, 0.3 * 0.25);
}
