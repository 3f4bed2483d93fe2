// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Randomized checks that span modules.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fairtt/harness.hpp"
#include "fairtt/metrics.hpp"
#include "test_support.hpp"

namespace fairtt {
namespace {

TEST(JainProperty, BoundsEqualityScaleAndTwoFlowIdentity) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> value(0.0, 100.0);
  for (int i = 0; i < 10000; ++i) {
    const size_t n = 1 + gen() % 12;
    std::vector<double> t(n);
    for (double& v : t) v = (gen() % 4 == 0) ? 0.0 : value(gen);
    t[gen() % n] = value(gen) + 1e-3;
    const double f = jain_index(t).value();
    ASSERT_GE(f, 1.0 / static_cast<double>(n) - 1e-12);
    ASSERT_LE(f, 1.0 + 1e-12);

    const bool uniform = std::all_of(t.begin(), t.end(), [&](double v) { return v == t[0]; });
    ASSERT_EQ(std::abs(f - 1.0) < 1e-12, uniform);

    std::vector<double> same(n, t[0] + 1.0);
    ASSERT_NEAR(jain_index(same).value(), 1.0, 1e-12);

    const double k = 0.01 + value(gen);
    std::vector<double> scaled = t;
    for (double& v : scaled) v *= k;
    ASSERT_NEAR(jain_index(scaled).value(), f, 1e-12);

    const double a = value(gen) + 1e-3;
    const double b = value(gen) + 1e-3;
    const double r = throughput_ratio(a, b).value();
    const std::vector<double> pair{a, b};
    ASSERT_NEAR(jain_index(pair).value(), (1 + r) * (1 + r) / (2 * (1 + r * r)), 1e-9);
  }
}

// Randomized dumbbells: every run conserves packets (checked inside the
// harness, which throws on mismatch) and reproduces its trace.
TEST(RunProperty, ConservationAndDeterminismOnRandomScenarios) {
  std::mt19937_64 gen(77);
  for (int i = 0; i < 12; ++i) {
    ScenarioConfig cfg;
    cfg.name = "random";
    cfg.duration = SimTime::seconds(15);
    cfg.queue_size_bdp = 0.5 + static_cast<double>(gen() % 200) / 10.0;
    cfg.error_rate = static_cast<double>(gen() % 5) / 500.0;
    const int flows = 1 + static_cast<int>(gen() % 4);
    for (int f = 0; f < flows; ++f) {
      cfg.flows.push_back(testing::flow(f % 2 ? FlowClass::kMice : FlowClass::kElephant,
                                        2 + static_cast<int>(gen() % 40)));
    }
    const Algo algo = gen() % 2 ? Algo::kFairtt : Algo::kBbr2;
    const uint64_t seed = gen() % 1000;
    const RunResult a = run_scenario(cfg, algo, seed);
    const RunResult b = run_scenario(cfg, algo, seed);
    EXPECT_EQ(a.diagnostics.trace_digest, b.diagnostics.trace_digest) << "case " << i;
    for (const FlowDiagnostics& f : a.diagnostics.flows) {
      EXPECT_EQ(f.sent, f.delivered + f.dropped_at_queue + f.lost_on_link +
                            static_cast<uint64_t>(f.in_network))
          << "case " << i << " flow " << f.flow_id;
      EXPECT_EQ(a.series[static_cast<size_t>(f.flow_id)].total(), f.goodput);
    }
    if (algo == Algo::kFairtt && a.diagnostics.coefficients_applied > 0) {
      EXPECT_GT(a.diagnostics.coefficient_min, 0.0);
      EXPECT_LE(a.diagnostics.coefficient_max, 0.99);
    }
  }
}

}  // namespace
}  // namespace fairtt
