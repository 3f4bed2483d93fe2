// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/scenario.hpp"

#include <gtest/gtest.h>

#include <string>

#include "fairtt/errors.hpp"
#include "test_support.hpp"

namespace fairtt {
namespace {

const char* kMinimal =
    "[flow]\n"
    "class = elephant\n"
    "base_rtt_ms = 15\n"
    "[flow]\n"
    "class = mice\n"
    "base_rtt_ms = 5\n";

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseScenario, MinimalFileGetsDefaults) {
  const ScenarioConfig c = parse_scenario(kMinimal);
  EXPECT_EQ(c.bottleneck_bw, Rate::mbps(10));
  EXPECT_EQ(c.bottleneck_delay, SimTime::millis(10));
  EXPECT_EQ(c.queue_size_bdp, 10.0);
  EXPECT_EQ(c.duration, SimTime::seconds(120));
  EXPECT_EQ(c.seeds.size(), 5u);
  EXPECT_EQ(c.window, SimTime::seconds(1));
  EXPECT_EQ(c.warmup, SimTime::seconds(10));
  ASSERT_EQ(c.flows.size(), 2u);
  EXPECT_EQ(c.flows[0].flow_class, FlowClass::kElephant);
  EXPECT_EQ(c.flows[1].base_rtt, SimTime::millis(5));
  EXPECT_EQ(c.fairtt.beta, 0.8);
  EXPECT_EQ(c.fairtt.gamma, 0.99);
  EXPECT_FALSE(c.sweep.has_value());
}

TEST(ParseScenario, ZeroQueueRejected) {
  const std::string e = error_of(std::string("queue_size_bdp = 0\n") + kMinimal);
  EXPECT_NE(e.find("queue_size_bdp"), std::string::npos);
  EXPECT_NE(e.find("line 1"), std::string::npos);
}

TEST(ParseScenario, UnknownAlgoRejected) {
  const std::string e = error_of(std::string("# comment\nalgo = bbrv1\n") + kMinimal);
  EXPECT_NE(e.find("unknown algo"), std::string::npos);
  EXPECT_NE(e.find("line 2"), std::string::npos);
}

TEST(ParseScenario, RejectsUnknownAndRepeatedKeys) {
  EXPECT_NE(error_of(std::string("colour = red\n") + kMinimal).find("colour"), std::string::npos);
  EXPECT_NE(error_of(std::string("seeds = 1\nseeds = 2\n") + kMinimal).find("seeds"),
            std::string::npos);
  EXPECT_NE(error_of("name = x\n").find("flow"), std::string::npos);
  EXPECT_FALSE(error_of(std::string("duration_s = -3\n") + kMinimal).empty());
  EXPECT_FALSE(error_of(std::string("fairtt.gamma = 1.5\n") + kMinimal).empty());
  EXPECT_FALSE(error_of("[flow]\nclass = whale\nbase_rtt_ms = 5\n").empty());
  EXPECT_FALSE(error_of("[flow]\nclass = mice\n").empty());
}

TEST(ParseScenario, FullFile) {
  const ScenarioConfig c = parse_scenario(
      "name = custom\n"
      "algo = bbrv2, fairtt\n"
      "bottleneck_bw_mbps = 20\n"
      "duration_s = 30\n"
      "seeds = 7, 8\n"
      "error_rate = 0.001\n"
      "sweep_axis = rtt\n"
      "sweep_values = 5, 10\n"
      "bbrv2.probe_rtt_duration_ms = 200\n"
      "fairtt.beta = 0.5\n"
      "fairtt.flow_view = local\n"
      "[flow]\n"
      "class = elephant\n"
      "base_rtt_ms = 25\n"
      "start_s = 1.5\n"
      "algo = bbrv2\n"
      "[flow]\n"
      "class = mice\n"
      "base_rtt_ms = 5\n");
  EXPECT_EQ(c.name, "custom");
  EXPECT_EQ(c.algos, (std::vector<Algo>{Algo::kBbr2, Algo::kFairtt}));
  EXPECT_EQ(c.bottleneck_bw, Rate::mbps(20));
  EXPECT_EQ(c.seeds, (std::vector<uint64_t>{7, 8}));
  EXPECT_EQ(c.error_rate, 0.001);
  ASSERT_TRUE(c.sweep.has_value());
  EXPECT_EQ(c.sweep->axis, SweepAxis::kElephantRtt);
  EXPECT_EQ(c.fairtt.beta, 0.5);
  EXPECT_EQ(c.fairtt.view, FlowView::kLocal);
  EXPECT_EQ(c.flows[0].start_time, SimTime::millis(1500));
  EXPECT_EQ(c.flows[0].algo, Algo::kBbr2);
  EXPECT_FALSE(c.flows[1].algo.has_value());
}

TEST(ValidateSweep, RequiresStrictlyIncreasingPositiveValues) {
  EXPECT_NO_THROW(validate_sweep({SweepAxis::kQueueSizeBdp, {0.5, 1, 2}}));
  EXPECT_THROW(validate_sweep({SweepAxis::kQueueSizeBdp, {1, 1}}), ConfigError);
  EXPECT_THROW(validate_sweep({SweepAxis::kQueueSizeBdp, {2, 1}}), ConfigError);
  EXPECT_THROW(validate_sweep({SweepAxis::kQueueSizeBdp, {0, 1}}), ConfigError);
  EXPECT_THROW(validate_sweep({SweepAxis::kElephantRtt, {}}), ConfigError);
}

TEST(ParseSweepAxis, ShortAndLongForms) {
  EXPECT_EQ(parse_sweep_axis("queue"), SweepAxis::kQueueSizeBdp);
  EXPECT_EQ(parse_sweep_axis("queue_size_bdp"), SweepAxis::kQueueSizeBdp);
  EXPECT_EQ(parse_sweep_axis("rtt"), SweepAxis::kElephantRtt);
  EXPECT_FALSE(parse_sweep_axis("loss").has_value());
}

TEST(ShippedScenarios, AllParse) {
  for (const char* name : {"fig3_baseline", "fig3_queue_sweep", "fig3_rtt_sweep", "fig4_fairness",
                           "fig5_utilization", "single_flow"}) {
    EXPECT_NO_THROW(load_scenario_file(testing::scenario_path(name))) << name;
  }
  EXPECT_THROW(load_scenario_file(testing::scenario_path("missing")), ConfigError);
}

}  // namespace
}  // namespace fairtt
