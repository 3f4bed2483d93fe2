// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "fairtt/scenario.hpp"

namespace fairtt::testing {

inline FlowConfig flow(FlowClass c, int rtt_ms) {
  FlowConfig f;
  f.flow_class = c;
  f.base_rtt = SimTime::millis(rtt_ms);
  return f;
}

// Elephant 15 ms against mice 5 ms on the default dumbbell.
inline ScenarioConfig two_flow(SimTime duration = SimTime::seconds(120)) {
  ScenarioConfig cfg;
  cfg.name = "two_flow";
  cfg.algos = {Algo::kBbr2, Algo::kFairtt};
  cfg.duration = duration;
  cfg.seeds = {1};
  cfg.flows = {flow(FlowClass::kElephant, 15), flow(FlowClass::kMice, 5)};
  return cfg;
}

inline ScenarioConfig single_flow(int rtt_ms, SimTime duration = SimTime::seconds(120)) {
  ScenarioConfig cfg;
  cfg.name = "single_flow";
  cfg.algos = {Algo::kBbr2, Algo::kFairtt};
  cfg.duration = duration;
  cfg.seeds = {1};
  cfg.flows = {flow(FlowClass::kElephant, rtt_ms)};
  return cfg;
}

inline std::string scenario_path(const std::string& name) {
  return std::string(FAIRTT_SCENARIO_DIR) + "/" + name + ".scn";
}

}  // namespace fairtt::testing
