// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairtt/bbr2.hpp"
#include "fairtt/fairtt.hpp"
#include "fairtt/network.hpp"

namespace fairtt {

enum class Algo { kBbr2, kFairtt };
const char* to_string(Algo a);
std::optional<Algo> parse_algo(std::string_view s);

enum class SweepAxis { kQueueSizeBdp, kElephantRtt };
const char* to_string(SweepAxis a);
// Accepts "queue", "queue_size_bdp", "rtt", "elephant_rtt".
std::optional<SweepAxis> parse_sweep_axis(std::string_view s);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kQueueSizeBdp;
  std::vector<double> values;  // ms for the RTT axis
};

// Throws ConfigError unless values are non-empty, positive and strictly
// increasing.
void validate_sweep(const SweepSpec& s);

struct FlowConfig {
  FlowClass flow_class = FlowClass::kElephant;
  SimTime base_rtt;
  SimTime start_time;
  std::optional<Algo> algo;  // overrides the scenario algo
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::vector<Algo> algos{Algo::kFairtt};
  Rate bottleneck_bw = Rate::mbps(10);
  SimTime bottleneck_delay = SimTime::millis(10);
  double queue_size_bdp = 10.0;
  std::vector<FlowConfig> flows;
  SimTime duration = SimTime::seconds(120);
  std::vector<uint64_t> seeds{1, 2, 3, 4, 5};
  double error_rate = 0.0;
  SimTime window = SimTime::seconds(1);
  SimTime warmup = SimTime::seconds(10);
  Bbr2Params bbr;
  FairttParams fairtt;
  std::optional<SweepSpec> sweep;
};

// Flat `key = value` lines; `#` starts a comment. Each `[flow]` line opens a
// flow stanza whose keys apply to that flow. Errors name the line and key.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario_file(const std::string& path);

// Semantic checks shared by the parser and programmatic callers.
void validate_scenario(const ScenarioConfig& cfg);

DumbbellSpec to_dumbbell(const ScenarioConfig& cfg);

}  // namespace fairtt
