// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairtt/network.hpp"
#include "fairtt/units.hpp"

namespace fairtt {

// (sum T)^2 / (n * sum T^2). nullopt is the no-traffic marker for an all-zero
// input. Throws std::invalid_argument for an empty input or a negative entry.
std::optional<double> jain_index(std::span<const double> throughputs);

// sum T / capacity * 100. Throws std::invalid_argument for capacity <= 0.
double utilization_pct(std::span<const double> throughputs, double capacity);

// elephant / mice. nullopt is the starvation marker (mice == 0).
std::optional<double> throughput_ratio(double elephant_mean, double mice_mean);

struct ConfidenceInterval {
  double mean = 0.0;
  std::optional<double> half_width;  // needs two or more samples
};

// Student-t interval with n - 1 degrees of freedom. Throws
// std::invalid_argument for an empty input or a level outside (0, 1).
ConfidenceInterval confidence_interval(std::span<const double> samples, double level = 0.95);

// Receiver goodput of one flow, bucketed into fixed-width windows by arrival
// time.
class ThroughputSeries {
 public:
  ThroughputSeries(int flow_id, FlowClass flow_class, SimTime window, SimTime duration);

  // Delivery at `at`; an arrival exactly at the end of the run lands in the
  // last window.
  void record(ByteCount bytes, SimTime at);

  int flow_id() const { return flow_id_; }
  FlowClass flow_class() const { return flow_class_; }
  SimTime window() const { return window_; }
  size_t size() const { return bytes_.size(); }
  SimTime window_start(size_t i) const { return window_ * static_cast<int64_t>(i); }
  ByteCount bytes(size_t i) const { return bytes_[i]; }
  ByteCount total() const;
  double throughput_mbps(size_t i) const;

 private:
  int flow_id_;
  FlowClass flow_class_;
  SimTime window_;
  std::vector<ByteCount> bytes_;
};

struct FlowDiagnostics {
  int flow_id = 0;
  uint64_t sent = 0;
  uint64_t delivered = 0;
  uint64_t dropped_at_queue = 0;
  uint64_t lost_on_link = 0;
  int64_t in_network = 0;
  uint64_t retransmissions = 0;
  uint64_t timeouts = 0;
  uint64_t probe_rtt_visits = 0;
  ByteCount goodput;
};

struct RunDiagnostics {
  std::vector<FlowDiagnostics> flows;
  uint64_t events = 0;
  uint64_t trace_digest = 0;
  double mean_queue_bytes = 0.0;
  uint64_t coefficients_applied = 0;
  double coefficient_min = 0.0;  // meaningful when coefficients_applied > 0
  double coefficient_max = 0.0;
};

struct RunAggregates {
  std::vector<double> flow_mean_mbps;  // indexed like RunResult::series
  std::optional<double> mean_fairness;
  double mean_utilization = 0.0;
  std::optional<double> throughput_ratio;
};

struct RunResult {
  std::string scenario;
  std::string algo;
  uint64_t seed = 0;
  double capacity_mbps = 0.0;
  SimTime warmup;
  std::vector<ThroughputSeries> series;
  // Per-window values across flows.
  std::vector<std::optional<double>> fairness;
  std::vector<double> utilization;
  std::vector<std::optional<double>> ratio;
  RunAggregates aggregates;
  RunDiagnostics diagnostics;
};

// Fills the per-window series and the aggregates. Windows starting before
// the warm-up are excluded from the aggregates; a run that never leaves the
// warm-up aggregates over every window.
void summarize(RunResult& r);

// Ratio of class means: mean over elephant flows / mean over mice flows.
std::optional<double> class_ratio(const std::vector<ThroughputSeries>& series,
                                  std::span<const double> per_flow);

// Across-seed aggregate of one scenario point and algorithm.
struct PointAggregate {
  std::string scenario;
  std::string algo;
  std::vector<int> flow_ids;
  std::vector<FlowClass> flow_classes;
  std::vector<ConfidenceInterval> flow_mbps;
  std::optional<ConfidenceInterval> fairness;
  ConfidenceInterval utilization;
  std::optional<ConfidenceInterval> ratio;
  size_t runs = 0;
};

// All runs must share scenario, algo and flow set.
PointAggregate aggregate_runs(std::span<const RunResult> runs, double level = 0.95);

}  // namespace fairtt
