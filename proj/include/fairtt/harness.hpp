// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairtt/engine.hpp"
#include "fairtt/metrics.hpp"
#include "fairtt/scenario.hpp"

namespace fairtt {

inline constexpr const char* kCsvHeader =
    "scenario,algo,seed,row_kind,time_s,flow_id,flow_class,throughput_mbps,fairness_index,"
    "utilization_pct,throughput_ratio,ci_half_width";

struct RunOptions {
  bool check_invariants = true;
  // Keep every processed event in RunResult::trace.
  bool record_trace = false;
  // Queue occupancy sampling period.
  SimTime sample_interval = SimTime::millis(10);
  // Worker threads for multi-run calls; 0 = hardware concurrency. Each run
  // stays single-threaded.
  unsigned jobs = 1;
};

struct TracedRun {
  RunResult result;
  std::vector<TraceRecord> trace;
};

// One deterministic simulation. Every flow without an override runs `algo`.
// Internal invariant violations surface as InvariantViolation carrying the
// event trace tail and controller state.
RunResult run_scenario(const ScenarioConfig& cfg, Algo algo, uint64_t seed,
                       const RunOptions& options = {});
TracedRun run_scenario_traced(const ScenarioConfig& cfg, Algo algo, uint64_t seed,
                              RunOptions options = {});

struct SweepPoint {
  std::string id;  // e.g. "fig3_queue_sweep@queue_size_bdp=10"
  double value = 0.0;
  ScenarioConfig config;
};

// Queue axis sets queue_size_bdp; RTT axis sets the base RTT of every elephant
// flow (ms) and leaves mice untouched.
std::vector<SweepPoint> expand_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep);

struct Report {
  std::vector<RunResult> runs;
  std::vector<PointAggregate> points;
};

// All algos x seeds; sweeps the config's own sweep keys when present.
Report run_all(const ScenarioConfig& cfg, const RunOptions& options = {});
Report run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep,
                 const RunOptions& options = {});

// Series rows carry one flow's window throughput plus that window's
// fairness, utilization and ratio. Every aggregate row fills exactly one
// metric column; ci_half_width belongs to that column.
void write_csv(std::ostream& os, const Report& report);
std::string to_csv(const Report& report);
// Throws IoError naming the path on I/O failure.
void emit_csv(const std::string& path, const Report& report);

// %.6g
std::string format_number(double v);

}  // namespace fairtt
