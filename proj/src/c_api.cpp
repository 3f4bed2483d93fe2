// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt_c.h"

#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "fairtt/errors.hpp"
#include "fairtt/harness.hpp"

#ifndef FAIRTT_VERSION
#define FAIRTT_VERSION "0.0.0"
#endif

struct fairtt_scenario {
  fairtt::ScenarioConfig config;
  fairtt::RunOptions options;
  std::string description;
};

struct fairtt_report {
  fairtt::Report report;
  std::string csv;
  bool csv_ready = false;
};

namespace {

thread_local std::string last_error;

fairtt_status fail(fairtt_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Maps the library's exception types onto status codes.
template <typename F>
fairtt_status guarded(F&& body) {
  try {
    body();
    return FAIRTT_OK;
  } catch (const fairtt::ConfigError& e) {
    return fail(FAIRTT_ERR_CONFIG, e.what());
  } catch (const fairtt::InvariantViolation& e) {
    return fail(FAIRTT_ERR_INVARIANT, e.what());
  } catch (const fairtt::IoError& e) {
    return fail(FAIRTT_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FAIRTT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FAIRTT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FAIRTT_ERR_INTERNAL, "unknown error");
  }
}

std::string describe(const fairtt::ScenarioConfig& c) {
  std::ostringstream os;
  os << c.name << ": algos=";
  for (size_t i = 0; i < c.algos.size(); ++i) os << (i ? "," : "") << fairtt::to_string(c.algos[i]);
  os << " flows=" << c.flows.size() << " seeds=" << c.seeds.size()
     << " duration_s=" << fairtt::format_number(c.duration.to_seconds())
     << " queue_size_bdp=" << fairtt::format_number(c.queue_size_bdp);
  if (c.sweep) {
    os << " sweep=" << fairtt::to_string(c.sweep->axis) << ":";
    for (size_t i = 0; i < c.sweep->values.size(); ++i) {
      os << (i ? "," : "") << fairtt::format_number(c.sweep->values[i]);
    }
  }
  return os.str();
}

fairtt_status make_scenario(fairtt::ScenarioConfig cfg, fairtt_scenario** out) {
  auto* s = new fairtt_scenario{std::move(cfg), {}, {}};
  s->description = describe(s->config);
  *out = s;
  return FAIRTT_OK;
}

}  // namespace

extern "C" {

const char* fairtt_version(void) { return FAIRTT_VERSION; }

const char* fairtt_last_error(void) { return last_error.c_str(); }

fairtt_status fairtt_scenario_load(const char* path, fairtt_scenario** out) {
  if (path == nullptr || out == nullptr) return fail(FAIRTT_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { make_scenario(fairtt::load_scenario_file(path), out); });
}

fairtt_status fairtt_scenario_parse(const char* text, fairtt_scenario** out) {
  if (text == nullptr || out == nullptr) return fail(FAIRTT_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { make_scenario(fairtt::parse_scenario(text), out); });
}

void fairtt_scenario_free(fairtt_scenario* s) { delete s; }

const char* fairtt_scenario_describe(const fairtt_scenario* s) {
  return s == nullptr ? "" : s->description.c_str();
}

fairtt_status fairtt_scenario_set_seeds(fairtt_scenario* s, const uint64_t* seeds, size_t count) {
  if (s == nullptr || (seeds == nullptr && count > 0)) {
    return fail(FAIRTT_ERR_ARGUMENT, "null argument");
  }
  if (count == 0) return fail(FAIRTT_ERR_CONFIG, "seed list must not be empty");
  return guarded([&] {
    s->config.seeds.assign(seeds, seeds + count);
    s->description = describe(s->config);
  });
}

fairtt_status fairtt_scenario_set_jobs(fairtt_scenario* s, unsigned jobs) {
  if (s == nullptr) return fail(FAIRTT_ERR_ARGUMENT, "null argument");
  s->options.jobs = jobs;
  return FAIRTT_OK;
}

fairtt_status fairtt_run(const fairtt_scenario* s, fairtt_report** out) {
  if (s == nullptr || out == nullptr) return fail(FAIRTT_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* r = new fairtt_report{fairtt::run_all(s->config, s->options), {}, false};
    *out = r;
  });
}

fairtt_status fairtt_sweep(const fairtt_scenario* s, const char* axis, const double* values,
                           size_t count, fairtt_report** out) {
  if (s == nullptr || axis == nullptr || out == nullptr || (values == nullptr && count > 0)) {
    return fail(FAIRTT_ERR_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return guarded([&] {
    const auto parsed = fairtt::parse_sweep_axis(axis);
    if (!parsed) throw fairtt::ConfigError(std::string("unknown sweep axis '") + axis + "'");
    fairtt::SweepSpec sweep{*parsed, std::vector<double>(values, values + count)};
    fairtt::validate_sweep(sweep);
    auto* r = new fairtt_report{fairtt::run_sweep(s->config, sweep, s->options), {}, false};
    *out = r;
  });
}

void fairtt_report_free(fairtt_report* r) { delete r; }

size_t fairtt_report_run_count(const fairtt_report* r) {
  return r == nullptr ? 0 : r->report.runs.size();
}

fairtt_status fairtt_report_run_summary(const fairtt_report* r, size_t index,
                                        fairtt_run_summary* out) {
  if (r == nullptr || out == nullptr) return fail(FAIRTT_ERR_ARGUMENT, "null argument");
  if (index >= r->report.runs.size()) return fail(FAIRTT_ERR_ARGUMENT, "run index out of range");
  const fairtt::RunResult& run = r->report.runs[index];
  const fairtt::RunAggregates& a = run.aggregates;
  const fairtt::RunDiagnostics& d = run.diagnostics;
  *out = fairtt_run_summary{run.scenario.c_str(),
                            run.algo.c_str(),
                            run.seed,
                            a.mean_fairness.has_value(),
                            a.mean_fairness.value_or(0.0),
                            a.mean_utilization,
                            a.throughput_ratio.has_value(),
                            a.throughput_ratio.value_or(0.0),
                            d.events,
                            d.trace_digest,
                            d.coefficients_applied,
                            d.coefficient_min,
                            d.coefficient_max};
  return FAIRTT_OK;
}

const char* fairtt_report_csv(const fairtt_report* r) {
  if (r == nullptr) return "";
  auto* mut = const_cast<fairtt_report*>(r);
  if (!mut->csv_ready) {
    mut->csv = fairtt::to_csv(r->report);
    mut->csv_ready = true;
  }
  return mut->csv.c_str();
}

fairtt_status fairtt_report_write_csv(const fairtt_report* r, const char* path) {
  if (r == nullptr || path == nullptr) return fail(FAIRTT_ERR_ARGUMENT, "null argument");
  return guarded([&] { fairtt::emit_csv(path, r->report); });
}

}  // extern "C"
