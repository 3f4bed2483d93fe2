// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the simulator only through the C API.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairtt_c.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct ScenarioDeleter {
  void operator()(fairtt_scenario* s) const { fairtt_scenario_free(s); }
};
struct ReportDeleter {
  void operator()(fairtt_report* r) const { fairtt_report_free(r); }
};
using ScenarioPtr = std::unique_ptr<fairtt_scenario, ScenarioDeleter>;
using ReportPtr = std::unique_ptr<fairtt_report, ReportDeleter>;

int report_failure(fairtt_status st) {
  std::fprintf(stderr, "error: %s\n", fairtt_last_error());
  switch (st) {
    case FAIRTT_ERR_CONFIG:
    case FAIRTT_ERR_ARGUMENT:
      return kExitConfig;
    case FAIRTT_ERR_INVARIANT:
      return kExitInvariant;
    default:
      return kExitFailure;
  }
}

struct Common {
  std::string scenario;
  std::optional<uint64_t> seed;
  std::string out;
  unsigned jobs = 1;
};

int load(const Common& c, ScenarioPtr& s) {
  fairtt_scenario* raw = nullptr;
  if (fairtt_status st = fairtt_scenario_load(c.scenario.c_str(), &raw); st != FAIRTT_OK) {
    return report_failure(st);
  }
  s.reset(raw);
  if (c.seed) {
    const uint64_t seed = *c.seed;
    if (fairtt_status st = fairtt_scenario_set_seeds(s.get(), &seed, 1); st != FAIRTT_OK) {
      return report_failure(st);
    }
  }
  fairtt_scenario_set_jobs(s.get(), c.jobs);
  return kExitOk;
}

void print_summaries(const fairtt_report* r) {
  const size_t n = fairtt_report_run_count(r);
  for (size_t i = 0; i < n; ++i) {
    fairtt_run_summary sum;
    if (fairtt_report_run_summary(r, i, &sum) != FAIRTT_OK) continue;
    std::fprintf(stderr, "%s %s seed=%llu", sum.scenario, sum.algo,
                 static_cast<unsigned long long>(sum.seed));
    if (sum.has_fairness) std::fprintf(stderr, " fairness=%.4f", sum.mean_fairness);
    std::fprintf(stderr, " utilization=%.2f%%", sum.mean_utilization_pct);
    if (sum.has_ratio) {
      std::fprintf(stderr, " ratio=%.3f", sum.throughput_ratio);
    } else {
      std::fprintf(stderr, " ratio=n/a");
    }
    std::fprintf(stderr, "\n");
  }
}

int finish(const Common& c, fairtt_report* raw) {
  ReportPtr r(raw);
  print_summaries(r.get());
  if (c.out.empty()) {
    std::fputs(fairtt_report_csv(r.get()), stdout);
    return kExitOk;
  }
  if (fairtt_status st = fairtt_report_write_csv(r.get(), c.out.c_str()); st != FAIRTT_OK) {
    return report_failure(st);
  }
  return kExitOk;
}

int cmd_run(const Common& c) {
  ScenarioPtr s;
  if (int rc = load(c, s); rc != kExitOk) return rc;
  fairtt_report* r = nullptr;
  if (fairtt_status st = fairtt_run(s.get(), &r); st != FAIRTT_OK) return report_failure(st);
  return finish(c, r);
}

int cmd_sweep(const Common& c, const std::string& axis, const std::vector<double>& values) {
  ScenarioPtr s;
  if (int rc = load(c, s); rc != kExitOk) return rc;
  fairtt_report* r = nullptr;
  fairtt_status st = fairtt_sweep(s.get(), axis.c_str(), values.data(), values.size(), &r);
  if (st != FAIRTT_OK) return report_failure(st);
  return finish(c, r);
}

int cmd_validate(const Common& c) {
  ScenarioPtr s;
  if (int rc = load(c, s); rc != kExitOk) return rc;
  std::printf("ok %s\n", fairtt_scenario_describe(s.get()));
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c, bool with_run_options) {
  sub->add_option("--scenario", c.scenario, "Scenario file")->required();
  if (!with_run_options) return;
  sub->add_option("--seed", c.seed, "Run this seed only");
  sub->add_option("--out", c.out, "CSV output path (default: stdout)");
  sub->add_option("--jobs", c.jobs, "Parallel runs; 0 = all cores")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dumbbell simulator for BBRv2 and FaiRTT"};
  app.require_subcommand(1);

  Common run_args;
  CLI::App* run = app.add_subcommand("run", "Run every algo and seed of a scenario");
  add_common(run, run_args, true);

  Common sweep_args;
  std::string axis;
  std::vector<double> values;
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep queue size or elephant RTT");
  add_common(sweep, sweep_args, true);
  sweep->add_option("--axis", axis, "queue (BDP multiples) or rtt (elephant base RTT, ms)")
      ->required();
  sweep->add_option("--values", values, "Comma-separated, strictly increasing")
      ->required()
      ->delimiter(',');

  Common validate_args;
  CLI::App* validate = app.add_subcommand("validate", "Parse and check a scenario file");
  add_common(validate, validate_args, false);

  app.add_subcommand("version", "Print the library version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*run) return cmd_run(run_args);
  if (*sweep) return cmd_sweep(sweep_args, axis, values);
  if (*validate) return cmd_validate(validate_args);
  std::printf("fairtt %s\n", fairtt_version());
  return kExitOk;
}
