// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fairtt/errors.hpp"
#include "fairtt/fairtt.hpp"
#include "fairtt/sender.hpp"

namespace fairtt {

namespace {

std::unique_ptr<CongestionControl> make_engine(const ScenarioConfig& cfg, Algo algo,
                                               bool check) {
  if (algo == Algo::kFairtt) return std::make_unique<FairttEngine>(cfg.bbr, cfg.fairtt, check);
  return std::make_unique<Bbr2Engine>(cfg.bbr, check);
}

std::string dump(const Simulator& sim, const std::vector<std::unique_ptr<Sender>>& senders) {
  std::ostringstream os;
  os << "\n-- at t=" << sim.now() << ", last events (oldest first):";
  for (const TraceRecord& r : sim.trace_tail()) {
    os << "\n  " << r.fire_at << " " << to_string(r.kind) << " #" << r.seq;
  }
  os << "\n-- controllers:";
  for (size_t i = 0; i < senders.size(); ++i) {
    os << "\n  flow " << i << ": " << senders[i]->cc().describe();
  }
  return os.str();
}

std::string point_label(const ScenarioConfig& cfg, SweepAxis axis, double value) {
  return cfg.name + "@" + to_string(axis) + "=" + format_number(value);
}

}  // namespace

TracedRun run_scenario_traced(const ScenarioConfig& cfg, Algo algo, uint64_t seed,
                              RunOptions options) {
  validate_scenario(cfg);
  const DumbbellLayout layout = build_dumbbell(to_dumbbell(cfg));

  Simulator sim;
  sim.set_record_trace(options.record_trace);
  Network network(sim, layout, seed);

  RunResult result;
  result.scenario = cfg.name;
  result.algo = to_string(algo);
  result.seed = seed;
  result.capacity_mbps = cfg.bottleneck_bw.to_mbps();
  result.warmup = cfg.warmup;
  for (size_t i = 0; i < cfg.flows.size(); ++i) {
    result.series.emplace_back(static_cast<int>(i), cfg.flows[i].flow_class, cfg.window,
                               cfg.duration);
  }
  network.set_goodput_sink([&result](int flow, ByteCount bytes, SimTime at) {
    result.series[flow].record(bytes, at);
  });

  std::optional<PathRttTally> tally;
  bool any_fairtt = false;
  for (const FlowConfig& f : cfg.flows) any_fairtt |= f.algo.value_or(algo) == Algo::kFairtt;
  if (any_fairtt && cfg.fairtt.view == FlowView::kPath) {
    tally.emplace(cfg.fairtt.window, cfg.fairtt.bucket);
    network.set_observer(&*tally);
  }

  std::vector<std::unique_ptr<Sender>> senders;
  for (size_t i = 0; i < cfg.flows.size(); ++i) {
    const FlowConfig& f = cfg.flows[i];
    senders.push_back(std::make_unique<Sender>(
        sim, network, static_cast<int>(i),
        make_engine(cfg, f.algo.value_or(algo), options.check_invariants), f.start_time));
    Sender* s = senders.back().get();
    network.set_ack_sink(static_cast<int>(i), [s](const Ack& a) { s->on_ack(a); });
  }

  double queue_sum = 0.0;
  uint64_t queue_samples = 0;
  std::function<void()> sample = [&] {
    const LinkQueue& q = network.queue();
    if (options.check_invariants && q.occupancy() > q.capacity()) {
      std::ostringstream os;
      os << "queue occupancy " << q.occupancy() << " above capacity " << q.capacity();
      throw InvariantViolation(os.str());
    }
    queue_sum += static_cast<double>(q.occupancy().bytes());
    ++queue_samples;
    if (sim.now() + options.sample_interval <= cfg.duration) {
      sim.schedule_in(options.sample_interval, EventKind::kMetricsSample, -1, sample);
    }
  };
  sim.schedule(SimTime::zero(), EventKind::kMetricsSample, -1, sample);

  try {
    sim.run_until(cfg.duration);
  } catch (const InvariantViolation& e) {
    throw InvariantViolation(std::string(e.what()) + dump(sim, senders));
  }

  RunDiagnostics& d = result.diagnostics;
  d.events = sim.processed_count();
  d.trace_digest = sim.trace_digest();
  d.mean_queue_bytes = queue_samples > 0 ? queue_sum / static_cast<double>(queue_samples) : 0.0;
  bool first_coefficient = true;
  for (size_t i = 0; i < senders.size(); ++i) {
    const int id = static_cast<int>(i);
    const FlowCounters& c = network.counters(id);
    FlowDiagnostics fd;
    fd.flow_id = id;
    fd.sent = c.sent;
    fd.delivered = c.delivered;
    fd.dropped_at_queue = c.dropped_at_queue;
    fd.lost_on_link = c.lost_on_link;
    fd.in_network = network.packets_in_network(id);
    fd.retransmissions = senders[i]->counters().retransmissions;
    fd.timeouts = senders[i]->counters().timeouts;
    fd.goodput = network.receiver(id).goodput();
    if (const auto* bbr = dynamic_cast<const Bbr2Engine*>(&senders[i]->cc())) {
      fd.probe_rtt_visits = bbr->probe_rtt_visits();
    }
    if (const auto* ft = dynamic_cast<const FairttEngine*>(&senders[i]->cc())) {
      const CoefficientStats& cs = ft->coefficients();
      if (cs.applied > 0) {
        d.coefficient_min = first_coefficient ? cs.min : std::min(d.coefficient_min, cs.min);
        d.coefficient_max = first_coefficient ? cs.max : std::max(d.coefficient_max, cs.max);
        first_coefficient = false;
        d.coefficients_applied += cs.applied;
      }
    }
    if (options.check_invariants &&
        fd.sent != fd.delivered + fd.dropped_at_queue + fd.lost_on_link +
                       static_cast<uint64_t>(fd.in_network)) {
      std::ostringstream os;
      os << "packet conservation broken for flow " << id << ": sent=" << fd.sent
         << " delivered=" << fd.delivered << " dropped=" << fd.dropped_at_queue
         << " lost=" << fd.lost_on_link << " in_network=" << fd.in_network;
      throw InvariantViolation(os.str() + dump(sim, senders));
    }
    d.flows.push_back(fd);
  }

  summarize(result);
  TracedRun out{std::move(result), {}};
  if (options.record_trace) out.trace = sim.trace();
  return out;
}

RunResult run_scenario(const ScenarioConfig& cfg, Algo algo, uint64_t seed,
                       const RunOptions& options) {
  RunOptions o = options;
  o.record_trace = false;
  return run_scenario_traced(cfg, algo, seed, o).result;
}

std::vector<SweepPoint> expand_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep) {
  validate_sweep(sweep);
  std::vector<SweepPoint> points;
  for (double v : sweep.values) {
    SweepPoint p;
    p.value = v;
    p.config = cfg;
    p.config.sweep.reset();
    if (sweep.axis == SweepAxis::kQueueSizeBdp) {
      p.config.queue_size_bdp = v;
    } else {
      bool any = false;
      for (FlowConfig& f : p.config.flows) {
        if (f.flow_class == FlowClass::kElephant) {
          f.base_rtt = SimTime::from_millis(v);
          any = true;
        }
      }
      if (!any) throw ConfigError("rtt sweep: scenario has no elephant flow");
    }
    p.id = point_label(cfg, sweep.axis, v);
    p.config.name = p.id;
    validate_scenario(p.config);
    points.push_back(std::move(p));
  }
  return points;
}

namespace {

struct Job {
  const ScenarioConfig* cfg;
  Algo algo;
  uint64_t seed;
};

// Runs every job on `options.jobs` workers. Results land in job order, so the
// report does not depend on scheduling; the first failing job (in order)
// rethrows.
std::vector<RunResult> execute(const std::vector<Job>& jobs, const RunOptions& options) {
  std::vector<std::optional<RunResult>> slots(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      try {
        slots[i] = run_scenario(*jobs[i].cfg, jobs[i].algo, jobs[i].seed, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned workers = options.jobs != 0 ? options.jobs : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<size_t>(jobs.size(), 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  std::vector<RunResult> out;
  out.reserve(jobs.size());
  for (size_t i = 0; i < jobs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

Report run_points(const std::vector<const ScenarioConfig*>& points, const RunOptions& options) {
  std::vector<Job> jobs;
  for (const ScenarioConfig* cfg : points) {
    for (Algo algo : cfg->algos) {
      for (uint64_t seed : cfg->seeds) jobs.push_back(Job{cfg, algo, seed});
    }
  }
  Report report;
  report.runs = execute(jobs, options);
  size_t first = 0;
  for (const ScenarioConfig* cfg : points) {
    for (size_t a = 0; a < cfg->algos.size(); ++a) {
      report.points.push_back(aggregate_runs(
          std::span<const RunResult>(report.runs).subspan(first, cfg->seeds.size())));
      first += cfg->seeds.size();
    }
  }
  return report;
}

}  // namespace

Report run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep, const RunOptions& options) {
  const std::vector<SweepPoint> expanded = expand_sweep(cfg, sweep);
  std::vector<const ScenarioConfig*> points;
  for (const SweepPoint& p : expanded) points.push_back(&p.config);
  return run_points(points, options);
}

Report run_all(const ScenarioConfig& cfg, const RunOptions& options) {
  if (cfg.sweep) return run_sweep(cfg, *cfg.sweep, options);
  validate_scenario(cfg);
  return run_points({&cfg}, options);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

struct Row {
  std::string scenario;
  std::string algo;
  std::string seed;
  const char* kind = "";
  std::string time_s;
  std::string flow_id;
  std::string flow_class;
  std::string throughput;
  std::string fairness;
  std::string utilization;
  std::string ratio;
  std::string ci;
};

void put(std::ostream& os, const Row& r) {
  os << r.scenario << ',' << r.algo << ',' << r.seed << ',' << r.kind << ',' << r.time_s << ','
     << r.flow_id << ',' << r.flow_class << ',' << r.throughput << ',' << r.fairness << ','
     << r.utilization << ',' << r.ratio << ',' << r.ci << '\n';
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string ci_text(const ConfidenceInterval& ci) { return opt(ci.half_width); }

}  // namespace

void write_csv(std::ostream& os, const Report& report) {
  os << kCsvHeader << '\n';
  for (const RunResult& r : report.runs) {
    Row base;
    base.scenario = r.scenario;
    base.algo = r.algo;
    base.seed = std::to_string(r.seed);
    const size_t windows = r.series.empty() ? 0 : r.series.front().size();
    for (size_t w = 0; w < windows; ++w) {
      for (const ThroughputSeries& s : r.series) {
        Row row = base;
        row.kind = "series";
        row.time_s = format_number(s.window_start(w).to_seconds());
        row.flow_id = std::to_string(s.flow_id());
        row.flow_class = to_string(s.flow_class());
        row.throughput = format_number(s.throughput_mbps(w));
        row.fairness = opt(r.fairness[w]);
        row.utilization = format_number(r.utilization[w]);
        row.ratio = opt(r.ratio[w]);
        put(os, row);
      }
    }
    for (size_t f = 0; f < r.series.size(); ++f) {
      Row row = base;
      row.kind = "aggregate";
      row.flow_id = std::to_string(r.series[f].flow_id());
      row.flow_class = to_string(r.series[f].flow_class());
      row.throughput = format_number(r.aggregates.flow_mean_mbps[f]);
      put(os, row);
    }
    Row row = base;
    row.kind = "aggregate";
    Row fr = row;
    fr.fairness = opt(r.aggregates.mean_fairness);
    put(os, fr);
    Row ur = row;
    ur.utilization = format_number(r.aggregates.mean_utilization);
    put(os, ur);
    Row rr = row;
    rr.ratio = opt(r.aggregates.throughput_ratio);
    put(os, rr);
  }
  for (const PointAggregate& p : report.points) {
    Row base;
    base.scenario = p.scenario;
    base.algo = p.algo;
    base.kind = "aggregate";
    for (size_t f = 0; f < p.flow_ids.size(); ++f) {
      Row row = base;
      row.flow_id = std::to_string(p.flow_ids[f]);
      row.flow_class = to_string(p.flow_classes[f]);
      row.throughput = format_number(p.flow_mbps[f].mean);
      row.ci = ci_text(p.flow_mbps[f]);
      put(os, row);
    }
    Row fr = base;
    if (p.fairness) {
      fr.fairness = format_number(p.fairness->mean);
      fr.ci = ci_text(*p.fairness);
    }
    put(os, fr);
    Row ur = base;
    ur.utilization = format_number(p.utilization.mean);
    ur.ci = ci_text(p.utilization);
    put(os, ur);
    Row rr = base;
    if (p.ratio) {
      rr.ratio = format_number(p.ratio->mean);
      rr.ci = ci_text(*p.ratio);
    }
    put(os, rr);
  }
}

std::string to_csv(const Report& report) {
  std::ostringstream os;
  write_csv(os, report);
  return os.str();
}

void emit_csv(const std::string& path, const Report& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_csv(out, report);
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace fairtt
