// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "fairtt/errors.hpp"

namespace fairtt {

const char* to_string(Algo a) {
  switch (a) {
    case Algo::kBbr2: return "bbrv2";
    case Algo::kFairtt: return "fairtt";
  }
  return "?";
}

std::optional<Algo> parse_algo(std::string_view s) {
  if (s == "bbrv2") return Algo::kBbr2;
  if (s == "fairtt") return Algo::kFairtt;
  return std::nullopt;
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kQueueSizeBdp: return "queue_size_bdp";
    case SweepAxis::kElephantRtt: return "elephant_rtt_ms";
  }
  return "?";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view s) {
  if (s == "queue" || s == "queue_size_bdp") return SweepAxis::kQueueSizeBdp;
  if (s == "rtt" || s == "elephant_rtt" || s == "elephant_rtt_ms") return SweepAxis::kElephantRtt;
  return std::nullopt;
}

void validate_sweep(const SweepSpec& s) {
  if (s.values.empty()) throw ConfigError("sweep: no values");
  for (size_t i = 0; i < s.values.size(); ++i) {
    if (!(s.values[i] > 0.0) || !std::isfinite(s.values[i])) {
      throw ConfigError("sweep: values must be positive");
    }
    if (i > 0 && !(s.values[i] > s.values[i - 1])) {
      throw ConfigError("sweep: values must be strictly increasing");
    }
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  const size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const size_t comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

class LineError {
 public:
  LineError(int line, std::string_view key) : line_(line), key_(key) {}
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "line " << line_ << ": key '" << key_ << "': " << what;
    throw ConfigError(os.str());
  }

 private:
  int line_;
  std::string key_;
};

double to_double(std::string_view v, const LineError& err) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    err.fail("not a number: '" + std::string(v) + "'");
  }
  return out;
}

double positive(std::string_view v, const LineError& err) {
  const double d = to_double(v, err);
  if (!(d > 0.0)) err.fail("must be positive");
  return d;
}

double non_negative(std::string_view v, const LineError& err) {
  const double d = to_double(v, err);
  if (d < 0.0) err.fail("must be non-negative");
  return d;
}

double fraction(std::string_view v, const LineError& err, bool include_one) {
  const double d = to_double(v, err);
  if (!(d > 0.0) || d > 1.0 || (!include_one && d == 1.0)) {
    err.fail(include_one ? "must lie in (0, 1]" : "must lie in (0, 1)");
  }
  return d;
}

uint64_t to_u64(std::string_view v, const LineError& err) {
  uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    err.fail("not a non-negative integer: '" + std::string(v) + "'");
  }
  return out;
}

Algo to_algo(std::string_view v, const LineError& err) {
  std::optional<Algo> a = parse_algo(v);
  if (!a) err.fail("unknown algo '" + std::string(v) + "'");
  return *a;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view, const LineError&)>;

const std::map<std::string, Setter, std::less<>>& scenario_keys() {
  static const std::map<std::string, Setter, std::less<>> keys = {
      {"name",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         if (v.empty()) e.fail("must not be empty");
         if (v.find_first_of(",\"\n") != std::string_view::npos) {
           e.fail("must not contain commas or quotes");
         }
         c.name = std::string(v);
       }},
      {"algo",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.algos.clear();
         for (std::string_view a : split_list(v)) {
           const Algo algo = to_algo(a, e);
           for (Algo seen : c.algos) {
             if (seen == algo) e.fail("algo listed twice");
           }
           c.algos.push_back(algo);
         }
       }},
      {"bottleneck_bw_mbps",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bottleneck_bw = Rate::from_mbps(positive(v, e));
       }},
      {"bottleneck_delay_ms",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bottleneck_delay = SimTime::from_millis(positive(v, e));
       }},
      {"queue_size_bdp",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.queue_size_bdp = positive(v, e);
       }},
      {"duration_s",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.duration = SimTime::from_seconds(positive(v, e));
       }},
      {"seeds",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.seeds.clear();
         std::set<uint64_t> seen;
         for (std::string_view s : split_list(v)) {
           const uint64_t seed = to_u64(s, e);
           if (!seen.insert(seed).second) e.fail("seed listed twice");
           c.seeds.push_back(seed);
         }
       }},
      {"error_rate",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         const double p = non_negative(v, e);
         if (p >= 1.0) e.fail("must be below 1");
         c.error_rate = p;
       }},
      {"window_s",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.window = SimTime::from_seconds(positive(v, e));
       }},
      {"warmup_s",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.warmup = SimTime::from_seconds(non_negative(v, e));
       }},
      {"sweep_axis",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         std::optional<SweepAxis> axis = parse_sweep_axis(v);
         if (!axis) e.fail("unknown sweep axis '" + std::string(v) + "'");
         if (!c.sweep) c.sweep.emplace();
         c.sweep->axis = *axis;
       }},
      {"sweep_values",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         if (!c.sweep) c.sweep.emplace();
         c.sweep->values.clear();
         for (std::string_view s : split_list(v)) c.sweep->values.push_back(to_double(s, e));
         try {
           SweepSpec check = *c.sweep;
           validate_sweep(check);
         } catch (const ConfigError& ex) {
           e.fail(ex.what());
         }
       }},
      {"bbrv2.startup_pacing_gain",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bbr.startup_pacing_gain = positive(v, e);
       }},
      {"bbrv2.drain_pacing_gain",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bbr.drain_pacing_gain = positive(v, e);
       }},
      {"bbrv2.cwnd_gain",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bbr.cwnd_gain = positive(v, e);
       }},
      {"bbrv2.probe_rtt_cwnd_gain",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bbr.probe_rtt_cwnd_gain = positive(v, e);
       }},
      {"bbrv2.up_pacing_gain",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bbr.up_pacing_gain = positive(v, e);
       }},
      {"bbrv2.down_pacing_gain",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bbr.down_pacing_gain = positive(v, e);
       }},
      {"bbrv2.loss_threshold",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bbr.loss_threshold = fraction(v, e, false);
       }},
      {"bbrv2.probe_rtt_interval_s",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bbr.probe_rtt_interval = SimTime::from_seconds(positive(v, e));
       }},
      {"bbrv2.probe_rtt_duration_ms",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bbr.probe_rtt_duration = SimTime::from_millis(positive(v, e));
       }},
      {"bbrv2.probe_cycle_rtprops",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bbr.probe_cycle_rtprops = positive(v, e);
       }},
      {"bbrv2.max_bw_window_cycles",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.bbr.max_bw_window_cycles = positive(v, e);
       }},
      {"fairtt.beta",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.fairtt.beta = fraction(v, e, false);
       }},
      {"fairtt.gamma",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.fairtt.gamma = fraction(v, e, true);
       }},
      {"fairtt.window_s",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.fairtt.window = SimTime::from_seconds(positive(v, e));
       }},
      {"fairtt.bucket_ms",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         c.fairtt.bucket = SimTime::from_millis(positive(v, e));
       }},
      {"fairtt.flow_view",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         if (v == "path") {
           c.fairtt.view = FlowView::kPath;
         } else if (v == "local") {
           c.fairtt.view = FlowView::kLocal;
         } else {
           e.fail("expected 'path' or 'local'");
         }
       }},
      {"fairtt.rx_window_packets",
       [](ScenarioConfig& c, std::string_view v, const LineError& e) {
         const uint64_t n = to_u64(v, e);
         if (n == 0) e.fail("must be positive");
         c.fairtt.rx_window_packets = static_cast<int64_t>(n);
       }},
  };
  return keys;
}

struct FlowDraft {
  FlowConfig flow;
  bool has_class = false;
  bool has_rtt = false;
  int line = 0;
  std::set<std::string, std::less<>> seen;
};

void set_flow_key(FlowDraft& d, std::string_view key, std::string_view v, const LineError& e) {
  if (key == "class") {
    if (v == "elephant") {
      d.flow.flow_class = FlowClass::kElephant;
    } else if (v == "mice") {
      d.flow.flow_class = FlowClass::kMice;
    } else {
      e.fail("expected 'elephant' or 'mice'");
    }
    d.has_class = true;
  } else if (key == "base_rtt_ms") {
    d.flow.base_rtt = SimTime::from_millis(positive(v, e));
    d.has_rtt = true;
  } else if (key == "start_s") {
    d.flow.start_time = SimTime::from_seconds(non_negative(v, e));
  } else if (key == "algo") {
    d.flow.algo = to_algo(v, e);
  } else {
    e.fail("unknown flow key");
  }
}

void close_flow(ScenarioConfig& cfg, std::optional<FlowDraft>& d) {
  if (!d) return;
  if (!d->has_class) LineError(d->line, "class").fail("missing required flow key");
  if (!d->has_rtt) LineError(d->line, "base_rtt_ms").fail("missing required flow key");
  cfg.flows.push_back(d->flow);
  d.reset();
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig cfg;
  std::optional<FlowDraft> flow;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  size_t last_line = 0;
  while (!text.empty()) {
    ++line_no;
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    last_line = static_cast<size_t>(line_no);
    if (line == "[flow]") {
      close_flow(cfg, flow);
      flow.emplace();
      flow->line = line_no;
      continue;
    }
    if (line.front() == '[') LineError(line_no, line).fail("unknown section");
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) LineError(line_no, line).fail("expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const LineError err(line_no, key);
    if (key.empty()) err.fail("empty key");
    if (value.empty()) err.fail("missing value");
    if (flow) {
      if (!flow->seen.insert(std::string(key)).second) err.fail("repeated in flow stanza");
      set_flow_key(*flow, key, value, err);
      continue;
    }
    const auto& keys = scenario_keys();
    auto it = keys.find(key);
    if (it == keys.end()) err.fail("unknown key");
    if (!seen.insert(std::string(key)).second) err.fail("repeated key");
    it->second(cfg, value, err);
  }
  close_flow(cfg, flow);

  if (cfg.flows.empty()) LineError(static_cast<int>(last_line), "[flow]").fail("at least one flow stanza is required");
  if (cfg.sweep) {
    if (seen.count("sweep_axis") == 0) LineError(static_cast<int>(last_line), "sweep_axis").fail("missing; required with sweep_values");
    if (seen.count("sweep_values") == 0) LineError(static_cast<int>(last_line), "sweep_values").fail("missing; required with sweep_axis");
  }
  validate_scenario(cfg);
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void validate_scenario(const ScenarioConfig& cfg) {
  if (cfg.flows.empty()) throw ConfigError("at least one flow is required");
  if (cfg.algos.empty()) throw ConfigError("algo: at least one algorithm is required");
  if (cfg.seeds.empty()) throw ConfigError("seeds: at least one seed is required");
  if (cfg.duration.ns() <= 0) throw ConfigError("duration_s must be positive");
  if (cfg.window.ns() <= 0) throw ConfigError("window_s must be positive");
  if (cfg.fairtt.window.ns() <= 0) throw ConfigError("fairtt.window_s must be positive");
  if (cfg.fairtt.bucket.ns() <= 0) throw ConfigError("fairtt.bucket_ms must be positive");
  if (cfg.sweep) validate_sweep(*cfg.sweep);
  build_dumbbell(to_dumbbell(cfg));
}

DumbbellSpec to_dumbbell(const ScenarioConfig& cfg) {
  DumbbellSpec spec;
  spec.bottleneck_bandwidth = cfg.bottleneck_bw;
  spec.bottleneck_delay = cfg.bottleneck_delay;
  spec.queue_size_bdp = cfg.queue_size_bdp;
  spec.error_rate = cfg.error_rate;
  for (size_t i = 0; i < cfg.flows.size(); ++i) {
    const FlowConfig& f = cfg.flows[i];
    spec.flows.push_back(FlowSpec{static_cast<int>(i), f.flow_class, f.base_rtt, f.start_time});
  }
  return spec;
}

}  // namespace fairtt
