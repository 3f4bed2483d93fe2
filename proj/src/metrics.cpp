// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fairtt {

std::optional<double> jain_index(std::span<const double> throughputs) {
  if (throughputs.empty()) throw std::invalid_argument("jain_index: no flows");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double t : throughputs) {
    if (t < 0.0 || std::isnan(t)) throw std::invalid_argument("jain_index: negative throughput");
    sum += t;
    sum_sq += t * t;
  }
  if (sum_sq == 0.0) return std::nullopt;
  return sum * sum / (static_cast<double>(throughputs.size()) * sum_sq);
}

double utilization_pct(std::span<const double> throughputs, double capacity) {
  if (!(capacity > 0.0)) throw std::invalid_argument("utilization: capacity must be positive");
  const double sum = std::accumulate(throughputs.begin(), throughputs.end(), 0.0);
  return sum / capacity * 100.0;
}

std::optional<double> throughput_ratio(double elephant_mean, double mice_mean) {
  if (mice_mean == 0.0) return std::nullopt;
  return elephant_mean / mice_mean;
}

ConfidenceInterval confidence_interval(std::span<const double> samples, double level) {
  if (samples.empty()) throw std::invalid_argument("confidence_interval: no samples");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence_interval: level outside (0, 1)");
  }
  const double n = static_cast<double>(samples.size());
  ConfidenceInterval ci;
  ci.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (samples.size() < 2) return ci;
  // Identical samples: report the value itself rather than a rounded mean.
  if (std::all_of(samples.begin(), samples.end(), [&](double x) { return x == samples[0]; })) {
    ci.mean = samples[0];
    ci.half_width = 0.0;
    return ci;
  }
  double ss = 0.0;
  for (double x : samples) ss += (x - ci.mean) * (x - ci.mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - level) / 2.0));
  ci.half_width = t * sd / std::sqrt(n);
  return ci;
}

ThroughputSeries::ThroughputSeries(int flow_id, FlowClass flow_class, SimTime window,
                                   SimTime duration)
    : flow_id_(flow_id), flow_class_(flow_class), window_(window) {
  if (window.ns() <= 0) throw std::invalid_argument("measurement window must be positive");
  const int64_t n = (duration.ns() + window.ns() - 1) / window.ns();
  bytes_.resize(static_cast<size_t>(std::max<int64_t>(n, 1)));
}

void ThroughputSeries::record(ByteCount bytes, SimTime at) {
  size_t i = static_cast<size_t>(std::max<int64_t>(at.ns(), 0) / window_.ns());
  if (i >= bytes_.size()) i = bytes_.size() - 1;
  bytes_[i] += bytes;
}

ByteCount ThroughputSeries::total() const {
  ByteCount sum;
  for (ByteCount b : bytes_) sum += b;
  return sum;
}

double ThroughputSeries::throughput_mbps(size_t i) const {
  return static_cast<double>(bytes_[i].bits()) / window_.to_seconds() / 1e6;
}

std::optional<double> class_ratio(const std::vector<ThroughputSeries>& series,
                                  std::span<const double> per_flow) {
  double elephant = 0.0;
  double mice = 0.0;
  int n_elephant = 0;
  int n_mice = 0;
  for (size_t i = 0; i < series.size(); ++i) {
    if (series[i].flow_class() == FlowClass::kElephant) {
      elephant += per_flow[i];
      ++n_elephant;
    } else {
      mice += per_flow[i];
      ++n_mice;
    }
  }
  if (n_elephant == 0 || n_mice == 0) return std::nullopt;
  return throughput_ratio(elephant / n_elephant, mice / n_mice);
}

void summarize(RunResult& r) {
  r.fairness.clear();
  r.utilization.clear();
  r.ratio.clear();
  if (r.series.empty()) return;
  const size_t windows = r.series.front().size();
  std::vector<double> row(r.series.size());
  for (size_t w = 0; w < windows; ++w) {
    for (size_t f = 0; f < r.series.size(); ++f) row[f] = r.series[f].throughput_mbps(w);
    r.fairness.push_back(jain_index(row));
    r.utilization.push_back(utilization_pct(row, r.capacity_mbps));
    r.ratio.push_back(class_ratio(r.series, row));
  }

  size_t first = 0;
  while (first < windows && r.series.front().window_start(first) < r.warmup) ++first;
  if (first == windows) first = 0;
  const double count = static_cast<double>(windows - first);

  RunAggregates& a = r.aggregates;
  a.flow_mean_mbps.assign(r.series.size(), 0.0);
  for (size_t f = 0; f < r.series.size(); ++f) {
    double sum = 0.0;
    for (size_t w = first; w < windows; ++w) sum += r.series[f].throughput_mbps(w);
    a.flow_mean_mbps[f] = sum / count;
  }
  double f_sum = 0.0;
  int f_count = 0;
  double u_sum = 0.0;
  for (size_t w = first; w < windows; ++w) {
    if (r.fairness[w]) {
      f_sum += *r.fairness[w];
      ++f_count;
    }
    u_sum += r.utilization[w];
  }
  a.mean_fairness = f_count > 0 ? std::optional<double>(f_sum / f_count) : std::nullopt;
  a.mean_utilization = u_sum / count;
  a.throughput_ratio = class_ratio(r.series, a.flow_mean_mbps);
}

PointAggregate aggregate_runs(std::span<const RunResult> runs, double level) {
  if (runs.empty()) throw std::invalid_argument("aggregate_runs: no runs");
  PointAggregate p;
  p.scenario = runs.front().scenario;
  p.algo = runs.front().algo;
  p.runs = runs.size();
  const size_t flows = runs.front().series.size();
  for (const ThroughputSeries& s : runs.front().series) {
    p.flow_ids.push_back(s.flow_id());
    p.flow_classes.push_back(s.flow_class());
  }
  std::vector<double> values;
  for (size_t f = 0; f < flows; ++f) {
    values.clear();
    for (const RunResult& r : runs) {
      if (r.series.size() != flows) throw std::invalid_argument("aggregate_runs: flow sets differ");
      values.push_back(r.aggregates.flow_mean_mbps[f]);
    }
    p.flow_mbps.push_back(confidence_interval(values, level));
  }
  values.clear();
  for (const RunResult& r : runs) {
    if (r.aggregates.mean_fairness) values.push_back(*r.aggregates.mean_fairness);
  }
  if (!values.empty()) p.fairness = confidence_interval(values, level);
  values.clear();
  for (const RunResult& r : runs) values.push_back(r.aggregates.mean_utilization);
  p.utilization = confidence_interval(values, level);
  values.clear();
  for (const RunResult& r : runs) {
    if (r.aggregates.throughput_ratio) values.push_back(*r.aggregates.throughput_ratio);
  }
  if (!values.empty()) p.ratio = confidence_interval(values, level);
  return p;
}

}  // namespace fairtt
