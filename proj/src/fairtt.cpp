// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/fairtt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fairtt/errors.hpp"

namespace fairtt {

namespace {
constexpr size_t kMaxRecentWmin = 4096;
}

const char* to_string(FlowView v) {
  return v == FlowView::kPath ? "path" : "local";
}

int estimate_flow_count(std::span<const SimTime> samples, SimTime bucket) {
  if (samples.empty()) return 1;
  std::vector<SimTime> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  int count = 1;
  SimTime anchor = sorted.front();
  for (SimTime v : sorted) {
    if (v - anchor >= bucket) {
      ++count;
      anchor = v;
    }
  }
  return count;
}

SimTime update_wmin_rtt(FairttState& s, SimTime min_rtt_t) {
  SimTime result = min_rtt_t;
  if (!s.min_rtt_history.empty()) {
    double sum = 0.0;
    for (SimTime h : s.min_rtt_history) sum += static_cast<double>(h.ns());
    const double mean = sum / static_cast<double>(s.min_rtt_history.size());
    result = SimTime::nanos(std::llround(s.beta * mean +
                                         (1.0 - s.beta) * static_cast<double>(min_rtt_t.ns())));
  }
  s.min_rtt_history.push_back(min_rtt_t);
  s.wmin_rtt = result;
  s.wmin_recent.push_back(result);
  if (s.wmin_recent.size() > kMaxRecentWmin) s.wmin_recent.pop_front();
  return result;
}

int64_t compute_w_t(int64_t rx_window, int64_t tx_window) {
  return std::max<int64_t>(1, std::min(rx_window, tx_window));
}

SimTime fairness_threshold(const FairttState& s) {
  if (s.wmin_recent.empty()) return s.wmin_rtt * s.wfcount;
  const size_t take = static_cast<size_t>(
      std::min<int64_t>(std::max<int64_t>(s.w_t, 1), static_cast<int64_t>(s.wmin_recent.size())));
  int64_t sum = 0;
  for (size_t i = s.wmin_recent.size() - take; i < s.wmin_recent.size(); ++i) {
    sum += s.wmin_recent[i].ns();
  }
  return SimTime::nanos(static_cast<int64_t>(s.wfcount) * sum / static_cast<int64_t>(take));
}

AdjustedBdp adjusted_bdp(Rate btlbw, SimTime rtprop, SimTime last_rtt, SimTime min_rtt,
                         const FairttState& s, Phase phase) {
  if (last_rtt.ns() <= 0) throw std::invalid_argument("adjusted_bdp: lastRTT must be positive");
  const ByteCount base = compute_bdp(btlbw, rtprop);
  if (!is_probe_bw(phase) || last_rtt <= s.alpha) return AdjustedBdp{base, 1.0, false};
  const SimTime floor_rtt = std::min(min_rtt, last_rtt);
  // gamma * (min / last): min == last gives exactly gamma.
  const double coefficient =
      s.gamma * (static_cast<double>(floor_rtt.ns()) / static_cast<double>(last_rtt.ns()));
  return AdjustedBdp{base.scaled_down(coefficient), coefficient, true};
}

ByteCount fairtt_inflight(ByteCount bdp, double cwnd_gain, InflightBounds bounds) {
  return compute_inflight_cap(bdp, cwnd_gain, bounds);
}

PathSummary PathRttTally::summarize() const {
  PathSummary out;
  if (reports_.empty()) return out;
  std::vector<SimTime> samples;
  samples.reserve(reports_.size());
  int64_t sum = 0;
  for (const auto& [flow, rtt] : reports_) {
    samples.push_back(rtt);
    sum += rtt.ns();
  }
  out.flow_count = estimate_flow_count(samples, bucket_);
  out.mean_rtt = SimTime::nanos(sum / static_cast<int64_t>(samples.size()));
  return out;
}

void PathRttTally::on_bottleneck_arrival(Packet& p, SimTime now) {
  const int64_t index = now.ns() / window_.ns();
  if (index != window_index_) roll_to(index);
  if (!p.rtt_report.is_zero()) reports_[p.flow_id] = p.rtt_report;
  // Until a full window closes, the running tally stands in.
  p.path = summary_.flow_count > 0 ? summary_ : summarize();
}

void PathRttTally::roll_to(int64_t window_index) {
  // After an idle gap the previous window saw nothing.
  summary_ = window_index == window_index_ + 1 ? summarize() : PathSummary{};
  reports_.clear();
  window_index_ = window_index;
}

FairttEngine::FairttEngine(const Bbr2Params& bbr, const FairttParams& params,
                           bool check_invariants)
    : Bbr2Engine(bbr, check_invariants),
      params_(params),
      check_(check_invariants),
      min_rtt_filter_(params.window) {
  state_.beta = params.beta;
  state_.gamma = params.gamma;
  state_.rx_window = params.rx_window_packets;
}

SimTime FairttEngine::rtt_report() const {
  if (!last_window_min_.is_zero()) return last_window_min_;
  // Before the first window closes, the minimum so far.
  return current_window_min_ == SimTime::infinite() ? SimTime::zero() : current_window_min_;
}

void FairttEngine::observe_ack(const AckSample& ack) {
  if (!window_started_) {
    window_started_ = true;
    window_end_ = SimTime::nanos((ack.now.ns() / params_.window.ns() + 1) * params_.window.ns());
  }
  if (ack.now >= window_end_) roll_window(ack.now);
  min_rtt_filter_.update(ack.last_rtt, ack.now);
  current_window_min_ = std::min(current_window_min_, ack.last_rtt);
  if (ack.path.flow_count > 0) last_path_ = ack.path;
}

void FairttEngine::roll_window(SimTime now) {
  const int64_t w = params_.window.ns();
  window_end_ = SimTime::nanos((now.ns() / w + 1) * w);
  if (current_window_min_ == SimTime::infinite()) return;
  last_window_min_ = current_window_min_;
  current_window_min_ = SimTime::infinite();

  FairttState& s = state_;
  s.window_samples.assign(1, last_window_min_);
  SimTime min_rtt_t = last_window_min_;
  if (path_valid()) {
    s.wfcount = last_path_.flow_count;
    min_rtt_t = last_path_.mean_rtt;
  } else {
    s.wfcount = estimate_flow_count(s.window_samples, params_.bucket);
  }
  update_wmin_rtt(s, min_rtt_t);
  s.tx_window = std::max<int64_t>(1, model().inflight_cap.bytes() / kDataPacketSize.bytes());
  s.w_t = compute_w_t(s.rx_window, s.tx_window);
  s.alpha = fairness_threshold(s);
  s.adjust_enabled = true;
}

ByteCount FairttEngine::adjust_bdp(const AckSample& ack, ByteCount base) {
  // A lone flow's own queueing is not RTT unfairness.
  if (!state_.adjust_enabled || state_.wfcount < 2 || ack.last_rtt.ns() <= 0) return base;
  const BbrModel& m = model();
  const SimTime min_rtt = path_valid() ? last_path_.mean_rtt
                                       : min_rtt_filter_.current(ack.now).value_or(ack.last_rtt);
  const AdjustedBdp adjusted =
      adjusted_bdp(m.btlbw, m.rtprop, ack.last_rtt, min_rtt, state_, m.phase);
  if (!adjusted.applied) return base;
  if (check_ && !(adjusted.coefficient > 0.0 && adjusted.coefficient <= state_.gamma)) {
    std::ostringstream os;
    os << "adjustment coefficient " << adjusted.coefficient << " outside (0, " << state_.gamma
       << "]; " << describe();
    throw InvariantViolation(os.str());
  }
  ++coefficients_.applied;
  coefficients_.min = std::min(coefficients_.min, adjusted.coefficient);
  coefficients_.max = std::max(coefficients_.max, adjusted.coefficient);
  return adjusted.bdp;
}

std::string FairttEngine::describe() const {
  std::ostringstream os;
  os << Bbr2Engine::describe() << " fairtt{view=" << to_string(params_.view)
     << " alpha=" << state_.alpha << " wfcount=" << state_.wfcount
     << " wmin=" << state_.wmin_rtt << " w_t=" << state_.w_t
     << " path_mean=" << last_path_.mean_rtt << " applied=" << coefficients_.applied << "}";
  return os.str();
}

}  // namespace fairtt
