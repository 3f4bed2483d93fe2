// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fairtt/bbr2.hpp"
#include "fairtt/network.hpp"

namespace fairtt {

// Where a FaiRTT sender gets the per-window minimum RTT and flow count.
enum class FlowView {
  // Only the sender's own ACKs. The flow count is always 1, so the
  // adjustment never engages.
  kLocal,
  // Senders stamp their last window-minimum RTT into data packets; the
  // bottleneck tallies them per window and stamps the summary back, and the
  // receiver echoes it in ACKs.
  kPath,
};

const char* to_string(FlowView v);

struct FairttParams {
  double beta = 0.8;    // balance factor
  double gamma = 0.99;  // discount factor
  SimTime window = SimTime::seconds(1);
  SimTime bucket = SimTime::micros(100);
  FlowView view = FlowView::kPath;
  int64_t rx_window_packets = 1024;
};

struct FairttState {
  double beta = 0.8;
  double gamma = 0.99;
  SimTime alpha;  // RTT fairness threshold
  int wfcount = 1;
  SimTime wmin_rtt;
  // minRTT_0 .. minRTT_{t-1}, then minRTT_t once update_wmin_rtt ran.
  std::vector<SimTime> min_rtt_history;
  // Minimum RTTs observed in the window being closed.
  std::vector<SimTime> window_samples;
  // Most recent WminRTT values, newest last.
  std::deque<SimTime> wmin_recent;
  int64_t w_t = 1;
  int64_t rx_window = 1;
  int64_t tx_window = 1;
  // Off until one full window has been observed.
  bool adjust_enabled = false;
};

// Distinct values in `samples`, where a value less than `bucket` above the
// first member of a cluster (in sorted order) joins that cluster. An empty
// input counts as 1.
int estimate_flow_count(std::span<const SimTime> samples, SimTime bucket);

// WminRTT_t = beta * mean(history) + (1 - beta) * min_rtt_t, or min_rtt_t
// itself with no history. Appends min_rtt_t to the history.
SimTime update_wmin_rtt(FairttState& s, SimTime min_rtt_t);

// min(|Rx|, |Tx|), at least 1.
int64_t compute_w_t(int64_t rx_window, int64_t tx_window);

// alpha_t = Wfcount * (sum of the W_t most recent WminRTT) / W_t. With fewer
// than W_t values on record, the mean runs over what is there.
SimTime fairness_threshold(const FairttState& s);

struct AdjustedBdp {
  ByteCount bdp;
  double coefficient = 1.0;  // gamma * minRTT / lastRTT when applied
  bool applied = false;
};

// In a ProbeBw stage with lastRTT above alpha, scales btlbw * rtprop by
// gamma * minRTT / lastRTT, rounded down to whole bytes; otherwise returns
// btlbw * rtprop. minRTT above lastRTT counts as lastRTT. Throws
// std::invalid_argument for lastRTT <= 0.
AdjustedBdp adjusted_bdp(Rate btlbw, SimTime rtprop, SimTime last_rtt, SimTime min_rtt,
                         const FairttState& s, Phase phase);

// compute_inflight_cap fed the adjusted BDP.
ByteCount fairtt_inflight(ByteCount bdp, double cwnd_gain, InflightBounds bounds = {});

// Bottleneck-side tally of sender-reported minimum RTTs. Windows are aligned
// to multiples of the window length; each packet leaves stamped with the
// summary of the previous window, or of the current one so far when the
// previous window had no reports.
class PathRttTally : public PacketObserver {
 public:
  PathRttTally(SimTime window, SimTime bucket) : window_(window), bucket_(bucket) {}

  void on_bottleneck_arrival(Packet& p, SimTime now) override;
  const PathSummary& last_summary() const { return summary_; }

 private:
  void roll_to(int64_t window_index);
  PathSummary summarize() const;

  SimTime window_;
  SimTime bucket_;
  int64_t window_index_ = 0;
  std::map<int, SimTime> reports_;
  PathSummary summary_;
};

struct CoefficientStats {
  uint64_t applied = 0;
  double min = 1.0;
  double max = 0.0;
};

// BBRv2 with the RTT-fairness-adjusted BDP. Window rolls happen lazily on the
// first ACK past a window boundary, so the engine schedules no events of its
// own.
class FairttEngine : public Bbr2Engine {
 public:
  FairttEngine(const Bbr2Params& bbr, const FairttParams& params, bool check_invariants = true);

  const char* name() const override { return "fairtt"; }
  SimTime rtt_report() const override;
  std::string describe() const override;

  const FairttState& state() const { return state_; }
  const CoefficientStats& coefficients() const { return coefficients_; }

 protected:
  void observe_ack(const AckSample& ack) override;
  ByteCount adjust_bdp(const AckSample& ack, ByteCount base) override;

 private:
  void roll_window(SimTime now);
  bool path_valid() const {
    return params_.view == FlowView::kPath && last_path_.flow_count > 0;
  }

  FairttParams params_;
  FairttState state_;
  bool check_;
  WindowedMinFilter min_rtt_filter_;
  SimTime window_end_;
  bool window_started_ = false;
  SimTime current_window_min_ = SimTime::infinite();
  SimTime last_window_min_;
  PathSummary last_path_;
  CoefficientStats coefficients_;
};

}  // namespace fairtt
