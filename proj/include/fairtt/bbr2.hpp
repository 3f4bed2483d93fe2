// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>
#include <string>

#include "fairtt/congestion_control.hpp"
#include "fairtt/windowed_filter.hpp"

namespace fairtt {

struct Bbr2Params {
  double startup_pacing_gain = 2.89;
  double drain_pacing_gain = 0.34;
  double cwnd_gain = 2.0;
  double probe_rtt_cwnd_gain = 0.5;
  double refill_pacing_gain = 1.0;
  double up_pacing_gain = 1.25;
  double down_pacing_gain = 0.75;
  double cruise_pacing_gain = 1.0;
  // ProbeBwUp stops once inflight reaches this multiple of the BDP.
  double up_inflight_target = 1.25;
  double startup_growth_target = 1.25;
  int startup_full_bw_rounds = 3;
  double loss_threshold = 0.02;
  double inflight_lo_bdp_fraction = 0.75;
  SimTime probe_rtt_interval = SimTime::seconds(5);
  SimTime probe_rtt_duration = SimTime::millis(200);
  // Refill + Up + Down + Cruise, in units of RTprop.
  double probe_cycle_rtprops = 8.0;
  // BtlBw max-filter length, in probe cycles.
  double max_bw_window_cycles = 2.0;
  int min_cwnd_packets = 4;
  int initial_cwnd_packets = 10;
  // Startup pacing assumes this RTT until the first sample arrives.
  SimTime initial_rtt_guess = SimTime::millis(1);
  // Pacing never drops below this.
  Rate min_pacing_rate = Rate::bps(100000);
};

// Per-flow BBRv2 state.
struct BbrModel {
  explicit BbrModel(const Bbr2Params& params);

  Phase phase = Phase::kStartup;
  SimTime phase_start;
  SimTime cycle_start;

  Rate btlbw;
  SimTime rtprop;
  bool rtprop_valid = false;
  ByteCount bdp;
  ByteCount inflight_cap;
  ByteCount inflight_hi;  // zero while unset
  ByteCount inflight_lo;  // zero while inactive
  SimTime inflight_lo_expires;
  double pacing_gain = 2.89;
  double cwnd_gain = 2.0;

  WindowedMaxFilter max_bw_filter;
  WindowedMinFilter rtprop_filter;
  SimTime last_rtt;
  Rate delivery_rate;
  bool app_limited = false;
  bool probe_rtt_expired = false;

  std::deque<double> startup_growth_history;
  Rate btlbw_at_last_round;
  bool full_bw_reached = false;

  ByteCount bytes_in_flight;
  bool cwnd_limited = false;

  uint64_t round_count = 0;
  ByteCount next_round_delivered;
  bool round_start = false;
  ByteCount round_delivered;
  ByteCount round_lost;
  int up_increment_packets = 1;

  SimTime probe_rtt_entered;
  SimTime probe_rtt_done_at;
};

// A new sample always feeds the windowed max. The windowed max replaces BtlBw
// when the sample reaches the previous BtlBw or is not application-limited.
Rate update_btlbw(BbrModel& m, Rate delivery_rate, bool app_limited, SimTime now);

// Takes the sample when it is no larger than the current RTprop or when
// m.probe_rtt_expired is set. The sample also enters the RTprop filter.
SimTime update_rtprop(BbrModel& m, SimTime last_rtt, SimTime now);

// True when no sample at or below the current RTprop has been seen within the
// RTprop filter window.
bool rtprop_expired(BbrModel& m, SimTime now);

// btlbw * rtprop in whole bytes, rounded down.
ByteCount compute_bdp(Rate btlbw, SimTime rtprop);

struct InflightBounds {
  ByteCount lo;     // floor while active (non-zero)
  ByteCount hi;     // ceiling while set (non-zero)
  ByteCount floor;  // hard minimum, e.g. 4 packets
};

// floor(bdp * cwnd_gain) clamped into [lo, hi], then raised to the floor.
ByteCount compute_inflight_cap(ByteCount bdp, double cwnd_gain, InflightBounds bounds = {});

// Advances the phase machine after a model update.
Phase step_phase(BbrModel& m, const Bbr2Params& params, SimTime now);

// Enters `phase` and applies its gain pair.
void enter_phase(BbrModel& m, const Bbr2Params& params, Phase phase, SimTime now);

// Time between packet departures at `pacing_rate`.
SimTime inter_send_gap(Rate pacing_rate, ByteCount size);

bool can_send(ByteCount bytes_in_flight, ByteCount inflight_cap, ByteCount packet_size,
              SimTime next_send_time, SimTime now);

// Whether (phase, pacing_gain, cwnd_gain) is one of the allowed combinations.
bool gains_consistent(const BbrModel& m, const Bbr2Params& params);

class Bbr2Engine : public CongestionControl {
 public:
  explicit Bbr2Engine(const Bbr2Params& params, bool check_invariants = true);

  const char* name() const override { return "bbrv2"; }
  CcDecision on_ack(const AckSample& ack) override;
  void on_loss(const LossSample& loss) override;
  CcDecision on_timer(SimTime now) override;
  CcDecision decision() const override { return decision_; }
  std::string describe() const override;

  const BbrModel& model() const { return model_; }
  const Bbr2Params& params() const { return params_; }
  uint64_t probe_rtt_visits() const { return probe_rtt_visits_; }

 protected:
  // Runs after the estimators update, before the phase machine steps.
  virtual void observe_ack(const AckSample&) {}
  // BDP used by the phase machine and the inflight cap for this ACK, given
  // btlbw * rtprop. FaiRTT substitutes its adjusted BDP.
  virtual ByteCount adjust_bdp(const AckSample&, ByteCount base) { return base; }

  ByteCount packet_floor() const { return kDataPacketSize * params_.min_cwnd_packets; }

 private:
  void refresh_decision();
  void check_invariants(SimTime now) const;
  void note_phase_change(Phase before, SimTime now);

  Bbr2Params params_;
  bool check_;
  BbrModel model_;
  CcDecision decision_;
  uint64_t probe_rtt_visits_ = 0;
};

}  // namespace fairtt
