// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include "fairtt/congestion_control.hpp"
#include "fairtt/engine.hpp"
#include "fairtt/network.hpp"

namespace fairtt {

struct SenderCounters {
  uint64_t transmissions = 0;
  uint64_t retransmissions = 0;
  uint64_t losses_detected = 0;
  uint64_t timeouts = 0;
};

// Bulk-transfer sender with an unlimited backlog. Transmission is gated by
// the controller's inflight cap and pacing rate; losses are inferred from
// per-packet ACK echoes (three later transmissions acknowledged) or a
// retransmission timeout.
class Sender {
 public:
  static constexpr uint64_t kReorderThreshold = 3;
  static constexpr SimTime kMinRto = SimTime::millis(200);

  Sender(Simulator& sim, Network& network, int flow_id, std::unique_ptr<CongestionControl> cc,
         SimTime start_time);

  void on_ack(const Ack& ack);

  const CongestionControl& cc() const { return *cc_; }
  ByteCount bytes_in_flight() const { return in_flight_; }
  ByteCount delivered() const { return delivered_; }
  const SenderCounters& counters() const { return counters_; }
  SimTime smoothed_rtt() const { return srtt_; }
  // Packets sent and not yet acknowledged or declared lost.
  size_t outstanding() const { return outstanding_.size(); }

 private:
  struct Transmission {
    uint64_t tx_index = 0;
    uint64_t seq = 0;
    ByteCount size;
    bool done = false;
  };

  void start();
  void try_send();
  void transmit(uint64_t seq, bool retransmission);
  void apply(const CcDecision& d);
  void schedule_pacing(SimTime at);
  void arm_probe_rtt_timer();
  void arm_rto();
  void on_rto_timer();
  ByteCount declare_lost(Transmission& t);
  void trim_front();
  bool seq_acked(uint64_t seq) const { return seq < acked_.size() && acked_[seq]; }
  void mark_acked(uint64_t seq);
  SimTime rto() const;

  Simulator& sim_;
  Network& network_;
  int flow_id_;
  std::unique_ptr<CongestionControl> cc_;
  CcDecision decision_;

  uint64_t next_seq_ = 1;
  uint64_t next_tx_index_ = 0;
  std::deque<Transmission> outstanding_;  // by tx_index; front index = base_tx_
  uint64_t base_tx_ = 0;
  std::vector<bool> acked_;
  std::deque<uint64_t> retransmit_queue_;
  uint64_t largest_acked_tx_ = 0;
  bool any_acked_ = false;

  ByteCount in_flight_;
  ByteCount delivered_;
  SimTime next_send_time_;
  bool app_limited_ = false;

  bool pacing_pending_ = false;
  SimTime probe_rtt_timer_at_;
  bool probe_rtt_pending_ = false;

  SimTime srtt_;
  SimTime last_progress_;
  bool rto_pending_ = false;

  SenderCounters counters_;
};

}  // namespace fairtt
