// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/sender.hpp"

#include <algorithm>
#include <sstream>

#include "fairtt/bbr2.hpp"
#include "fairtt/errors.hpp"

namespace fairtt {

Sender::Sender(Simulator& sim, Network& network, int flow_id,
               std::unique_ptr<CongestionControl> cc, SimTime start_time)
    : sim_(sim), network_(network), flow_id_(flow_id), cc_(std::move(cc)) {
  decision_ = cc_->decision();
  next_send_time_ = start_time;
  sim_.schedule(start_time, EventKind::kPacingTimer, flow_id_, [this] { start(); });
}

void Sender::start() {
  last_progress_ = sim_.now();
  try_send();
}

void Sender::apply(const CcDecision& d) {
  decision_ = d;
  if (d.phase == Phase::kProbeRtt) arm_probe_rtt_timer();
}

void Sender::arm_probe_rtt_timer() {
  if (probe_rtt_pending_ && probe_rtt_timer_at_ == decision_.probe_rtt_until) return;
  probe_rtt_pending_ = true;
  probe_rtt_timer_at_ = decision_.probe_rtt_until;
  sim_.schedule(probe_rtt_timer_at_, EventKind::kProbeRttTimer, flow_id_, [this] {
    probe_rtt_pending_ = false;
    apply(cc_->on_timer(sim_.now()));
    try_send();
  });
}

void Sender::schedule_pacing(SimTime at) {
  if (pacing_pending_) return;
  pacing_pending_ = true;
  sim_.schedule(at, EventKind::kPacingTimer, flow_id_, [this] {
    pacing_pending_ = false;
    try_send();
  });
}

void Sender::try_send() {
  const SimTime now = sim_.now();
  while (true) {
    if (in_flight_ + kDataPacketSize > decision_.inflight_cap) return;  // wait for ACKs
    if (next_send_time_ > now) {
      schedule_pacing(next_send_time_);
      return;
    }
    while (!retransmit_queue_.empty() && seq_acked(retransmit_queue_.front())) {
      retransmit_queue_.pop_front();
    }
    if (!retransmit_queue_.empty()) {
      const uint64_t seq = retransmit_queue_.front();
      retransmit_queue_.pop_front();
      transmit(seq, true);
    } else {
      transmit(next_seq_++, false);
    }
  }
}

void Sender::transmit(uint64_t seq, bool retransmission) {
  const SimTime now = sim_.now();
  if (!can_send(in_flight_, decision_.inflight_cap, kDataPacketSize, next_send_time_, now)) {
    std::ostringstream os;
    os << "flow " << flow_id_ << " send beyond inflight cap: inflight=" << in_flight_
       << " cap=" << decision_.inflight_cap;
    throw InvariantViolation(os.str());
  }
  Packet p;
  p.flow_id = flow_id_;
  p.seq = seq;
  p.tx_index = next_tx_index_++;
  p.size = kDataPacketSize;
  p.sent_at = now;
  p.delivered_so_far = delivered_;
  p.app_limited_at_send = app_limited_;
  p.retransmission = retransmission;
  p.rtt_report = cc_->rtt_report();

  if (outstanding_.empty()) base_tx_ = p.tx_index;
  outstanding_.push_back(Transmission{p.tx_index, seq, p.size, false});
  in_flight_ += p.size;
  ++counters_.transmissions;
  if (retransmission) ++counters_.retransmissions;
  next_send_time_ = now + inter_send_gap(decision_.pacing_rate, p.size);
  network_.send(p);
  arm_rto();
}

void Sender::mark_acked(uint64_t seq) {
  if (seq >= acked_.size()) acked_.resize(std::max<size_t>(seq + 1, acked_.size() * 2), false);
  acked_[seq] = true;
}

ByteCount Sender::declare_lost(Transmission& t) {
  t.done = true;
  in_flight_ -= t.size;
  ++counters_.losses_detected;
  if (!seq_acked(t.seq)) retransmit_queue_.push_back(t.seq);
  return t.size;
}

void Sender::trim_front() {
  while (!outstanding_.empty() && outstanding_.front().done) {
    outstanding_.pop_front();
    ++base_tx_;
  }
}

void Sender::on_ack(const Ack& ack) {
  const SimTime now = sim_.now();
  const ByteCount prior_in_flight = in_flight_;
  ByteCount newly_acked;

  if (ack.acked_tx_index >= base_tx_ && ack.acked_tx_index - base_tx_ < outstanding_.size()) {
    Transmission& t = outstanding_[ack.acked_tx_index - base_tx_];
    if (!t.done) {
      t.done = true;
      in_flight_ -= t.size;
    }
  }
  if (!seq_acked(ack.acked_seq)) {
    mark_acked(ack.acked_seq);
    delivered_ += kDataPacketSize;
    newly_acked = kDataPacketSize;
    last_progress_ = now;
  }
  if (!any_acked_ || ack.acked_tx_index > largest_acked_tx_) {
    largest_acked_tx_ = ack.acked_tx_index;
    any_acked_ = true;
  }

  ByteCount lost;
  for (Transmission& t : outstanding_) {
    if (t.tx_index + kReorderThreshold > largest_acked_tx_) break;
    if (t.done) continue;
    if (seq_acked(t.seq)) {
      t.done = true;
      in_flight_ -= t.size;
      continue;
    }
    lost += declare_lost(t);
  }
  trim_front();

  const SimTime rtt = now - ack.echo_sent_at;
  srtt_ = srtt_.is_zero() ? rtt : SimTime::nanos((srtt_.ns() * 7 + rtt.ns()) / 8);

  if (lost.bytes() > 0) cc_->on_loss(LossSample{now, lost, in_flight_});
  AckSample s;
  s.now = now;
  s.newly_acked = newly_acked;
  s.delivered = delivered_;
  s.echo_delivered = ack.echo_delivered;
  s.echo_sent_at = ack.echo_sent_at;
  s.echo_app_limited = ack.echo_app_limited;
  s.prior_in_flight = prior_in_flight;
  s.bytes_in_flight = in_flight_;
  s.last_rtt = rtt;
  s.path = ack.path;
  apply(cc_->on_ack(s));
  try_send();
}

SimTime Sender::rto() const {
  if (srtt_.is_zero()) return SimTime::seconds(1);
  return std::max(srtt_ * 2, kMinRto);
}

void Sender::arm_rto() {
  if (rto_pending_) return;
  rto_pending_ = true;
  sim_.schedule(std::max(last_progress_ + rto(), sim_.now()), EventKind::kRetransmitTimer,
                flow_id_, [this] { on_rto_timer(); });
}

void Sender::on_rto_timer() {
  rto_pending_ = false;
  if (outstanding_.empty()) return;
  const SimTime now = sim_.now();
  const SimTime deadline = last_progress_ + rto();
  if (now < deadline) {
    arm_rto();
    return;
  }
  ++counters_.timeouts;
  ByteCount lost;
  for (Transmission& t : outstanding_) {
    if (!t.done) lost += declare_lost(t);
  }
  trim_front();
  last_progress_ = now;
  if (lost.bytes() > 0) cc_->on_loss(LossSample{now, lost, in_flight_});
  try_send();
  if (!outstanding_.empty()) arm_rto();
}

}  // namespace fairtt
