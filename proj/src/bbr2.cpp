// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/bbr2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fairtt/errors.hpp"

namespace fairtt {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::kStartup: return "Startup";
    case Phase::kDrain: return "Drain";
    case Phase::kProbeBwRefill: return "ProbeBwRefill";
    case Phase::kProbeBwUp: return "ProbeBwUp";
    case Phase::kProbeBwDown: return "ProbeBwDown";
    case Phase::kProbeBwCruise: return "ProbeBwCruise";
    case Phase::kProbeRtt: return "ProbeRtt";
  }
  return "?";
}

BbrModel::BbrModel(const Bbr2Params& params)
    : pacing_gain(params.startup_pacing_gain),
      cwnd_gain(params.cwnd_gain),
      max_bw_filter(SimTime::seconds(1)),
      rtprop_filter(params.probe_rtt_interval) {}

Rate update_btlbw(BbrModel& m, Rate delivery_rate, bool app_limited, SimTime now) {
  m.max_bw_filter.update(delivery_rate, now);
  const Rate max_bw = m.max_bw_filter.current(now).value_or(delivery_rate);
  m.delivery_rate = delivery_rate;
  m.app_limited = app_limited;
  if (delivery_rate >= m.btlbw || !app_limited) m.btlbw = max_bw;
  return m.btlbw;
}

SimTime update_rtprop(BbrModel& m, SimTime last_rtt, SimTime now) {
  m.last_rtt = last_rtt;
  if (!m.rtprop_valid || (last_rtt.ns() >= 0 && last_rtt <= m.rtprop) || m.probe_rtt_expired) {
    m.rtprop = last_rtt;
    m.rtprop_valid = true;
  }
  m.rtprop_filter.update(last_rtt, now);
  return m.rtprop;
}

bool rtprop_expired(BbrModel& m, SimTime now) {
  if (!m.rtprop_valid) return false;
  const auto best = m.rtprop_filter.current(now);
  return !best || *best > m.rtprop;
}

ByteCount compute_bdp(Rate btlbw, SimTime rtprop) { return btlbw.bytes_over(rtprop); }

ByteCount compute_inflight_cap(ByteCount bdp, double cwnd_gain, InflightBounds bounds) {
  ByteCount cap = bdp.scaled_down(cwnd_gain);
  if (bounds.hi.bytes() > 0) cap = std::min(cap, bounds.hi);
  if (bounds.lo.bytes() > 0) cap = std::max(cap, bounds.lo);
  return std::max(cap, bounds.floor);
}

SimTime inter_send_gap(Rate pacing_rate, ByteCount size) {
  return pacing_rate.transfer_time(size);
}

bool can_send(ByteCount bytes_in_flight, ByteCount inflight_cap, ByteCount packet_size,
              SimTime next_send_time, SimTime now) {
  return bytes_in_flight + packet_size <= inflight_cap && now >= next_send_time;
}

void enter_phase(BbrModel& m, const Bbr2Params& params, Phase phase, SimTime now) {
  m.phase = phase;
  m.phase_start = now;
  m.cwnd_gain = params.cwnd_gain;
  switch (phase) {
    case Phase::kStartup:
      m.pacing_gain = params.startup_pacing_gain;
      break;
    case Phase::kDrain:
      m.pacing_gain = params.drain_pacing_gain;
      break;
    case Phase::kProbeBwRefill:
      m.pacing_gain = params.refill_pacing_gain;
      m.cycle_start = now;
      m.inflight_lo = ByteCount::zero();
      m.up_increment_packets = 1;
      break;
    case Phase::kProbeBwUp:
      m.pacing_gain = params.up_pacing_gain;
      break;
    case Phase::kProbeBwDown:
      m.pacing_gain = params.down_pacing_gain;
      break;
    case Phase::kProbeBwCruise:
      m.pacing_gain = params.cruise_pacing_gain;
      break;
    case Phase::kProbeRtt:
      m.pacing_gain = 1.0;
      m.cwnd_gain = params.probe_rtt_cwnd_gain;
      m.inflight_lo = ByteCount::zero();
      m.probe_rtt_entered = now;
      m.probe_rtt_done_at = now + params.probe_rtt_duration;
      break;
  }
}

namespace {

bool round_loss_exceeded(const BbrModel& m, double threshold) {
  if (m.round_lost.bytes() <= 0) return false;
  const double total = static_cast<double>(m.round_lost.bytes() + m.round_delivered.bytes());
  return static_cast<double>(m.round_lost.bytes()) > threshold * total;
}

SimTime cycle_length(const BbrModel& m, const Bbr2Params& params) {
  return m.rtprop.scaled(params.probe_cycle_rtprops);
}

}  // namespace

Phase step_phase(BbrModel& m, const Bbr2Params& params, SimTime now) {
  if (m.phase == Phase::kProbeRtt) {
    if (now >= m.probe_rtt_done_at) {
      enter_phase(m, params, m.full_bw_reached ? Phase::kProbeBwCruise : Phase::kStartup, now);
      m.cycle_start = now;
    }
    return m.phase;
  }
  if (m.probe_rtt_expired) {
    enter_phase(m, params, Phase::kProbeRtt, now);
    return m.phase;
  }

  switch (m.phase) {
    case Phase::kStartup: {
      if (!m.round_start) break;
      if (round_loss_exceeded(m, params.loss_threshold)) {
        m.full_bw_reached = true;
        m.inflight_hi = std::max(m.bdp, m.bytes_in_flight);
        enter_phase(m, params, Phase::kDrain, now);
        break;
      }
      const double ratio =
          m.btlbw_at_last_round.is_zero()
              ? std::numeric_limits<double>::infinity()
              : static_cast<double>(m.btlbw.bps()) /
                    static_cast<double>(m.btlbw_at_last_round.bps());
      m.btlbw_at_last_round = m.btlbw;
      m.startup_growth_history.push_back(ratio);
      while (m.startup_growth_history.size() >
             static_cast<size_t>(params.startup_full_bw_rounds)) {
        m.startup_growth_history.pop_front();
      }
      const bool stalled =
          m.startup_growth_history.size() == static_cast<size_t>(params.startup_full_bw_rounds) &&
          std::all_of(m.startup_growth_history.begin(), m.startup_growth_history.end(),
                      [&](double r) { return r < params.startup_growth_target; });
      if (stalled) {
        m.full_bw_reached = true;
        enter_phase(m, params, Phase::kDrain, now);
      }
      break;
    }
    case Phase::kDrain:
      if (m.bytes_in_flight <= m.bdp) enter_phase(m, params, Phase::kProbeBwRefill, now);
      break;
    case Phase::kProbeBwRefill:
      if (now - m.phase_start >= m.rtprop) enter_phase(m, params, Phase::kProbeBwUp, now);
      break;
    case Phase::kProbeBwUp: {
      if (round_loss_exceeded(m, params.loss_threshold)) {
        m.inflight_hi = std::max(m.bytes_in_flight, kDataPacketSize * params.min_cwnd_packets);
        enter_phase(m, params, Phase::kProbeBwDown, now);
        break;
      }
      const bool full_length = now - m.phase_start >= m.rtprop;
      const bool at_target =
          m.bytes_in_flight >= m.bdp.scaled_down(params.up_inflight_target) || m.cwnd_limited;
      if (full_length && at_target) {
        enter_phase(m, params, Phase::kProbeBwDown, now);
      } else if (m.round_start && m.cwnd_limited && m.inflight_hi.bytes() > 0) {
        m.inflight_hi += kDataPacketSize * m.up_increment_packets;
        m.up_increment_packets = std::min(m.up_increment_packets * 2, 64);
      }
      break;
    }
    case Phase::kProbeBwDown:
      if (m.bytes_in_flight < m.bdp) {
        enter_phase(m, params, Phase::kProbeBwCruise, now);
      } else if (now - m.cycle_start >= cycle_length(m, params)) {
        enter_phase(m, params, Phase::kProbeBwRefill, now);
      }
      break;
    case Phase::kProbeBwCruise:
      if (now - m.cycle_start >= cycle_length(m, params)) {
        enter_phase(m, params, Phase::kProbeBwRefill, now);
      }
      break;
    case Phase::kProbeRtt:
      break;
  }
  return m.phase;
}

bool gains_consistent(const BbrModel& m, const Bbr2Params& params) {
  auto is = [&](double pacing, double cwnd) {
    return m.pacing_gain == pacing && m.cwnd_gain == cwnd;
  };
  switch (m.phase) {
    case Phase::kStartup: return is(params.startup_pacing_gain, params.cwnd_gain);
    case Phase::kDrain: return is(params.drain_pacing_gain, params.cwnd_gain);
    case Phase::kProbeBwRefill: return is(params.refill_pacing_gain, params.cwnd_gain);
    case Phase::kProbeBwUp: return is(params.up_pacing_gain, params.cwnd_gain);
    case Phase::kProbeBwDown: return is(params.down_pacing_gain, params.cwnd_gain);
    case Phase::kProbeBwCruise: return is(params.cruise_pacing_gain, params.cwnd_gain);
    case Phase::kProbeRtt: return is(1.0, params.probe_rtt_cwnd_gain);
  }
  return false;
}

Bbr2Engine::Bbr2Engine(const Bbr2Params& params, bool check_invariants)
    : params_(params), check_(check_invariants), model_(params) {
  refresh_decision();
}

CcDecision Bbr2Engine::on_ack(const AckSample& ack) {
  BbrModel& m = model_;
  const SimTime now = ack.now;
  m.bytes_in_flight = ack.bytes_in_flight;
  m.cwnd_limited = ack.prior_in_flight + kDataPacketSize > decision_.inflight_cap;

  m.round_start = false;
  if (ack.echo_delivered >= m.next_round_delivered) {
    m.next_round_delivered = ack.delivered;
    ++m.round_count;
    m.round_start = true;
  }
  m.round_delivered += ack.newly_acked;
  if (m.inflight_lo.bytes() > 0 && now >= m.inflight_lo_expires) {
    m.inflight_lo = ByteCount::zero();
  }

  if (ack.newly_acked.bytes() > 0) {
    const Rate sample =
        Rate::from_bytes_per(ack.delivered - ack.echo_delivered, now - ack.echo_sent_at);
    update_btlbw(m, sample, ack.echo_app_limited, now);
  }
  m.probe_rtt_expired = rtprop_expired(m, now);
  update_rtprop(m, ack.last_rtt, now);
  m.max_bw_filter.set_window_length(
      m.rtprop.scaled(params_.probe_cycle_rtprops * params_.max_bw_window_cycles));
  m.bdp = compute_bdp(m.btlbw, m.rtprop);

  observe_ack(ack);
  m.bdp = adjust_bdp(ack, m.bdp);

  const Phase before = m.phase;
  step_phase(m, params_, now);
  note_phase_change(before, now);
  refresh_decision();

  if (m.round_start) {
    m.round_delivered = ByteCount::zero();
    m.round_lost = ByteCount::zero();
  }
  if (check_) check_invariants(now);
  return decision_;
}

void Bbr2Engine::on_loss(const LossSample& loss) {
  BbrModel& m = model_;
  m.round_lost += loss.lost;
  m.bytes_in_flight = loss.bytes_in_flight;
  if (m.phase == Phase::kProbeBwCruise) {
    m.inflight_lo = std::max(m.bytes_in_flight, m.bdp.scaled_down(params_.inflight_lo_bdp_fraction));
    m.inflight_lo_expires = loss.now + m.rtprop;
  }
}

CcDecision Bbr2Engine::on_timer(SimTime now) {
  const Phase before = model_.phase;
  if (before == Phase::kProbeRtt && now >= model_.probe_rtt_done_at) {
    step_phase(model_, params_, now);
    note_phase_change(before, now);
    refresh_decision();
    if (check_) check_invariants(now);
  }
  return decision_;
}

void Bbr2Engine::note_phase_change(Phase before, SimTime now) {
  if (before == model_.phase) return;
  if (model_.phase == Phase::kProbeRtt) ++probe_rtt_visits_;
  if (check_ && before == Phase::kProbeRtt) {
    const SimTime spent = now - model_.probe_rtt_entered;
    if (spent != params_.probe_rtt_duration) {
      std::ostringstream os;
      os << "ProbeRtt lasted " << spent.ns() << "ns; " << describe();
      throw InvariantViolation(os.str());
    }
  }
}

void Bbr2Engine::refresh_decision() {
  BbrModel& m = model_;
  const ByteCount initial = kDataPacketSize * params_.initial_cwnd_packets;
  ByteCount cap = compute_inflight_cap(m.bdp, m.cwnd_gain,
                                       InflightBounds{m.inflight_lo, m.inflight_hi, packet_floor()});
  if (m.phase == Phase::kStartup || !m.rtprop_valid) cap = std::max(cap, initial);

  Rate pacing;
  if (m.btlbw.is_zero()) {
    pacing = Rate::from_bytes_per(initial, params_.initial_rtt_guess).scaled(m.pacing_gain);
  } else {
    pacing = m.btlbw.scaled(m.pacing_gain);
  }
  pacing = std::max(pacing, params_.min_pacing_rate);

  m.inflight_cap = cap;
  decision_ = CcDecision{pacing, cap, m.phase,
                         m.phase == Phase::kProbeRtt ? m.probe_rtt_done_at : SimTime::zero()};
}

void Bbr2Engine::check_invariants(SimTime now) const {
  (void)now;
  const BbrModel& m = model_;
  if (!gains_consistent(m, params_)) {
    throw InvariantViolation("gain schedule violated: " + describe());
  }
  if (m.inflight_lo.bytes() > 0 && m.inflight_lo > m.inflight_cap) {
    throw InvariantViolation("inflight_lo above inflight cap: " + describe());
  }
}

std::string Bbr2Engine::describe() const {
  const BbrModel& m = model_;
  std::ostringstream os;
  os << name() << "{phase=" << to_string(m.phase) << " btlbw=" << m.btlbw
     << " rtprop=" << m.rtprop << " bdp=" << m.bdp << " cap=" << m.inflight_cap
     << " inflight=" << m.bytes_in_flight << " hi=" << m.inflight_hi << " lo=" << m.inflight_lo
     << " pacing_gain=" << m.pacing_gain << " cwnd_gain=" << m.cwnd_gain
     << " last_rtt=" << m.last_rtt << " round=" << m.round_count << "}";
  return os.str();
}

}  // namespace fairtt
