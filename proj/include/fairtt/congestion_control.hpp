// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "fairtt/network.hpp"
#include "fairtt/units.hpp"

namespace fairtt {

enum class Phase {
  kStartup,
  kDrain,
  kProbeBwRefill,
  kProbeBwUp,
  kProbeBwDown,
  kProbeBwCruise,
  kProbeRtt,
};

const char* to_string(Phase p);
inline bool is_probe_bw(Phase p) {
  return p == Phase::kProbeBwRefill || p == Phase::kProbeBwUp || p == Phase::kProbeBwDown ||
         p == Phase::kProbeBwCruise;
}

// Everything a congestion controller learns from one ACK.
struct AckSample {
  SimTime now;
  ByteCount newly_acked;
  ByteCount delivered;       // sender total after this ACK
  ByteCount echo_delivered;  // sender total when the acked packet left
  SimTime echo_sent_at;
  bool echo_app_limited = false;
  ByteCount prior_in_flight;
  ByteCount bytes_in_flight;  // after this ACK and any losses it revealed
  SimTime last_rtt;
  PathSummary path;
};

struct LossSample {
  SimTime now;
  ByteCount lost;
  ByteCount bytes_in_flight;
};

struct CcDecision {
  Rate pacing_rate;
  ByteCount inflight_cap;
  Phase phase = Phase::kStartup;
  // Set while in ProbeRtt: when the phase ends.
  SimTime probe_rtt_until;
};

class CongestionControl {
 public:
  virtual ~CongestionControl() = default;

  virtual const char* name() const = 0;
  virtual CcDecision on_ack(const AckSample& ack) = 0;
  virtual void on_loss(const LossSample& loss) = 0;
  virtual CcDecision on_timer(SimTime now) = 0;
  virtual CcDecision decision() const = 0;
  // Value the sender stamps into outgoing packets for the bottleneck tally.
  virtual SimTime rtt_report() const { return SimTime::zero(); }
  virtual std::string describe() const = 0;
};

}  // namespace fairtt
