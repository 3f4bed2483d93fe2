// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fairtt/units.hpp"

namespace fairtt {

enum class EventKind : uint8_t {
  kPacketArrival,
  kPacketDeparture,
  kAckArrival,
  kPacingTimer,
  kProbeRttTimer,
  kWindowRollover,
  kMetricsSample,
  kRetransmitTimer,
};

const char* to_string(EventKind kind);

// Identifies one scheduled event; permits cancellation.
struct EventHandle {
  uint64_t seq = UINT64_MAX;
  bool valid() const { return seq != UINT64_MAX; }
};

struct TraceRecord {
  EventKind kind;
  SimTime fire_at;
  uint64_t seq;
  bool operator==(const TraceRecord&) const = default;
};

// Deterministic discrete-event scheduler. Events with equal fire times run in
// insertion order. Single-threaded; one instance per run.
class Simulator {
 public:
  using Handler = std::function<void()>;

  Simulator();

  SimTime now() const { return now_; }

  // Throws InvariantViolation if `fire_at` is in the past.
  EventHandle schedule(SimTime fire_at, EventKind kind, int flow_id, Handler handler);
  EventHandle schedule_in(SimTime delay, EventKind kind, int flow_id, Handler handler) {
    return schedule(now_ + delay, kind, flow_id, std::move(handler));
  }

  // True iff the event had not yet fired or been cancelled.
  bool cancel(EventHandle handle);

  // Processes every event with fire_at <= end, then sets the clock to `end`.
  SimTime run_until(SimTime end);

  uint64_t processed_count() const { return processed_; }
  // Pending, non-cancelled events of the given kind tagged with `flow_id`.
  int64_t pending_count(EventKind kind, int flow_id) const;

  // Rolling FNV-1a digest over (kind, fire_at, seq) of every processed event.
  uint64_t trace_digest() const { return digest_; }
  void set_record_trace(bool on) { record_trace_ = on; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  // Most recent processed events, oldest first, for diagnostics.
  std::vector<TraceRecord> trace_tail() const;

 private:
  struct Entry {
    SimTime fire_at;
    uint64_t seq;
    EventKind kind;
    int flow_id;
    Handler handler;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };
  enum class Slot : uint8_t { kPending, kDone, kCancelled };

  void record(const TraceRecord& r);

  SimTime now_;
  uint64_t next_seq_ = 0;
  uint64_t processed_ = 0;
  std::vector<Entry> heap_;
  std::vector<Slot> slots_;
  uint64_t digest_;
  bool record_trace_ = false;
  std::vector<TraceRecord> trace_;
  static constexpr size_t kTailSize = 32;
  std::vector<TraceRecord> tail_;
  size_t tail_pos_ = 0;
};

// Seeded generator. The engine is std::mt19937_64, whose output sequence is
// fixed by the C++ standard; draws are converted to doubles with our own
// 53-bit mapping so results do not depend on the library's distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed), seed_(seed) {}

  // Sub-stream seed for a labelled component ("link:bottleneck", "flow:3").
  static uint64_t derive_seed(uint64_t master, std::string_view label);

  uint64_t seed() const { return seed_; }
  uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // No draw is consumed for p <= 0 or p >= 1.
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
  uint64_t seed_;
};

}  // namespace fairtt
