// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/engine.hpp"

#include <algorithm>
#include <sstream>

#include "fairtt/errors.hpp"

namespace fairtt {

namespace {
constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

uint64_t fnv_mix(uint64_t h, uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kPacketArrival: return "PacketArrival";
    case EventKind::kPacketDeparture: return "PacketDeparture";
    case EventKind::kAckArrival: return "AckArrival";
    case EventKind::kPacingTimer: return "PacingTimer";
    case EventKind::kProbeRttTimer: return "ProbeRttTimer";
    case EventKind::kWindowRollover: return "WindowRollover";
    case EventKind::kMetricsSample: return "MetricsSample";
    case EventKind::kRetransmitTimer: return "RetransmitTimer";
  }
  return "?";
}

Simulator::Simulator() : digest_(kFnvOffset) { tail_.reserve(kTailSize); }

EventHandle Simulator::schedule(SimTime fire_at, EventKind kind, int flow_id,
                                Handler handler) {
  if (fire_at < now_) {
    std::ostringstream os;
    os << "schedule in the past: " << to_string(kind) << " at " << fire_at.ns()
       << "ns, clock " << now_.ns() << "ns";
    throw InvariantViolation(os.str());
  }
  const uint64_t seq = next_seq_++;
  slots_.push_back(Slot::kPending);
  heap_.push_back(Entry{fire_at, seq, kind, flow_id, std::move(handler)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return EventHandle{seq};
}

bool Simulator::cancel(EventHandle handle) {
  if (!handle.valid() || handle.seq >= slots_.size()) return false;
  if (slots_[handle.seq] != Slot::kPending) return false;
  slots_[handle.seq] = Slot::kCancelled;
  return true;
}

SimTime Simulator::run_until(SimTime end) {
  if (end < now_) {
    throw InvariantViolation("run_until target precedes the clock");
  }
  while (!heap_.empty() && heap_.front().fire_at <= end) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    if (slots_[e.seq] != Slot::kPending) continue;
    slots_[e.seq] = Slot::kDone;
    if (e.fire_at < now_) throw InvariantViolation("clock moved backwards");
    now_ = e.fire_at;
    ++processed_;
    record(TraceRecord{e.kind, e.fire_at, e.seq});
    e.handler();
  }
  now_ = end;
  return now_;
}

int64_t Simulator::pending_count(EventKind kind, int flow_id) const {
  int64_t n = 0;
  for (const Entry& e : heap_) {
    if (e.kind == kind && e.flow_id == flow_id && slots_[e.seq] == Slot::kPending) ++n;
  }
  return n;
}

void Simulator::record(const TraceRecord& r) {
  digest_ = fnv_mix(digest_, static_cast<uint64_t>(r.kind));
  digest_ = fnv_mix(digest_, static_cast<uint64_t>(r.fire_at.ns()));
  digest_ = fnv_mix(digest_, r.seq);
  if (record_trace_) trace_.push_back(r);
  if (tail_.size() < kTailSize) {
    tail_.push_back(r);
  } else {
    tail_[tail_pos_] = r;
  }
  tail_pos_ = (tail_pos_ + 1) % kTailSize;
}

std::vector<TraceRecord> Simulator::trace_tail() const {
  if (tail_.size() < kTailSize) return tail_;
  std::vector<TraceRecord> out;
  out.reserve(kTailSize);
  for (size_t i = 0; i < kTailSize; ++i) out.push_back(tail_[(tail_pos_ + i) % kTailSize]);
  return out;
}

uint64_t Rng::derive_seed(uint64_t master, std::string_view label) {
  uint64_t h = kFnvOffset;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return splitmix64(master ^ splitmix64(h));
}

bool Rng::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01() < p;
}

}  // namespace fairtt
