// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/units.hpp"

#include <cmath>

namespace fairtt {

namespace {
using u128 = unsigned __int128;
constexpr int64_t kNanosPerSecond = 1000000000;
}  // namespace

SimTime SimTime::from_seconds(double s) {
  return SimTime(static_cast<int64_t>(std::llround(s * 1e9)));
}

SimTime SimTime::scaled(double k) const {
  return SimTime(static_cast<int64_t>(std::llround(static_cast<double>(ns_) * k)));
}

ByteCount ByteCount::scaled_down(double k) const {
  return ByteCount(static_cast<int64_t>(std::floor(static_cast<double>(bytes_) * k)));
}

Rate Rate::from_mbps(double v) {
  return Rate(static_cast<int64_t>(std::llround(v * 1e6)));
}

Rate Rate::scaled(double gain) const {
  return Rate(static_cast<int64_t>(std::floor(static_cast<double>(bps_) * gain)));
}

ByteCount Rate::bytes_over(SimTime t) const {
  if (bps_ <= 0 || t.ns() <= 0) return ByteCount(0);
  const u128 bits = static_cast<u128>(bps_) * static_cast<u128>(t.ns());
  return ByteCount(static_cast<int64_t>(bits / (u128{8} * kNanosPerSecond)));
}

SimTime Rate::transfer_time(ByteCount b) const {
  if (bps_ <= 0) return SimTime::infinite();
  if (b.bytes() <= 0) return SimTime::zero();
  const u128 num = static_cast<u128>(b.bits()) * kNanosPerSecond;
  const u128 den = static_cast<u128>(bps_);
  return SimTime::nanos(static_cast<int64_t>((num + den - 1) / den));
}

Rate Rate::from_bytes_per(ByteCount b, SimTime t) {
  if (t.ns() <= 0 || b.bytes() <= 0) return Rate(0);
  const u128 num = static_cast<u128>(b.bits()) * kNanosPerSecond;
  return Rate(static_cast<int64_t>(num / static_cast<u128>(t.ns())));
}

std::ostream& operator<<(std::ostream& os, SimTime t) {
  return os << t.to_millis() << "ms";
}
std::ostream& operator<<(std::ostream& os, ByteCount b) {
  return os << b.bytes() << "B";
}
std::ostream& operator<<(std::ostream& os, Rate r) {
  return os << r.to_mbps() << "Mbps";
}

}  // namespace fairtt
