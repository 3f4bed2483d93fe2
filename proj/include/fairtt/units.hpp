// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>

namespace fairtt {

// Simulation time. Nanosecond ticks; all clock arithmetic is integer.
class SimTime {
 public:
  constexpr SimTime() = default;
  static constexpr SimTime nanos(int64_t ns) { return SimTime(ns); }
  static constexpr SimTime micros(int64_t us) { return SimTime(us * 1000); }
  static constexpr SimTime millis(int64_t ms) { return SimTime(ms * 1000000); }
  static constexpr SimTime seconds(int64_t s) { return SimTime(s * 1000000000); }
  // Rounds to the nearest nanosecond. Used only at config-parse time.
  static SimTime from_seconds(double s);
  static SimTime from_millis(double ms) { return from_seconds(ms / 1e3); }
  static constexpr SimTime zero() { return SimTime(0); }
  static constexpr SimTime infinite() {
    return SimTime(std::numeric_limits<int64_t>::max());
  }

  constexpr int64_t ns() const { return ns_; }
  constexpr double to_seconds() const { return static_cast<double>(ns_) / 1e9; }
  constexpr double to_millis() const { return static_cast<double>(ns_) / 1e6; }
  constexpr bool is_zero() const { return ns_ == 0; }

  constexpr auto operator<=>(const SimTime&) const = default;
  constexpr SimTime operator+(SimTime o) const { return SimTime(ns_ + o.ns_); }
  constexpr SimTime operator-(SimTime o) const { return SimTime(ns_ - o.ns_); }
  constexpr SimTime& operator+=(SimTime o) { ns_ += o.ns_; return *this; }
  constexpr SimTime& operator-=(SimTime o) { ns_ -= o.ns_; return *this; }
  constexpr SimTime operator*(int64_t k) const { return SimTime(ns_ * k); }
  constexpr SimTime operator/(int64_t k) const { return SimTime(ns_ / k); }
  // Scales by a ratio, rounding to the nearest tick.
  SimTime scaled(double k) const;

 private:
  constexpr explicit SimTime(int64_t ns) : ns_(ns) {}
  int64_t ns_ = 0;
};

// Volume in bytes.
class ByteCount {
 public:
  constexpr ByteCount() = default;
  constexpr explicit ByteCount(int64_t bytes) : bytes_(bytes) {}
  static constexpr ByteCount zero() { return ByteCount(0); }

  constexpr int64_t bytes() const { return bytes_; }
  constexpr int64_t bits() const { return bytes_ * 8; }

  constexpr auto operator<=>(const ByteCount&) const = default;
  constexpr ByteCount operator+(ByteCount o) const { return ByteCount(bytes_ + o.bytes_); }
  constexpr ByteCount operator-(ByteCount o) const { return ByteCount(bytes_ - o.bytes_); }
  constexpr ByteCount& operator+=(ByteCount o) { bytes_ += o.bytes_; return *this; }
  constexpr ByteCount& operator-=(ByteCount o) { bytes_ -= o.bytes_; return *this; }
  constexpr ByteCount operator*(int64_t k) const { return ByteCount(bytes_ * k); }
  // floor(bytes * k)
  ByteCount scaled_down(double k) const;

 private:
  int64_t bytes_ = 0;
};

// Bandwidth in bits per second.
class Rate {
 public:
  constexpr Rate() = default;
  static constexpr Rate bps(int64_t v) { return Rate(v); }
  static constexpr Rate mbps(int64_t v) { return Rate(v * 1000000); }
  static Rate from_mbps(double v);
  static constexpr Rate zero() { return Rate(0); }

  constexpr int64_t bps() const { return bps_; }
  constexpr double to_mbps() const { return static_cast<double>(bps_) / 1e6; }
  constexpr bool is_zero() const { return bps_ == 0; }

  constexpr auto operator<=>(const Rate&) const = default;
  constexpr Rate operator+(Rate o) const { return Rate(bps_ + o.bps_); }
  // floor(bps * gain)
  Rate scaled(double gain) const;

  // Volume moved at this rate over `t`, rounded down to whole bytes.
  ByteCount bytes_over(SimTime t) const;
  // Time to move `b` at this rate, rounded up to the next tick. Infinite for
  // a zero rate.
  SimTime transfer_time(ByteCount b) const;
  // Rate that moves `b` in `t`, rounded down. Zero when t <= 0.
  static Rate from_bytes_per(ByteCount b, SimTime t);

 private:
  constexpr explicit Rate(int64_t bps) : bps_(bps) {}
  int64_t bps_ = 0;
};

std::ostream& operator<<(std::ostream& os, SimTime t);
std::ostream& operator<<(std::ostream& os, ByteCount b);
std::ostream& operator<<(std::ostream& os, Rate r);

inline constexpr ByteCount kDataPacketSize{1000};

}  // namespace fairtt
