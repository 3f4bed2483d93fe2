// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>
#include <functional>
#include <optional>

#include "fairtt/units.hpp"

namespace fairtt {

// Sliding-window extremum over time-stamped samples. A sample taken at `at`
// is in the window at time `now` iff at > now - window_length.
//
// Retained samples form a monotonic deque: no sample is kept when a newer
// sample is at least as good, so the front is always the answer once expired
// samples are evicted. Sample times must be non-decreasing.
template <typename T, typename Better>
class WindowedFilter {
 public:
  struct Sample {
    T value;
    SimTime at;
  };

  explicit WindowedFilter(SimTime window_length) : window_(window_length) {}

  SimTime window_length() const { return window_; }
  void set_window_length(SimTime w) { window_ = w; }

  void update(T value, SimTime at) {
    while (!samples_.empty() && !Better{}(samples_.back().value, value)) {
      samples_.pop_back();
    }
    samples_.push_back(Sample{value, at});
  }

  // Best in-window value at `now`, or nullopt when the window holds nothing.
  std::optional<T> current(SimTime now) {
    expire(now);
    if (samples_.empty()) return std::nullopt;
    return samples_.front().value;
  }

  size_t retained() const { return samples_.size(); }
  const std::deque<Sample>& samples() const { return samples_; }
  void reset() { samples_.clear(); }

 private:
  void expire(SimTime now) {
    while (!samples_.empty() && samples_.front().at <= now - window_) {
      samples_.pop_front();
    }
  }

  SimTime window_;
  std::deque<Sample> samples_;
};

// Strictly greater/less: an equal newer sample evicts the older one, which
// keeps the fresher timestamp.
using WindowedMaxFilter = WindowedFilter<Rate, std::greater<Rate>>;
using WindowedMinFilter = WindowedFilter<SimTime, std::less<SimTime>>;

}  // namespace fairtt
