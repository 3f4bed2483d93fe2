// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/windowed_filter.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace fairtt {
namespace {

TEST(WindowedMaxFilter, TracksMaximumAndExpires) {
  WindowedMaxFilter f(SimTime::seconds(1));
  EXPECT_FALSE(f.current(SimTime::zero()).has_value());
  f.update(Rate::mbps(5), SimTime::millis(0));
  f.update(Rate::mbps(8), SimTime::millis(100));
  f.update(Rate::mbps(6), SimTime::millis(200));
  EXPECT_EQ(f.current(SimTime::millis(300)), Rate::mbps(8));
  // The 8 Mbps sample leaves the window at exactly 100 ms + 1 s.
  EXPECT_EQ(f.current(SimTime::millis(1099)), Rate::mbps(8));
  EXPECT_EQ(f.current(SimTime::millis(1100)), Rate::mbps(6));
  EXPECT_FALSE(f.current(SimTime::millis(1200)).has_value());
}

TEST(WindowedMinFilter, TracksMinimum) {
  WindowedMinFilter f(SimTime::millis(50));
  f.update(SimTime::millis(12), SimTime::millis(0));
  f.update(SimTime::millis(10), SimTime::millis(10));
  f.update(SimTime::millis(11), SimTime::millis(20));
  EXPECT_EQ(f.current(SimTime::millis(20)), SimTime::millis(10));
  EXPECT_EQ(f.current(SimTime::millis(60)), SimTime::millis(11));
  EXPECT_EQ(f.retained(), 1u);
}

TEST(WindowedFilter, WindowLengthCanChange) {
  WindowedMaxFilter f(SimTime::seconds(10));
  f.update(Rate::mbps(9), SimTime::zero());
  f.update(Rate::mbps(1), SimTime::seconds(2));
  EXPECT_EQ(f.current(SimTime::millis(2500)), Rate::mbps(9));
  f.set_window_length(SimTime::seconds(1));
  EXPECT_EQ(f.current(SimTime::millis(2500)), Rate::mbps(1));
}

// Brute-force reference: extremum over samples with at > now - window.
template <typename T, typename Better>
std::optional<T> brute(const std::vector<std::pair<T, SimTime>>& all, SimTime now, SimTime window) {
  std::optional<T> best;
  for (const auto& [v, at] : all) {
    if (at > now - window && at <= now && (!best || Better{}(v, *best))) best = v;
  }
  return best;
}

TEST(WindowedFilterProperty, MatchesBruteForceOnRandomStreams) {
  std::mt19937_64 gen(42);
  for (int stream = 0; stream < 2000; ++stream) {
    const SimTime window = SimTime::micros(1 + static_cast<int64_t>(gen() % 2000));
    WindowedMaxFilter maxf(window);
    WindowedMinFilter minf(window);
    std::vector<std::pair<Rate, SimTime>> rates;
    std::vector<std::pair<SimTime, SimTime>> rtts;
    SimTime now;
    for (int i = 0; i < 100; ++i) {
      now += SimTime::micros(static_cast<int64_t>(gen() % 400));
      const Rate r = Rate::bps(static_cast<int64_t>(gen() % 50));
      const SimTime d = SimTime::micros(static_cast<int64_t>(gen() % 50));
      maxf.update(r, now);
      minf.update(d, now);
      rates.emplace_back(r, now);
      rtts.emplace_back(d, now);
      ASSERT_EQ(maxf.current(now), (brute<Rate, std::greater<Rate>>(rates, now, window)));
      ASSERT_EQ(minf.current(now), (brute<SimTime, std::less<SimTime>>(rtts, now, window)));
    }
  }
}

}  // namespace
}  // namespace fairtt
