// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/engine.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

namespace fairtt {
namespace {

TEST(Simulator, ScheduleAtCurrentTimeFiresOnNextStep) {
  Simulator sim;
  bool fired = false;
  sim.schedule(SimTime::zero(), EventKind::kPacingTimer, 0, [&] { fired = true; });
  sim.run_until(SimTime::zero());
  EXPECT_TRUE(fired);
  EXPECT_EQ(sim.processed_count(), 1u);
}

TEST(Simulator, SimultaneousEventsRunInInsertionOrder) {
  Simulator sim;
  std::vector<int> order;
  for (int i = 0; i < 5; ++i) {
    sim.schedule(SimTime::millis(3), EventKind::kPacketArrival, i, [&order, i] { order.push_back(i); });
  }
  sim.run_until(SimTime::seconds(1));
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Simulator, SchedulingInThePastThrows) {
  Simulator sim;
  sim.schedule(SimTime::seconds(10), EventKind::kPacingTimer, 0, [] {});
  sim.run_until(SimTime::seconds(10));
  EXPECT_THROW(sim.schedule(SimTime::seconds(5), EventKind::kPacingTimer, 0, [] {}),
               std::logic_error);
}

TEST(Simulator, EmptyRunAdvancesClock) {
  Simulator sim;
  EXPECT_EQ(sim.run_until(SimTime::seconds(120)), SimTime::seconds(120));
  EXPECT_EQ(sim.now(), SimTime::seconds(120));
  EXPECT_EQ(sim.processed_count(), 0u);
}

TEST(Simulator, RunUntilIncludesBoundary) {
  Simulator sim;
  for (int s = 1; s <= 3; ++s) sim.schedule(SimTime::seconds(s), EventKind::kMetricsSample, 0, [] {});
  sim.run_until(SimTime::seconds(2));
  EXPECT_EQ(sim.processed_count(), 2u);
  sim.run_until(SimTime::seconds(3));
  EXPECT_EQ(sim.processed_count(), 3u);
}

TEST(Simulator, RunUntilBeforeNowThrows) {
  Simulator sim;
  sim.run_until(SimTime::seconds(2));
  EXPECT_THROW(sim.run_until(SimTime::seconds(1)), std::logic_error);
}

TEST(Simulator, CancelSemantics) {
  Simulator sim;
  sim.set_record_trace(true);
  bool fired = false;
  EventHandle h = sim.schedule(SimTime::seconds(1), EventKind::kProbeRttTimer, 0, [&] { fired = true; });
  EventHandle done = sim.schedule(SimTime::millis(1), EventKind::kPacingTimer, 0, [] {});
  EXPECT_TRUE(sim.cancel(h));
  EXPECT_FALSE(sim.cancel(h));
  sim.run_until(SimTime::seconds(2));
  EXPECT_FALSE(fired);
  EXPECT_FALSE(sim.cancel(done));
  ASSERT_EQ(sim.trace().size(), 1u);
  EXPECT_EQ(sim.trace()[0].kind, EventKind::kPacingTimer);
}

TEST(Simulator, PendingCountTracksKindAndFlow) {
  Simulator sim;
  sim.schedule(SimTime::seconds(1), EventKind::kPacketArrival, 1, [] {});
  sim.schedule(SimTime::seconds(1), EventKind::kPacketArrival, 1, [] {});
  EventHandle h = sim.schedule(SimTime::seconds(1), EventKind::kPacketArrival, 2, [] {});
  EXPECT_EQ(sim.pending_count(EventKind::kPacketArrival, 1), 2);
  sim.cancel(h);
  EXPECT_EQ(sim.pending_count(EventKind::kPacketArrival, 2), 0);
}

struct Workload {
  std::vector<TraceRecord> trace;
  std::vector<std::pair<uint64_t, SimTime>> scheduled;
  std::set<uint64_t> cancelled;
};

const SimTime kHorizon = SimTime::millis(20);

// Random schedule whose handlers schedule further events and cancel some.
Workload random_workload(uint64_t seed) {
  Workload w;
  Simulator sim;
  sim.set_record_trace(true);
  std::mt19937_64 gen(seed);
  std::vector<EventHandle> handles;
  auto add = [&](SimTime at, EventKind kind, int flow, Simulator::Handler h) {
    EventHandle e = sim.schedule(at, kind, flow, std::move(h));
    handles.push_back(e);
    w.scheduled.emplace_back(e.seq, at);
  };
  std::function<void()> spawn = [&] {
    if (handles.size() > 3000) return;
    const SimTime at = sim.now() + SimTime::micros(static_cast<int64_t>(gen() % 500));
    add(at, static_cast<EventKind>(gen() % 8), 0, spawn);
    if (gen() % 3 == 0) add(at, EventKind::kPacketArrival, 1, spawn);
    if (gen() % 5 == 0) {
      EventHandle victim = handles[gen() % handles.size()];
      if (sim.cancel(victim)) w.cancelled.insert(victim.seq);
    }
  };
  for (int i = 0; i < 20; ++i) {
    add(SimTime::micros(static_cast<int64_t>(gen() % 100)), EventKind::kPacingTimer, 0, spawn);
  }
  sim.run_until(kHorizon);
  w.trace = sim.trace();
  return w;
}

TEST(SimulatorProperty, TraceIsDeterministic) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    EXPECT_EQ(random_workload(seed).trace, random_workload(seed).trace) << "seed " << seed;
  }
}

TEST(SimulatorProperty, ClockIsMonotone) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const Workload w = random_workload(seed);
    ASSERT_FALSE(w.trace.empty());
    for (size_t i = 1; i < w.trace.size(); ++i) {
      ASSERT_LE(w.trace[i - 1].fire_at, w.trace[i].fire_at);
      if (w.trace[i - 1].fire_at == w.trace[i].fire_at) {
        ASSERT_LT(w.trace[i - 1].seq, w.trace[i].seq);
      }
    }
  }
}

TEST(SimulatorProperty, DueEventsRunExactlyOnce) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const Workload w = random_workload(seed);
    std::multiset<uint64_t> seen;
    for (const TraceRecord& r : w.trace) seen.insert(r.seq);
    for (const auto& [seq, at] : w.scheduled) {
      const size_t expected = (at <= kHorizon && !w.cancelled.count(seq)) ? 1 : 0;
      ASSERT_EQ(seen.count(seq), expected) << "seed " << seed << " seq " << seq;
    }
  }
}

TEST(Rng, DerivedSeedsDependOnLabel) {
  EXPECT_NE(Rng::derive_seed(1, "link"), Rng::derive_seed(1, "flow0"));
  EXPECT_NE(Rng::derive_seed(1, "link"), Rng::derive_seed(2, "link"));
  EXPECT_EQ(Rng::derive_seed(7, "link"), Rng::derive_seed(7, "link"));
}

TEST(Rng, BernoulliExtremes) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_FALSE(rng.bernoulli(0.0));
    EXPECT_TRUE(rng.bernoulli(1.0));
  }
}

}  // namespace
}  // namespace fairtt
