// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/network.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <vector>

#include "fairtt/errors.hpp"

namespace fairtt {
namespace {

DumbbellSpec two_flows() {
  DumbbellSpec spec;
  spec.flows = {FlowSpec{0, FlowClass::kElephant, SimTime::millis(15), {}},
                FlowSpec{1, FlowClass::kMice, SimTime::millis(5), {}}};
  return spec;
}

TEST(Dumbbell, PerFlowDelaysSumToBaseRtt) {
  const DumbbellLayout layout = build_dumbbell(two_flows());
  ASSERT_EQ(layout.paths.size(), 2u);
  EXPECT_EQ(layout.paths[0].round_trip(), SimTime::millis(15));
  EXPECT_EQ(layout.paths[1].round_trip(), SimTime::millis(5));
  // The shared hop is identical for every flow.
  EXPECT_EQ(layout.paths[0].bottleneck_propagation, layout.paths[1].bottleneck_propagation);
}

TEST(Dumbbell, QueueCapacityInReferenceBdp) {
  const DumbbellLayout layout = build_dumbbell(two_flows());
  EXPECT_EQ(layout.reference_bdp, ByteCount(12500));
  EXPECT_EQ(layout.queue_capacity, ByteCount(125000));
}

TEST(Dumbbell, SingleFlowSymmetricSplit) {
  DumbbellSpec spec;
  spec.bottleneck_delay = SimTime::millis(5);
  spec.flows = {FlowSpec{0, FlowClass::kElephant, SimTime::millis(10), {}}};
  const DumbbellLayout layout = build_dumbbell(spec);
  const FlowPath& p = layout.paths[0];
  EXPECT_EQ(p.forward_access + p.bottleneck_propagation, SimTime::millis(5));
  EXPECT_EQ(p.ack_return, SimTime::millis(5));
}

TEST(Dumbbell, RejectsBadSpecs) {
  DumbbellSpec spec = two_flows();
  spec.queue_size_bdp = 0;
  EXPECT_THROW(build_dumbbell(spec), ConfigError);
  spec = two_flows();
  spec.flows[0].base_rtt = SimTime::zero();
  EXPECT_THROW(build_dumbbell(spec), ConfigError);
  spec = two_flows();
  spec.error_rate = 1.5;
  EXPECT_THROW(build_dumbbell(spec), ConfigError);
  spec = two_flows();
  spec.flows.clear();
  EXPECT_THROW(build_dumbbell(spec), ConfigError);
}

Packet packet(int flow, uint64_t seq) {
  Packet p;
  p.flow_id = flow;
  p.seq = seq;
  return p;
}

TEST(LinkQueue, AdmitsUntilCapacity) {
  LinkQueue q(ByteCount(125000));
  EXPECT_EQ(q.enqueue(packet(0, 1)), Admission::kAccepted);
  EXPECT_EQ(q.occupancy(), ByteCount(1000));
}

TEST(LinkQueue, DropsOnOverflowWithoutPartialAdmission) {
  LinkQueue q(ByteCount(125000));
  Packet big = packet(0, 1);
  big.size = ByteCount(124500);
  ASSERT_EQ(q.enqueue(big), Admission::kAccepted);
  EXPECT_EQ(q.enqueue(packet(0, 2)), Admission::kDropped);
  EXPECT_EQ(q.occupancy(), ByteCount(124500));
  EXPECT_EQ(q.drops(), 1u);
}

TEST(LinkQueue, FillsExactlyToCapacity) {
  LinkQueue q(ByteCount(125000));
  Packet big = packet(0, 1);
  big.size = ByteCount(124000);
  ASSERT_EQ(q.enqueue(big), Admission::kAccepted);
  EXPECT_EQ(q.enqueue(packet(0, 2)), Admission::kAccepted);
  EXPECT_EQ(q.occupancy(), q.capacity());
}

TEST(LinkQueue, IsFifo) {
  LinkQueue q(ByteCount(10000));
  for (uint64_t s = 1; s <= 5; ++s) q.enqueue(packet(static_cast<int>(s % 2), s));
  EXPECT_EQ(q.count_for_flow(1), 3);
  for (uint64_t s = 1; s <= 5; ++s) EXPECT_EQ(q.dequeue()->seq, s);
  EXPECT_FALSE(q.dequeue().has_value());
  EXPECT_EQ(q.occupancy(), ByteCount(0));
}

TEST(Deliver, ErrorRateExtremes) {
  Link clean{Rate::mbps(10), SimTime::millis(1), 0.0};
  Link dead{Rate::mbps(10), SimTime::millis(1), 1.0};
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_TRUE(deliver(clean, kDataPacketSize, SimTime::zero(), rng).has_value());
    EXPECT_FALSE(deliver(dead, kDataPacketSize, SimTime::zero(), rng).has_value());
  }
}

TEST(Deliver, ArrivalIncludesSerializationAndPropagation) {
  Link link{Rate::mbps(10), SimTime::millis(1), 0.0};
  Rng rng(1);
  EXPECT_EQ(deliver(link, kDataPacketSize, SimTime::seconds(1), rng),
            SimTime::seconds(1) + SimTime::micros(800) + SimTime::millis(1));
}

TEST(Deliver, LossFractionMatchesErrorRate) {
  Link link{Rate::mbps(10), SimTime::millis(1), 0.01};
  Rng rng(Rng::derive_seed(5, "link:bottleneck"));
  int lost = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    if (!deliver(link, kDataPacketSize, SimTime::zero(), rng)) ++lost;
  }
  EXPECT_NEAR(lost / static_cast<double>(trials), 0.01, 0.002);
}

TEST(Receiver, InOrderAdvancesCumulative) {
  Receiver rx(0);
  Ack ack;
  for (uint64_t s = 1; s <= 5; ++s) ack = rx.on_receive(packet(0, s));
  EXPECT_EQ(ack.cumulative, 5u);
  EXPECT_EQ(ack.sack_count, 0u);
}

TEST(Receiver, GapProducesSelectiveRange) {
  Receiver rx(0);
  for (uint64_t s = 1; s <= 4; ++s) rx.on_receive(packet(0, s));
  const Ack ack = rx.on_receive(packet(0, 6));
  EXPECT_EQ(ack.cumulative, 4u);
  ASSERT_EQ(ack.sack_count, 1u);
  EXPECT_EQ(ack.sack[0], (SackBlock{6, 6}));
  const Ack filled = rx.on_receive(packet(0, 5));
  EXPECT_EQ(filled.cumulative, 6u);
  EXPECT_EQ(filled.sack_count, 0u);
}

TEST(Receiver, DuplicatesCountedOnce) {
  Receiver rx(0);
  rx.on_receive(packet(0, 1));
  rx.on_receive(packet(0, 3));
  rx.on_receive(packet(0, 3));
  rx.on_receive(packet(0, 1));
  EXPECT_EQ(rx.goodput(), ByteCount(2000));
  EXPECT_EQ(rx.duplicates(), 2u);
}

TEST(Network, EchoedRttMatchesPathOnEmptyQueue) {
  Simulator sim;
  DumbbellSpec spec;
  spec.flows = {FlowSpec{0, FlowClass::kElephant, SimTime::millis(15), {}}};
  Network net(sim, build_dumbbell(spec), 1);
  SimTime acked_at;
  SimTime echo;
  net.set_ack_sink(0, [&](const Ack& a) {
    acked_at = sim.now();
    echo = a.echo_sent_at;
  });
  sim.schedule(SimTime::seconds(1), EventKind::kPacingTimer, 0, [&] {
    Packet p = packet(0, 1);
    p.sent_at = sim.now();
    net.send(p);
  });
  sim.run_until(SimTime::seconds(2));
  EXPECT_EQ(echo, SimTime::seconds(1));
  // Base RTT plus one serialization at the bottleneck.
  EXPECT_EQ(acked_at - echo, SimTime::millis(15) + SimTime::micros(800));
}

// Several flows blast random bursts through a small lossy bottleneck.
struct Blast {
  Simulator sim;
  DumbbellLayout layout;
  std::unique_ptr<Network> net;
  std::map<int, std::vector<uint64_t>> admitted_order;
  std::map<int, std::vector<uint64_t>> acked_order;
  std::vector<SimTime> goodput_times;

  explicit Blast(uint64_t seed, double error_rate) {
    DumbbellSpec spec;
    spec.queue_size_bdp = 0.5;
    spec.error_rate = error_rate;
    spec.flows = {FlowSpec{0, FlowClass::kElephant, SimTime::millis(30), {}},
                  FlowSpec{1, FlowClass::kMice, SimTime::millis(5), {}},
                  FlowSpec{2, FlowClass::kMice, SimTime::millis(12), {}}};
    layout = build_dumbbell(spec);
    net = std::make_unique<Network>(sim, layout, seed);
    for (int f = 0; f < 3; ++f) {
      net->set_ack_sink(f, [this, f](const Ack& a) { acked_order[f].push_back(a.acked_seq); });
    }
    net->set_goodput_sink([this](int, ByteCount, SimTime at) { goodput_times.push_back(at); });
    std::mt19937_64 gen(seed);
    std::vector<uint64_t> next_seq(3, 1);
    for (int burst = 0; burst < 200; ++burst) {
      const SimTime at = SimTime::micros(static_cast<int64_t>(gen() % 400000));
      const int flow = static_cast<int>(gen() % 3);
      const int count = 1 + static_cast<int>(gen() % 20);
      std::vector<uint64_t> seqs;
      for (int i = 0; i < count; ++i) seqs.push_back(next_seq[flow]++);
      sim.schedule(at, EventKind::kPacingTimer, flow, [this, flow, seqs] {
        for (uint64_t s : seqs) {
          Packet p = packet(flow, s);
          p.sent_at = sim.now();
          net->send(p);
        }
      });
    }
  }
};

TEST(NetworkProperty, PacketConservationAtAnyStopTime) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    for (int64_t stop_ms : {50, 150, 300, 1000}) {
      Blast b(seed, 0.05);
      b.sim.run_until(SimTime::millis(stop_ms));
      for (int f = 0; f < 3; ++f) {
        const FlowCounters& c = b.net->counters(f);
        EXPECT_EQ(c.sent, c.delivered + c.dropped_at_queue + c.lost_on_link +
                              static_cast<uint64_t>(b.net->packets_in_network(f)))
            << "seed " << seed << " stop " << stop_ms << " flow " << f;
      }
      EXPECT_LE(b.net->queue().occupancy(), b.net->queue().capacity());
    }
  }
}

TEST(NetworkProperty, ReceiverOrderFollowsServiceOrder) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Blast b(seed, 0.0);
    // Admission order at the bottleneck, recorded per flow.
    struct Recorder : PacketObserver {
      std::map<int, std::vector<uint64_t>>* out;
      const LinkQueue* live;
      void on_bottleneck_arrival(Packet& p, SimTime) override {
        if (live->occupancy() + p.size <= live->capacity()) (*out)[p.flow_id].push_back(p.seq);
      }
    } rec;
    rec.out = &b.admitted_order;
    rec.live = &b.net->queue();
    b.net->set_observer(&rec);
    b.sim.run_until(SimTime::seconds(2));
    for (int f = 0; f < 3; ++f) EXPECT_EQ(b.acked_order[f], b.admitted_order[f]) << "flow " << f;
    EXPECT_TRUE(std::is_sorted(b.goodput_times.begin(), b.goodput_times.end()));
  }
}

}  // namespace
}  // namespace fairtt
