// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fairtt/engine.hpp"
#include "fairtt/units.hpp"

namespace fairtt {

// Bottleneck-stamped summary of the per-flow minimum RTTs reported by senders
// in the last completed tally window. flow_count == 0 means "no reports".
struct PathSummary {
  int flow_count = 0;  // distinct RTT values after bucketing
  SimTime mean_rtt;    // over all reporting flows
};

struct Packet {
  int flow_id = 0;
  uint64_t seq = 0;       // data sequence number, from 1
  uint64_t tx_index = 0;  // per-flow transmission counter, from 0
  ByteCount size = kDataPacketSize;
  SimTime sent_at;
  ByteCount delivered_so_far;
  bool app_limited_at_send = false;
  bool retransmission = false;
  SimTime rtt_report;  // sender's last window-minimum RTT; zero = none
  PathSummary path;
};

// Inclusive range of received sequence numbers above the cumulative point.
struct SackBlock {
  uint64_t first = 0;
  uint64_t last = 0;
  bool operator==(const SackBlock&) const = default;
};

struct Ack {
  static constexpr size_t kMaxSackBlocks = 3;

  int flow_id = 0;
  uint64_t cumulative = 0;  // highest seq with everything <= it received
  std::array<SackBlock, kMaxSackBlocks> sack{};
  size_t sack_count = 0;
  uint64_t acked_seq = 0;
  uint64_t acked_tx_index = 0;
  SimTime echo_sent_at;
  ByteCount echo_delivered;
  bool echo_app_limited = false;
  PathSummary path;
};

enum class Admission { kAccepted, kDropped };

// Drop-tail FIFO with a byte-capacity limit. No partial admission.
class LinkQueue {
 public:
  explicit LinkQueue(ByteCount capacity) : capacity_(capacity) {}

  Admission enqueue(const Packet& p);
  std::optional<Packet> dequeue();

  ByteCount capacity() const { return capacity_; }
  ByteCount occupancy() const { return occupancy_; }
  size_t size() const { return fifo_.size(); }
  bool empty() const { return fifo_.empty(); }
  uint64_t drops() const { return drops_; }
  int64_t count_for_flow(int flow_id) const;

 private:
  ByteCount capacity_;
  ByteCount occupancy_;
  std::deque<Packet> fifo_;
  uint64_t drops_ = 0;
};

struct Link {
  Rate bandwidth;
  SimTime propagation_delay;
  double error_rate = 0.0;

  // size * 8 / bandwidth, rounded up to the next tick.
  SimTime serialization_time(ByteCount size) const { return bandwidth.transfer_time(size); }
};

// Arrival time of a packet whose serialization starts at `service_start`, or
// nullopt when the link's error process loses it.
std::optional<SimTime> deliver(const Link& link, ByteCount size, SimTime service_start,
                               Rng& rng);

enum class FlowClass { kElephant, kMice };
const char* to_string(FlowClass c);

struct FlowSpec {
  int flow_id = 0;
  FlowClass flow_class = FlowClass::kElephant;
  SimTime base_rtt;
  SimTime start_time;
};

struct DumbbellSpec {
  std::vector<FlowSpec> flows;
  Rate bottleneck_bandwidth = Rate::mbps(10);
  // Reference delay for sizing the buffer in BDP units.
  SimTime bottleneck_delay = SimTime::millis(10);
  double queue_size_bdp = 10.0;
  double error_rate = 0.0;
};

// Per-flow one-way delays. forward_access + bottleneck_propagation +
// ack_return == base RTT exactly.
struct FlowPath {
  SimTime forward_access;
  SimTime bottleneck_propagation;
  SimTime ack_return;
  SimTime round_trip() const { return forward_access + bottleneck_propagation + ack_return; }
};

struct DumbbellLayout {
  Link bottleneck;
  ByteCount reference_bdp;
  ByteCount queue_capacity;
  std::vector<FlowPath> paths;  // indexed like DumbbellSpec::flows
};

// Validates the topology (throws ConfigError) and apportions each flow's base RTT.
// The simulated bottleneck propagation delay is the configured delay, capped
// at half of the smallest base RTT so every flow's RTT fits; the flow-specific
// remainder sits on the sender access link, split evenly between the data and
// ACK directions.
DumbbellLayout build_dumbbell(const DumbbellSpec& spec);

// Hook for bottleneck-side packet inspection (the path RTT tally).
class PacketObserver {
 public:
  virtual ~PacketObserver() = default;
  virtual void on_bottleneck_arrival(Packet& p, SimTime now) = 0;
};

// Receiver endpoint for one flow: reassembly state and ACK generation.
class Receiver {
 public:
  explicit Receiver(int flow_id) : flow_id_(flow_id) {}

  Ack on_receive(const Packet& p);

  uint64_t cumulative() const { return cumulative_; }
  // Unique payload bytes delivered (retransmitted duplicates counted once).
  ByteCount goodput() const { return goodput_; }
  uint64_t duplicates() const { return duplicates_; }

 private:
  int flow_id_;
  uint64_t cumulative_ = 0;
  std::set<uint64_t> out_of_order_;
  ByteCount goodput_;
  uint64_t duplicates_ = 0;
};

struct FlowCounters {
  uint64_t sent = 0;
  uint64_t delivered = 0;
  uint64_t dropped_at_queue = 0;
  uint64_t lost_on_link = 0;
};

// Runtime dumbbell: forward access delay, the shared drop-tail bottleneck,
// receivers, and an uncongested ACK return path.
class Network {
 public:
  using AckSink = std::function<void(const Ack&)>;
  // Called on first-time delivery of payload to a receiver.
  using GoodputSink = std::function<void(int flow_id, ByteCount bytes, SimTime at)>;

  Network(Simulator& sim, const DumbbellLayout& layout, uint64_t master_seed);

  void set_ack_sink(int flow_id, AckSink sink);
  void set_goodput_sink(GoodputSink sink) { goodput_sink_ = std::move(sink); }
  void set_observer(PacketObserver* observer) { observer_ = observer; }

  // Hands a packet to the sender's access link.
  void send(const Packet& p);

  const LinkQueue& queue() const { return queue_; }
  const Link& bottleneck() const { return layout_.bottleneck; }
  const FlowPath& path(int flow_id) const { return layout_.paths.at(flow_id); }
  const FlowCounters& counters(int flow_id) const { return counters_.at(flow_id); }
  const Receiver& receiver(int flow_id) const { return receivers_.at(flow_id); }
  size_t flow_count() const { return receivers_.size(); }

  // Packets of `flow_id` currently inside the network, found by inspecting
  // the queue, the transmitter, and pending forward-path events.
  int64_t packets_in_network(int flow_id) const;

 private:
  void arrive_at_bottleneck(Packet p);
  void start_service();
  void finish_service();
  void arrive_at_receiver(const Packet& p);

  Simulator& sim_;
  DumbbellLayout layout_;
  LinkQueue queue_;
  Rng link_rng_;
  std::optional<Packet> in_service_;
  bool in_service_lost_ = false;
  std::vector<Receiver> receivers_;
  std::vector<FlowCounters> counters_;
  std::vector<AckSink> ack_sinks_;
  GoodputSink goodput_sink_;
  PacketObserver* observer_ = nullptr;
};

}  // namespace fairtt
