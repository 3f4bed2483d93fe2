// Copyright 2026 The fairtt-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "fairtt/network.hpp"

#include <algorithm>
#include <sstream>

#include "fairtt/errors.hpp"

namespace fairtt {

Admission LinkQueue::enqueue(const Packet& p) {
  if (occupancy_ + p.size > capacity_) {
    ++drops_;
    return Admission::kDropped;
  }
  fifo_.push_back(p);
  occupancy_ += p.size;
  if (occupancy_ > capacity_) throw InvariantViolation("queue occupancy exceeds capacity");
  return Admission::kAccepted;
}

std::optional<Packet> LinkQueue::dequeue() {
  if (fifo_.empty()) return std::nullopt;
  Packet p = fifo_.front();
  fifo_.pop_front();
  occupancy_ -= p.size;
  return p;
}

int64_t LinkQueue::count_for_flow(int flow_id) const {
  return std::count_if(fifo_.begin(), fifo_.end(),
                       [flow_id](const Packet& p) { return p.flow_id == flow_id; });
}

std::optional<SimTime> deliver(const Link& link, ByteCount size, SimTime service_start,
                               Rng& rng) {
  if (rng.bernoulli(link.error_rate)) return std::nullopt;
  return service_start + link.serialization_time(size) + link.propagation_delay;
}

const char* to_string(FlowClass c) {
  return c == FlowClass::kElephant ? "elephant" : "mice";
}

DumbbellLayout build_dumbbell(const DumbbellSpec& spec) {
  if (spec.flows.empty()) throw ConfigError("dumbbell needs at least one flow");
  if (spec.bottleneck_bandwidth.bps() <= 0) {
    throw ConfigError("bottleneck bandwidth must be positive");
  }
  if (spec.bottleneck_delay.ns() <= 0) throw ConfigError("bottleneck delay must be positive");
  if (!(spec.queue_size_bdp > 0.0)) throw ConfigError("queue size must be positive");
  if (spec.error_rate < 0.0 || spec.error_rate > 1.0) {
    throw ConfigError("error rate must lie in [0, 1]");
  }
  SimTime min_rtt = SimTime::infinite();
  for (const FlowSpec& f : spec.flows) {
    if (f.base_rtt.ns() <= 0) {
      std::ostringstream os;
      os << "flow " << f.flow_id << ": base RTT must be positive";
      throw ConfigError(os.str());
    }
    if (f.start_time.ns() < 0) throw ConfigError("flow start time must be non-negative");
    min_rtt = std::min(min_rtt, f.base_rtt);
  }

  DumbbellLayout layout;
  const SimTime prop = std::min(spec.bottleneck_delay, min_rtt / 2);
  layout.bottleneck = Link{spec.bottleneck_bandwidth, prop, spec.error_rate};
  layout.reference_bdp = spec.bottleneck_bandwidth.bytes_over(spec.bottleneck_delay);
  layout.queue_capacity = layout.reference_bdp.scaled_down(spec.queue_size_bdp);
  if (layout.queue_capacity.bytes() <= 0) throw ConfigError("queue capacity rounds to zero bytes");

  for (const FlowSpec& f : spec.flows) {
    const SimTime access_total = f.base_rtt - prop * 2;
    const SimTime access_forward = access_total / 2;
    const SimTime access_back = access_total - access_forward;
    layout.paths.push_back(FlowPath{access_forward, prop, access_back + prop});
  }
  return layout;
}

Ack Receiver::on_receive(const Packet& p) {
  if (p.seq <= cumulative_ || out_of_order_.count(p.seq) != 0) {
    ++duplicates_;
  } else {
    goodput_ += p.size;
    if (p.seq == cumulative_ + 1) {
      ++cumulative_;
      while (!out_of_order_.empty() && *out_of_order_.begin() == cumulative_ + 1) {
        out_of_order_.erase(out_of_order_.begin());
        ++cumulative_;
      }
    } else {
      out_of_order_.insert(p.seq);
    }
  }

  Ack ack;
  ack.flow_id = flow_id_;
  ack.cumulative = cumulative_;
  ack.acked_seq = p.seq;
  ack.acked_tx_index = p.tx_index;
  ack.echo_sent_at = p.sent_at;
  ack.echo_delivered = p.delivered_so_far;
  ack.echo_app_limited = p.app_limited_at_send;
  ack.path = p.path;

  // First block holds the packet just received; the rest follow in
  // ascending order.
  if (!out_of_order_.empty()) {
    auto block_around = [this](std::set<uint64_t>::const_iterator it) {
      SackBlock b{*it, *it};
      auto lo = it;
      while (lo != out_of_order_.begin()) {
        auto prev = std::prev(lo);
        if (*prev + 1 != b.first) break;
        b.first = *prev;
        lo = prev;
      }
      for (auto hi = std::next(it); hi != out_of_order_.end() && *hi == b.last + 1; ++hi) {
        b.last = *hi;
      }
      return b;
    };
    auto self = out_of_order_.find(p.seq);
    if (self != out_of_order_.end()) ack.sack[ack.sack_count++] = block_around(self);
    for (auto it = out_of_order_.begin();
         it != out_of_order_.end() && ack.sack_count < Ack::kMaxSackBlocks;) {
      SackBlock b = block_around(it);
      bool dup = ack.sack_count > 0 && ack.sack[0] == b;
      if (!dup) ack.sack[ack.sack_count++] = b;
      it = out_of_order_.upper_bound(b.last);
    }
  }
  return ack;
}

Network::Network(Simulator& sim, const DumbbellLayout& layout, uint64_t master_seed)
    : sim_(sim),
      layout_(layout),
      queue_(layout.queue_capacity),
      link_rng_(Rng::derive_seed(master_seed, "link:bottleneck")) {
  for (size_t i = 0; i < layout_.paths.size(); ++i) {
    receivers_.emplace_back(static_cast<int>(i));
  }
  counters_.resize(layout_.paths.size());
  ack_sinks_.resize(layout_.paths.size());
}

void Network::set_ack_sink(int flow_id, AckSink sink) {
  ack_sinks_.at(flow_id) = std::move(sink);
}

void Network::send(const Packet& p) {
  ++counters_.at(p.flow_id).sent;
  sim_.schedule_in(layout_.paths[p.flow_id].forward_access, EventKind::kPacketArrival,
                   p.flow_id, [this, p] { arrive_at_bottleneck(p); });
}

void Network::arrive_at_bottleneck(Packet p) {
  if (observer_ != nullptr) observer_->on_bottleneck_arrival(p, sim_.now());
  if (queue_.enqueue(p) == Admission::kDropped) {
    ++counters_[p.flow_id].dropped_at_queue;
    return;
  }
  if (!in_service_) start_service();
}

void Network::start_service() {
  std::optional<Packet> next = queue_.dequeue();
  if (!next) return;
  const SimTime start = sim_.now();
  std::optional<SimTime> arrival = deliver(layout_.bottleneck, next->size, start, link_rng_);
  in_service_lost_ = !arrival.has_value();
  const int flow = next->flow_id;
  in_service_ = std::move(next);
  sim_.schedule(start + layout_.bottleneck.serialization_time(in_service_->size),
                EventKind::kPacketDeparture, flow, [this] { finish_service(); });
}

void Network::finish_service() {
  Packet p = std::move(*in_service_);
  in_service_.reset();
  if (in_service_lost_) {
    ++counters_[p.flow_id].lost_on_link;
  } else {
    sim_.schedule_in(layout_.bottleneck.propagation_delay, EventKind::kPacketArrival,
                     p.flow_id, [this, p] { arrive_at_receiver(p); });
  }
  start_service();
}

void Network::arrive_at_receiver(const Packet& p) {
  ++counters_[p.flow_id].delivered;
  Receiver& rx = receivers_[p.flow_id];
  const ByteCount before = rx.goodput();
  Ack ack = rx.on_receive(p);
  if (goodput_sink_ && rx.goodput() > before) {
    goodput_sink_(p.flow_id, rx.goodput() - before, sim_.now());
  }
  const AckSink& sink = ack_sinks_[p.flow_id];
  if (sink) {
    sim_.schedule_in(layout_.paths[p.flow_id].ack_return, EventKind::kAckArrival, p.flow_id,
                     [&sink, ack] { sink(ack); });
  }
}

int64_t Network::packets_in_network(int flow_id) const {
  int64_t n = queue_.count_for_flow(flow_id);
  if (in_service_ && in_service_->flow_id == flow_id) ++n;
  n += sim_.pending_count(EventKind::kPacketArrival, flow_id);
  return n;
}

}  // namespace fairtt
