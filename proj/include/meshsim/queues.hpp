#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "meshsim/net_model.hpp"

namespace meshsim {

using Slot = std::int64_t;

struct Packet {
  std::uint32_t flow = 0;
  NodeId source;
  std::size_t commodity = 0;  // index into Topology::gateways()
  Slot created = 0;
  std::uint32_t hops = 0;
};

/// Per-(node, gateway) FIFO queues. The queue of a gateway for its own
/// commodity is always empty: such packets are delivered, never stored.
class QueueState {
 public:
  QueueState() = default;
  QueueState(std::size_t node_count, std::vector<NodeId> gateways);

  std::size_t node_count() const { return node_count_; }
  std::size_t commodity_count() const { return gateways_.size(); }
  NodeId gateway(std::size_t commodity) const { return gateways_[commodity]; }
  const std::vector<NodeId>& gateways() const { return gateways_; }

  /// Q_i^(d); zero for a gateway's own commodity.
  std::size_t length(NodeId node, std::size_t commodity) const { return fifo(node, commodity).size(); }
  std::size_t total() const;

  bool empty(NodeId node, std::size_t commodity) const { return fifo(node, commodity).empty(); }
  const Packet& front(NodeId node, std::size_t commodity) const { return fifo(node, commodity).front(); }

  /// Enqueue at `node`. Throws std::logic_error for a gateway's own commodity.
  void push(NodeId node, const Packet& p);
  Packet pop(NodeId node, std::size_t commodity);

  const std::deque<Packet>& fifo(NodeId node, std::size_t commodity) const {
    return queues_[node.index() * gateways_.size() + commodity];
  }

 private:
  std::deque<Packet>& fifo_mut(NodeId node, std::size_t commodity) {
    return queues_[node.index() * gateways_.size() + commodity];
  }

  std::size_t node_count_ = 0;
  std::vector<NodeId> gateways_;
  std::vector<std::deque<Packet>> queues_;
};

}  // namespace meshsim
