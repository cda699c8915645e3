#include "meshsim/queues.hpp"

#include <stdexcept>

namespace meshsim {

QueueState::QueueState(std::size_t node_count, std::vector<NodeId> gateways)
    : node_count_(node_count), gateways_(std::move(gateways)), queues_(node_count * gateways_.size()) {}

std::size_t QueueState::total() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

void QueueState::push(NodeId node, const Packet& p) {
  if (gateways_[p.commodity] == node) {
    throw std::logic_error("gateway queue for its own commodity must stay empty");
  }
  fifo_mut(node, p.commodity).push_back(p);
}

Packet QueueState::pop(NodeId node, std::size_t commodity) {
  auto& q = fifo_mut(node, commodity);
  Packet p = q.front();
  q.pop_front();
  return p;
}

}  // namespace meshsim
