#pragma once

// Source rate control with shortest-queue gateway selection.

#include <optional>
#include <vector>

#include "meshsim/queues.hpp"

namespace meshsim {

struct FlowSpec {
  std::uint32_t id = 0;  // 1..K
  NodeId source;
};

struct TrafficConfig {
  double v = 30.0;             // utility/backlog trade-off, packets^2 per slot
  double max_rate_pkts = 10.0;  // per-node admission budget, packets per slot
};

struct Admission {
  std::size_t commodity = 0;  // chosen gateway index
  double target = 0.0;        // V / Q, or the budget when Q = 0
  double admitted = 0.0;      // min(target, remaining budget)
  std::uint32_t packets = 0;  // whole packets released this slot
};

/// Gateway with the shortest queue at `source`, ties to the lowest gateway.
std::size_t shortest_queue_commodity(const QueueState& queues, NodeId source);

/// Rate controller for one flow. Fractional admissions accumulate in a
/// credit that releases a packet once it reaches 1.
class RateController {
 public:
  explicit RateController(FlowSpec flow) : flow_(flow) {}

  const FlowSpec& flow() const { return flow_; }
  double credit() const { return credit_; }

  /// `budget_left` and `packets_left` are the remaining per-node budgets for
  /// this slot; the caller deducts the returned admission from them.
  Admission control(const QueueState& queues, const TrafficConfig& cfg, double budget_left,
                    std::uint32_t packets_left);

 private:
  FlowSpec flow_;
  double credit_ = 0.0;
};

/// Realized gateway split for one flow: generated-to-d / generated. Empty
/// when the flow generated nothing.
std::optional<std::vector<double>> realized_split(const std::vector<std::uint64_t>& generated_per_gateway);

/// Flow source selection.
std::vector<FlowSpec> first_non_gateway_flows(const Topology& topo, std::size_t count);
std::vector<FlowSpec> random_flows(const Topology& topo, std::size_t count, std::uint64_t seed);
std::vector<FlowSpec> explicit_flows(const Topology& topo, const std::vector<NodeId>& sources);

}  // namespace meshsim
