#include "meshsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace meshsim {

std::size_t shortest_queue_commodity(const QueueState& queues, NodeId source) {
  std::size_t best = 0;
  for (std::size_t d = 1; d < queues.commodity_count(); ++d) {
    if (queues.length(source, d) < queues.length(source, best)) best = d;
  }
  return best;
}

Admission RateController::control(const QueueState& queues, const TrafficConfig& cfg, double budget_left,
                                  std::uint32_t packets_left) {
  Admission a;
  a.commodity = shortest_queue_commodity(queues, flow_.source);
  const auto q = queues.length(flow_.source, a.commodity);
  a.target = q > 0 ? cfg.v / static_cast<double>(q) : cfg.max_rate_pkts;
  a.admitted = std::max(0.0, std::min(a.target, budget_left));

  credit_ += a.admitted;
  const double whole = std::floor(credit_);
  a.packets = static_cast<std::uint32_t>(std::min<double>(whole, packets_left));
  credit_ -= a.packets;
  // Credit withheld by the integer budget is not carried beyond one packet.
  credit_ = std::min(credit_, std::nextafter(1.0, 0.0));
  return a;
}

std::optional<std::vector<double>> realized_split(const std::vector<std::uint64_t>& generated_per_gateway) {
  const auto total = std::accumulate(generated_per_gateway.begin(), generated_per_gateway.end(), std::uint64_t{0});
  if (total == 0) return std::nullopt;
  std::vector<double> y;
  y.reserve(generated_per_gateway.size());
  for (auto g : generated_per_gateway) y.push_back(static_cast<double>(g) / static_cast<double>(total));
  return y;
}

std::vector<FlowSpec> first_non_gateway_flows(const Topology& topo, std::size_t count) {
  std::vector<FlowSpec> out;
  for (std::size_t i = 0; i < topo.node_count() && out.size() < count; ++i) {
    const auto n = NodeId::from_index(i);
    if (!topo.is_gateway(n)) out.push_back({static_cast<std::uint32_t>(out.size() + 1), n});
  }
  if (out.size() < count) throw ConfigError("flows: not enough non-gateway nodes");
  return out;
}

std::vector<FlowSpec> random_flows(const Topology& topo, std::size_t count, std::uint64_t seed) {
  std::vector<NodeId> pool;
  for (std::size_t i = 0; i < topo.node_count(); ++i) {
    const auto n = NodeId::from_index(i);
    if (!topo.is_gateway(n)) pool.push_back(n);
  }
  if (pool.size() < count) throw ConfigError("flows: not enough non-gateway nodes");
  // Partial Fisher-Yates on raw engine words (portable across libraries).
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto span = pool.size() - i;
    const auto j = i + static_cast<std::size_t>(unit_from_bits(rng()) * static_cast<double>(span));
    std::swap(pool[i], pool[std::min(j, pool.size() - 1)]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  std::vector<FlowSpec> out;
  for (std::size_t f = 0; f < count; ++f) out.push_back({static_cast<std::uint32_t>(f + 1), pool[f]});
  return out;
}

std::vector<FlowSpec> explicit_flows(const Topology& topo, const std::vector<NodeId>& sources) {
  std::vector<FlowSpec> out;
  for (auto s : sources) {
    if (s.value == 0 || s.index() >= topo.node_count()) throw ConfigError("flows: source id out of range");
    if (topo.is_gateway(s)) throw ConfigError("flows: a gateway cannot be a flow source");
    out.push_back({static_cast<std::uint32_t>(out.size() + 1), s});
  }
  if (out.empty()) throw ConfigError("flows: no sources");
  return out;
}

}  // namespace meshsim
