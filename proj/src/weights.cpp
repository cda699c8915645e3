#include "meshsim/weights.hpp"

#include <algorithm>

namespace meshsim {

std::string_view policy_name(Policy p) {
  switch (p) {
    case Policy::kW: return "W";
    case Policy::kWr: return "Wr";
    case Policy::kWD: return "WD";
    case Policy::kWrD: return "WrD";
    case Policy::kWrd: return "Wrd";
    case Policy::kWrdD: return "WrdD";
  }
  return "?";
}

Policy parse_policy(std::string_view name) {
  for (auto p : kAllPolicies) {
    if (policy_name(p) == name) return p;
  }
  throw ConfigError("unknown policy '" + std::string(name) + "' (expected W, Wr, WD, WrD, Wrd, WrdD)");
}

Backlog differential_backlog(const QueueState& queues, const Link& link) {
  Backlog best{0.0, 0};
  for (std::size_t d = 0; d < queues.commodity_count(); ++d) {
    const double diff = static_cast<double>(queues.length(link.from, d)) -
                        static_cast<double>(queues.length(link.to, d));
    if (d == 0 || diff > best.value) best = {diff, d};
  }
  return best;
}

LinkIndex::LinkIndex(const Topology& topo)
    : nodes_(topo.node_count()), count_(topo.links().size()), table_(nodes_ * nodes_, npos) {
  for (std::size_t k = 0; k < topo.links().size(); ++k) {
    const auto& l = topo.links()[k];
    table_[l.from.index() * nodes_ + l.to.index()] = k;
  }
}

WeightState::WeightState(const Topology& topo, std::size_t commodities, double rate_unit_bps, Policy policy)
    : policy_(policy),
      index_(topo),
      commodities_(commodities),
      rate_unit_bps_(rate_unit_bps),
      total_(topo.links().size(), 0.0),
      per_commodity_(topo.links().size() * commodities, 0.0) {}

void WeightState::record(std::size_t link, std::size_t commodity, double rate_bps, double pi) {
  const double amount = rate_bps * pi / rate_unit_bps_;
  total_[link] += amount;
  per_commodity_[link * commodities_ + commodity] += amount;
}

double policy_weight(Policy policy, double backlog, double hol_delay, double cumulative_link,
                     double cumulative_link_commodity) {
  const double r_link = std::max(cumulative_link, 1.0);
  const double r_comm = std::max(cumulative_link_commodity, 1.0);
  switch (policy) {
    case Policy::kW: return backlog;
    case Policy::kWr: return backlog / r_link;
    case Policy::kWD: return hol_delay * backlog;
    case Policy::kWrD: return hol_delay / r_link * backlog;
    case Policy::kWrd: return backlog / r_comm;
    case Policy::kWrdD: return hol_delay / r_comm * backlog;
  }
  return backlog;
}

double WeightState::policy_weight(const LinkWeight& base) const {
  const auto k = index_(base.link);
  return meshsim::policy_weight(policy_, base.backlog, base.hol_delay, total_[k],
                                per_commodity_[k * commodities_ + base.commodity]);
}

std::vector<LinkWeight> compute_link_weights(const Topology& topo, const QueueState& queues,
                                             const WeightState& state, Slot now) {
  std::vector<LinkWeight> out;
  out.reserve(topo.links().size());
  for (const auto& l : topo.links()) {
    LinkWeight w;
    w.link = l;
    const auto b = differential_backlog(queues, l);
    w.backlog = b.value;
    w.commodity = b.commodity;
    if (!queues.empty(l.from, b.commodity)) {
      w.hol_delay = static_cast<double>(now - queues.front(l.from, b.commodity).created);
    }
    w.value = state.policy_weight(w);
    out.push_back(w);
  }
  return out;
}

}  // namespace meshsim
