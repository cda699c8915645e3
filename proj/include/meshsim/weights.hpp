#pragma once

// Link weights: the differential backlog and its fairness-adjusted variants.

#include <string>
#include <string_view>
#include <vector>

#include "meshsim/queues.hpp"

namespace meshsim {

enum class Policy {
  kW,     // differential backlog
  kWr,    // W / cumulative link rate
  kWD,    // head-of-line delay * W
  kWrD,   // delay / cumulative link rate * W
  kWrd,   // W / cumulative per-gateway link rate
  kWrdD,  // delay / cumulative per-gateway link rate * W
};

inline constexpr Policy kAllPolicies[] = {Policy::kW,  Policy::kWr,  Policy::kWD,
                                          Policy::kWrD, Policy::kWrd, Policy::kWrdD};

/// "W", "Wr", "WD", "WrD", "Wrd", "WrdD". Case-sensitive ("WrD" != "Wrd").
std::string_view policy_name(Policy p);
/// Throws ConfigError for unknown names.
Policy parse_policy(std::string_view name);

struct LinkWeight {
  Link link;
  double backlog = 0.0;  // max_d (Q_i^d - Q_j^d)
  std::size_t commodity = 0;
  double hol_delay = 0.0;  // age in slots of the head packet in (i, commodity); 0 if empty
  double value = 0.0;      // weight under the active policy
};

/// Max over gateways of Q_i^(d) - Q_j^(d); ties resolve to the lowest
/// gateway index.
struct Backlog {
  double value;
  std::size_t commodity;
};
Backlog differential_backlog(const QueueState& queues, const Link& link);

/// Dense (i,j) -> link index lookup for a topology's link list.
class LinkIndex {
 public:
  LinkIndex() = default;
  explicit LinkIndex(const Topology& topo);

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t operator()(const Link& l) const { return table_[l.from.index() * nodes_ + l.to.index()]; }
  std::size_t size() const { return count_; }

 private:
  std::size_t nodes_ = 0;
  std::size_t count_ = 0;
  std::vector<std::size_t> table_;
};

/// Cumulative allocated rate per link (and per link and gateway), in units
/// of the lowest table rate times slots.
class WeightState {
 public:
  WeightState() = default;
  WeightState(const Topology& topo, std::size_t commodities, double rate_unit_bps, Policy policy);

  Policy policy() const { return policy_; }
  const LinkIndex& index() const { return index_; }

  double cumulative(std::size_t link) const { return total_[link]; }
  double cumulative(std::size_t link, std::size_t commodity) const {
    return per_commodity_[link * commodities_ + commodity];
  }

  /// Add rate * pi for one active link carrying `commodity`.
  void record(std::size_t link, std::size_t commodity, double rate_bps, double pi);

  /// Weight of `base` under this state's policy.
  double policy_weight(const LinkWeight& base) const;

 private:
  Policy policy_ = Policy::kW;
  LinkIndex index_;
  std::size_t commodities_ = 0;
  double rate_unit_bps_ = 1.0;
  std::vector<double> total_;
  std::vector<double> per_commodity_;
};

/// Stateless form of the policy transform, given the counters directly.
double policy_weight(Policy policy, double backlog, double hol_delay, double cumulative_link,
                     double cumulative_link_commodity);

/// Backlog, commodity, head-of-line delay and policy value for every link
/// of the topology, in topology link order.
std::vector<LinkWeight> compute_link_weights(const Topology& topo, const QueueState& queues,
                                             const WeightState& state, Slot now);

}  // namespace meshsim
