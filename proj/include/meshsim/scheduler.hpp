#pragma once

// Per-slot greedy construction of M feasible schedules (joint link
// activation, rate and power), the time-fraction allocation over them, and
// the round-robin partition of schedules onto channels for multi-radio
// operation.

#include <span>
#include <vector>

#include "meshsim/power_sinr.hpp"
#include "meshsim/weights.hpp"

namespace meshsim {

struct ScheduledLink {
  Link link;
  std::size_t rate_index = 0;
  double rate_bps = 0.0;
  double power_mw = 0.0;
  std::size_t commodity = 0;
  double weight = 0.0;
};

struct Schedule {
  std::vector<ScheduledLink> links;
  double pi = 0.0;
  std::size_t channel = 0;

  bool empty() const { return links.empty(); }
  bool contains(const Link& l) const;
  bool touches(NodeId n) const;
  double rate_sum() const;
  CandidateSet candidate() const;
};

struct SchedulerConfig {
  std::size_t schedules = 0;  // M; 0 selects |GW| + 1
  std::size_t channels = 1;
  std::size_t radios = 1;

  std::size_t schedules_for(std::size_t gateway_count) const {
    return schedules == 0 ? gateway_count + 1 : schedules;
  }
  /// Throws ConfigError when channels < 1, radios < channels, or when
  /// radios != channels in multi-channel mode.
  void validate() const;
};

/// Greedy schedule construction. Links are ranked by weight (descending,
/// ties by (i,j)); the first M non-negative links seed one schedule each at
/// the highest rate they can sustain alone; then for every rate from the
/// highest down, every unplaced non-negative link is offered to schedules
/// 1..M in order and committed to the first one whose joint power solve
/// stays within (0, P_max].
std::vector<Schedule> build_schedules(const Topology& topo, const RateTable& rates, const PhyConfig& phy,
                                      std::span<const LinkWeight> weights, std::size_t schedule_count);

/// Linear program max sum_m pi_m * sum(rates in m) over the simplex; the
/// optimum is the vertex at the largest rate sum (lowest index on ties).
/// Writes pi into the schedules and returns it. Throws on an empty list.
std::vector<double> allocate_time_fractions(std::span<Schedule> schedules);

struct ChannelGroup {
  std::size_t channel = 0;
  std::vector<std::size_t> schedules;  // indices into the schedule list
};

/// Schedule m (0-based) goes to channel m mod C; time fractions are then
/// allocated per channel. Throws ConfigError when channels > radios.
std::vector<ChannelGroup> partition_channels(std::span<Schedule> schedules, std::size_t channels,
                                             std::size_t radios);

/// sum over links of (rate * pi * l_t / l_p + weight) for one schedule.
double schedule_objective(const Schedule& s, double pi, const PhyConfig& phy);

/// Per-slot objective over all schedules using each schedule's own pi.
double slot_objective(std::span<const Schedule> schedules, const PhyConfig& phy);

}  // namespace meshsim
