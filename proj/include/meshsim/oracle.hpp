#pragma once

// Exhaustive reference solver for the single-schedule per-slot problem on
// tiny instances. Test and validation use only.
//
// Powers are obtained with a separate Gaussian elimination and every
// candidate is checked directly against the SINR inequality, so nothing
// here shares a code path with power_sinr.

#include <vector>

#include "meshsim/scheduler.hpp"

namespace meshsim::oracle {

inline constexpr std::size_t kMaxLinks = 8;

struct TinyInstance {
  Topology topo;                  // positions and gains; links are ignored
  std::vector<LinkWeight> links;  // candidate links with weights
  RateTable rates = RateTable::ieee80211a();
  PhyConfig phy;
};

struct Solution {
  std::vector<Link> links;
  std::vector<std::size_t> rate_index;
  std::vector<double> powers_mw;
  std::vector<double> weights;
  double objective = 0.0;
};

class TooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Relative slack allowed by the feasibility checker.
inline constexpr double kCheckTolerance = 1e-9;

/// Direct check: node-disjoint, 0 < p <= P_max, SINR >= beta for every link.
bool feasible(const Topology& topo, const std::vector<Link>& links, const std::vector<std::size_t>& rate_index,
              const std::vector<double>& powers_mw, const RateTable& rates, const PhyConfig& phy);

/// Same check applied to a schedule built by the greedy scheduler.
bool feasible(const Topology& topo, const Schedule& s, const RateTable& rates, const PhyConfig& phy);

/// Maximiser of sum (r * pi * l_t / l_p + W) over node-disjoint subsets and
/// rate assignments. The empty schedule (objective 0) is always a candidate.
/// Throws TooLarge beyond kMaxLinks links.
Solution optimal_schedule(const TinyInstance& inst, double pi);

/// Random instance with `nodes` nodes in a `side_m` square and `link_count`
/// distinct directed links with integer weights in [-3, 20].
TinyInstance random_instance(std::uint64_t seed, std::size_t nodes, std::size_t link_count, double side_m);

}  // namespace meshsim::oracle
