#pragma once

// Minimum-power solve for a set of node-disjoint links with assigned rates.
//
// With every SINR constraint tight, the powers satisfy A p = N0 * 1 where
//   A[k][k] =  G(tx_k, rx_k) / beta(rate_k)
//   A[k][n] = -G(tx_n, rx_k)            (n != k)
// The set is usable iff the solution is strictly positive and within P_max.

#include <Eigen/Dense>
#include <vector>

#include "meshsim/net_model.hpp"

namespace meshsim {

inline constexpr int kMaxCandidateLinks = 32;

using GainMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxCandidateLinks, kMaxCandidateLinks>;
using PowerVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxCandidateLinks, 1>;

class InvalidCandidate : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Links with no shared endpoint, each with an index into the rate table.
struct CandidateSet {
  std::vector<Link> links;
  std::vector<std::size_t> rate_index;

  std::size_t size() const { return links.size(); }
  void push(Link l, std::size_t rate) {
    links.push_back(l);
    rate_index.push_back(rate);
  }
  void pop() {
    links.pop_back();
    rate_index.pop_back();
  }
};

/// True when no two links share a node.
bool node_disjoint(const std::vector<Link>& links);

/// Throws InvalidCandidate for empty, oversized, shared-node, or
/// out-of-table candidates.
GainMatrix build_gain_matrix(const CandidateSet& cand, const Topology& topo, const RateTable& rates);

enum class PowerStatus {
  kFeasible,
  kSingular,        // exact zero pivot
  kIllConditioned,  // 1-norm condition estimate above kMaxCondition
  kNonPositive,     // some p_k <= 0
  kExceedsMax,      // some p_k > P_max
};

const char* to_string(PowerStatus s);

inline constexpr double kMaxCondition = 1e12;

struct PowerSolution {
  PowerStatus status = PowerStatus::kSingular;
  PowerVector powers_mw;  // filled whenever the system was solved
  double condition_estimate = 0.0;

  bool feasible() const { return status == PowerStatus::kFeasible; }
};

/// Solves A p = N0 * 1 by partial-pivot LU with one refinement step, then
/// classifies the result against (0, max_power_mw].
PowerSolution solve_powers(const GainMatrix& a, double noise_mw, double max_power_mw);

/// Convenience: build the matrix and solve.
PowerSolution solve_candidate(const CandidateSet& cand, const Topology& topo, const RateTable& rates,
                              const PhyConfig& phy);

/// Per link, SINR / beta - 1, computed straight from the powers.
std::vector<double> verify_sinr(const CandidateSet& cand, std::span<const double> powers_mw,
                                const Topology& topo, const RateTable& rates, double noise_mw);

}  // namespace meshsim
