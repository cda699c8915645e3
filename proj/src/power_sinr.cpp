#include "meshsim/power_sinr.hpp"

#include <cmath>

namespace meshsim {

bool node_disjoint(const std::vector<Link>& links) {
  for (std::size_t a = 0; a < links.size(); ++a) {
    if (links[a].from == links[a].to) return false;
    for (std::size_t b = a + 1; b < links.size(); ++b) {
      if (links[a].shares_node(links[b])) return false;
    }
  }
  return true;
}

GainMatrix build_gain_matrix(const CandidateSet& cand, const Topology& topo, const RateTable& rates) {
  const auto n = static_cast<Eigen::Index>(cand.size());
  if (n == 0) throw InvalidCandidate("candidate set is empty");
  if (n > kMaxCandidateLinks) throw InvalidCandidate("candidate set too large");
  if (cand.rate_index.size() != cand.links.size()) throw InvalidCandidate("rate/link count mismatch");
  if (!node_disjoint(cand.links)) throw InvalidCandidate("candidate links share a node");

  GainMatrix a(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& lk = cand.links[static_cast<std::size_t>(k)];
    const auto rk = cand.rate_index[static_cast<std::size_t>(k)];
    if (rk >= rates.size()) throw InvalidCandidate("rate index outside table");
    for (Eigen::Index m = 0; m < n; ++m) {
      const auto& lm = cand.links[static_cast<std::size_t>(m)];
      a(k, m) = (k == m) ? topo.gain(lk.from, lk.to) / rates.beta(rk) : -topo.gain(lm.from, lk.to);
    }
  }
  return a;
}

const char* to_string(PowerStatus s) {
  switch (s) {
    case PowerStatus::kFeasible: return "feasible";
    case PowerStatus::kSingular: return "singular";
    case PowerStatus::kIllConditioned: return "ill-conditioned";
    case PowerStatus::kNonPositive: return "non-positive power";
    case PowerStatus::kExceedsMax: return "power above maximum";
  }
  return "unknown";
}

PowerSolution solve_powers(const GainMatrix& a, double noise_mw, double max_power_mw) {
  PowerSolution out;
  const auto n = a.rows();
  if (n == 0 || a.cols() != n) throw InvalidCandidate("gain matrix must be square and non-empty");

  if (n == 1) {
    // Scalar case: no factorisation needed.
    if (a(0, 0) == 0.0) return out;
    out.condition_estimate = 1.0;
    out.powers_mw.resize(1);
    out.powers_mw(0) = noise_mw / a(0, 0);
  } else {
    Eigen::PartialPivLU<GainMatrix> lu(a);
    const auto& packed = lu.matrixLU();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (packed(i, i) == 0.0) return out;
    }
    const double rcond = lu.rcond();
    out.condition_estimate = rcond > 0.0 ? 1.0 / rcond : HUGE_VAL;
    if (!(rcond * kMaxCondition >= 1.0)) {
      out.status = PowerStatus::kIllConditioned;
      return out;
    }
    const PowerVector rhs = PowerVector::Constant(n, noise_mw);
    out.powers_mw = lu.solve(rhs);
    const PowerVector resid = rhs - a * out.powers_mw;
    out.powers_mw += lu.solve(resid);
  }

  out.status = PowerStatus::kFeasible;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = out.powers_mw(i);
    if (!(p > 0.0)) {
      out.status = PowerStatus::kNonPositive;
      break;
    }
    if (p > max_power_mw) out.status = PowerStatus::kExceedsMax;
  }
  return out;
}

PowerSolution solve_candidate(const CandidateSet& cand, const Topology& topo, const RateTable& rates,
                              const PhyConfig& phy) {
  return solve_powers(build_gain_matrix(cand, topo, rates), phy.noise_mw, phy.max_power_mw);
}

std::vector<double> verify_sinr(const CandidateSet& cand, std::span<const double> powers_mw,
                                const Topology& topo, const RateTable& rates, double noise_mw) {
  std::vector<double> out(cand.size());
  for (std::size_t k = 0; k < cand.size(); ++k) {
    const auto& lk = cand.links[k];
    double interference = noise_mw;
    for (std::size_t m = 0; m < cand.size(); ++m) {
      if (m != k) interference += topo.gain(cand.links[m].from, lk.to) * powers_mw[m];
    }
    const double sinr = topo.gain(lk.from, lk.to) * powers_mw[k] / interference;
    out[k] = sinr / rates.beta(cand.rate_index[k]) - 1.0;
  }
  return out;
}

}  // namespace meshsim
