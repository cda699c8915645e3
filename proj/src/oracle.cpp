#include "meshsim/oracle.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <set>

namespace meshsim::oracle {

namespace {

// Gaussian elimination with partial pivoting on a dense copy.
std::optional<std::vector<double>> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (a[piv][col] == 0.0) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

std::optional<std::vector<double>> min_powers(const Topology& topo, const std::vector<Link>& links,
                                              const std::vector<std::size_t>& rate_index, const RateTable& rates,
                                              const PhyConfig& phy) {
  const std::size_t n = links.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      a[k][m] = k == m ? topo.gain(links[k].from, links[k].to) / rates.beta(rate_index[k])
                       : -topo.gain(links[m].from, links[k].to);
    }
  }
  return gauss_solve(std::move(a), std::vector<double>(n, phy.noise_mw));
}

}  // namespace

bool feasible(const Topology& topo, const std::vector<Link>& links, const std::vector<std::size_t>& rate_index,
              const std::vector<double>& powers_mw, const RateTable& rates, const PhyConfig& phy) {
  if (links.size() != rate_index.size() || links.size() != powers_mw.size()) return false;
  std::set<NodeId> seen;
  for (const auto& l : links) {
    if (l.from == l.to || !seen.insert(l.from).second || !seen.insert(l.to).second) return false;
  }
  for (std::size_t k = 0; k < links.size(); ++k) {
    const double p = powers_mw[k];
    if (!(p > 0.0) || p > phy.max_power_mw * (1.0 + kCheckTolerance)) return false;
    double noise_plus_interference = phy.noise_mw;
    for (std::size_t m = 0; m < links.size(); ++m) {
      if (m != k) noise_plus_interference += topo.gain(links[m].from, links[k].to) * powers_mw[m];
    }
    const double sinr = topo.gain(links[k].from, links[k].to) * p / noise_plus_interference;
    if (sinr < rates.beta(rate_index[k]) * (1.0 - kCheckTolerance)) return false;
  }
  return true;
}

bool feasible(const Topology& topo, const Schedule& s, const RateTable& rates, const PhyConfig& phy) {
  std::vector<Link> links;
  std::vector<std::size_t> idx;
  std::vector<double> p;
  for (const auto& l : s.links) {
    links.push_back(l.link);
    idx.push_back(l.rate_index);
    p.push_back(l.power_mw);
  }
  return feasible(topo, links, idx, p, rates, phy);
}

Solution optimal_schedule(const TinyInstance& inst, double pi) {
  const auto& cands = inst.links;
  if (cands.size() > kMaxLinks) throw TooLarge("oracle: instance exceeds 8 links");
  const std::size_t nrates = inst.rates.size();
  const double rate_term = pi * inst.phy.slot_s / inst.phy.packet_bits;

  Solution best;  // empty schedule, objective 0
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> rate_idx;

  auto evaluate = [&] {
    if (chosen.empty()) return;
    std::vector<Link> links;
    for (auto c : chosen) links.push_back(cands[c].link);
    auto powers = min_powers(inst.topo, links, rate_idx, inst.rates, inst.phy);
    if (!powers || !feasible(inst.topo, links, rate_idx, *powers, inst.rates, inst.phy)) return;
    double obj = 0.0;
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      obj += inst.rates.rate(rate_idx[k]) * rate_term + cands[chosen[k]].value;
    }
    if (obj > best.objective) {
      best.links = links;
      best.rate_index = rate_idx;
      best.powers_mw = *powers;
      best.weights.clear();
      for (auto c : chosen) best.weights.push_back(cands[c].value);
      best.objective = obj;
    }
  };

  // Rates for the chosen subset, odometer style (lexicographic).
  auto enumerate_rates = [&] {
    rate_idx.assign(chosen.size(), 0);
    while (true) {
      evaluate();
      std::size_t pos = rate_idx.size();
      while (pos > 0) {
        --pos;
        if (++rate_idx[pos] < nrates) break;
        rate_idx[pos] = 0;
        if (pos == 0) return;
      }
      if (rate_idx.empty()) return;
    }
  };

  auto recurse = [&](auto&& self, std::size_t next) -> void {
    enumerate_rates();
    for (std::size_t c = next; c < cands.size(); ++c) {
      bool clash = false;
      for (auto o : chosen) clash = clash || cands[o].link.shares_node(cands[c].link);
      if (clash) continue;
      chosen.push_back(c);
      self(self, c + 1);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

TinyInstance random_instance(std::uint64_t seed, std::size_t nodes, std::size_t link_count, double side_m) {
  std::mt19937_64 rng(seed);
  TinyInstance inst;
  inst.topo = Topology(sample_positions(nodes, side_m, rng()), inst.phy);
  std::set<Link> used;
  while (inst.links.size() < link_count) {
    const auto a = static_cast<std::size_t>(unit_from_bits(rng()) * static_cast<double>(nodes));
    const auto b = static_cast<std::size_t>(unit_from_bits(rng()) * static_cast<double>(nodes));
    if (a == b) continue;
    const Link l{NodeId::from_index(a), NodeId::from_index(b)};
    if (!used.insert(l).second) continue;
    LinkWeight w;
    w.link = l;
    w.value = std::floor(unit_from_bits(rng()) * 24.0) - 3.0;
    w.backlog = w.value;
    inst.links.push_back(w);
  }
  return inst;
}

}  // namespace meshsim::oracle
