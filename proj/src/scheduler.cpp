#include "meshsim/scheduler.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace meshsim {

bool Schedule::contains(const Link& l) const {
  return std::any_of(links.begin(), links.end(), [&](const ScheduledLink& s) { return s.link == l; });
}

bool Schedule::touches(NodeId n) const {
  return std::any_of(links.begin(), links.end(), [&](const ScheduledLink& s) { return s.link.touches(n); });
}

double Schedule::rate_sum() const {
  double sum = 0.0;
  for (const auto& s : links) sum += s.rate_bps;
  return sum;
}

CandidateSet Schedule::candidate() const {
  CandidateSet c;
  for (const auto& s : links) c.push(s.link, s.rate_index);
  return c;
}

void SchedulerConfig::validate() const {
  if (channels < 1) throw ConfigError("scheduler: channels must be >= 1");
  if (radios < 1) throw ConfigError("scheduler: radios must be >= 1");
  if (channels > radios) throw ConfigError("scheduler: channels exceed radios per node");
  if (channels > 1 && radios != channels) {
    throw ConfigError("scheduler: multi-channel mode requires radios == channels");
  }
}

namespace {

struct Builder {
  Schedule schedule;
  CandidateSet cand;
  std::vector<char> busy;

  explicit Builder(std::size_t nodes) : busy(nodes, 0) {}

  bool free_for(const Link& l) const { return !busy[l.from.index()] && !busy[l.to.index()]; }

  // Tentatively add `w` at `rate`; keep it when the joint solve is feasible.
  bool try_add(const LinkWeight& w, std::size_t rate, const Topology& topo, const RateTable& rates,
               const PhyConfig& phy) {
    cand.push(w.link, rate);
    const auto sol = solve_powers(build_gain_matrix(cand, topo, rates), phy.noise_mw, phy.max_power_mw);
    if (!sol.feasible()) {
      cand.pop();
      return false;
    }
    schedule.links.push_back({w.link, rate, rates.rate(rate), 0.0, w.commodity, w.value});
    for (std::size_t k = 0; k < schedule.links.size(); ++k) {
      schedule.links[k].power_mw = sol.powers_mw(static_cast<Eigen::Index>(k));
    }
    busy[w.link.from.index()] = 1;
    busy[w.link.to.index()] = 1;
    return true;
  }
};

}  // namespace

std::vector<Schedule> build_schedules(const Topology& topo, const RateTable& rates, const PhyConfig& phy,
                                      std::span<const LinkWeight> weights, std::size_t schedule_count) {
  if (schedule_count == 0) throw ConfigError("scheduler: M must be >= 1");

  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (weights[a].value != weights[b].value) return weights[a].value > weights[b].value;
    return weights[a].link < weights[b].link;
  });
  // Negative-weight links are never scheduled.
  const auto usable_end = std::find_if(order.begin(), order.end(), [&](std::size_t k) {
    return !(weights[k].value >= 0.0);
  });
  order.erase(usable_end, order.end());

  // Single-link feasibility per (link, rate): beta * N0 / G <= P_max. Added
  // interference only raises the requirement, so a failure here rules the
  // rate out for every schedule.
  auto alone_ok = [&](const Link& l, std::size_t r) {
    return rates.beta(r) * phy.noise_mw / topo.gain(l.from, l.to) <= phy.max_power_mw;
  };

  std::vector<Builder> builders(schedule_count, Builder(topo.node_count()));
  std::vector<char> placed(order.size(), 0);

  for (std::size_t m = 0; m < schedule_count && m < order.size(); ++m) {
    const auto& w = weights[order[m]];
    for (std::size_t r = 0; r < rates.size(); ++r) {
      if (alone_ok(w.link, r) && builders[m].try_add(w, r, topo, rates, phy)) break;
    }
    placed[m] = 1;
  }

  for (std::size_t r = 0; r < rates.size(); ++r) {
    for (std::size_t q = 0; q < order.size(); ++q) {
      if (placed[q]) continue;
      const auto& w = weights[order[q]];
      if (!alone_ok(w.link, r)) continue;
      for (auto& b : builders) {
        if (b.free_for(w.link) && b.try_add(w, r, topo, rates, phy)) {
          placed[q] = 1;
          break;
        }
      }
    }
  }

  std::vector<Schedule> out;
  out.reserve(schedule_count);
  for (auto& b : builders) out.push_back(std::move(b.schedule));
  return out;
}

std::vector<double> allocate_time_fractions(std::span<Schedule> schedules) {
  if (schedules.empty()) throw std::invalid_argument("allocate_time_fractions: no schedules");
  std::size_t best = 0;
  double best_sum = schedules[0].rate_sum();
  for (std::size_t m = 1; m < schedules.size(); ++m) {
    const double s = schedules[m].rate_sum();
    if (s > best_sum) {
      best = m;
      best_sum = s;
    }
  }
  std::vector<double> pi(schedules.size(), 0.0);
  pi[best] = 1.0;
  for (std::size_t m = 0; m < schedules.size(); ++m) schedules[m].pi = pi[m];
  return pi;
}

std::vector<ChannelGroup> partition_channels(std::span<Schedule> schedules, std::size_t channels,
                                             std::size_t radios) {
  if (channels < 1) throw ConfigError("scheduler: channels must be >= 1");
  if (channels > radios) throw ConfigError("scheduler: channels exceed radios per node");
  std::vector<ChannelGroup> groups(channels);
  for (std::size_t c = 0; c < channels; ++c) groups[c].channel = c;
  for (std::size_t m = 0; m < schedules.size(); ++m) {
    schedules[m].channel = m % channels;
    groups[m % channels].schedules.push_back(m);
  }
  for (auto& g : groups) {
    if (g.schedules.empty()) continue;
    std::vector<Schedule> local;
    local.reserve(g.schedules.size());
    for (auto m : g.schedules) local.push_back(schedules[m]);
    const auto pi = allocate_time_fractions(local);
    for (std::size_t k = 0; k < g.schedules.size(); ++k) schedules[g.schedules[k]].pi = pi[k];
  }
  return groups;
}

double schedule_objective(const Schedule& s, double pi, const PhyConfig& phy) {
  double sum = 0.0;
  for (const auto& l : s.links) sum += l.rate_bps * pi * phy.slot_s / phy.packet_bits + l.weight;
  return sum;
}

double slot_objective(std::span<const Schedule> schedules, const PhyConfig& phy) {
  double sum = 0.0;
  for (const auto& s : schedules) sum += schedule_objective(s, s.pi, phy);
  return sum;
}

}  // namespace meshsim
