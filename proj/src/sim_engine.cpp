#include "meshsim/sim_engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "meshsim/topology.hpp"

namespace meshsim {

Simulation::Simulation(Topology topo, SimConfig cfg) : topo_(std::move(topo)), cfg_(std::move(cfg)) {
  cfg_.phy.validate();
  cfg_.scheduler.validate();
  if (topo_.gateways().empty()) throw ConfigError("simulation: no gateways configured");
  require_connected(topo_);
  for (std::size_t k = 0; k < cfg_.flows.size(); ++k) {
    const auto& f = cfg_.flows[k];
    if (f.id != k + 1) throw ConfigError("simulation: flow ids must run 1..K in order");
    if (f.source.value == 0 || f.source.index() >= topo_.node_count()) {
      throw ConfigError("simulation: flow source out of range");
    }
    if (topo_.is_gateway(f.source)) throw ConfigError("simulation: flow source is a gateway");
  }
  if (!(cfg_.traffic.v > 0.0) || !(cfg_.traffic.max_rate_pkts > 0.0)) {
    throw ConfigError("simulation: V and max rate must be positive");
  }

  const auto commodities = topo_.gateways().size();
  queues_ = QueueState(topo_.node_count(), topo_.gateways());
  weights_ = WeightState(topo_, commodities, cfg_.rates.lowest_rate(), cfg_.policy);
  for (const auto& f : cfg_.flows) controllers_.emplace_back(f);
  credit_bits_.assign(topo_.links().size(), 0.0);
  schedule_count_ = cfg_.scheduler.schedules_for(commodities);

  ledger_.gateways = topo_.gateways();
  for (const auto& f : cfg_.flows) {
    FlowCounters c;
    c.spec = f;
    c.generated_to.assign(commodities, 0);
    c.delivered_by.assign(commodities, 0);
    ledger_.flows.push_back(std::move(c));
  }
  for (const auto& l : topo_.links()) {
    LinkCounters c;
    c.link = l;
    c.allocated_bits_per_gw.assign(commodities, 0.0);
    ledger_.links.push_back(std::move(c));
  }
}

void Simulation::run(std::size_t slots) {
  for (std::size_t i = 0; i < slots; ++i) step();
}

void Simulation::step() {
  const Slot t = now_;
  const std::size_t nodes = topo_.node_count();
  const std::size_t commodities = queues_.commodity_count();
  const bool tracing = static_cast<bool>(observer_);

  SlotTrace trace;
  if (tracing) {
    trace.slot = t;
    trace.commodities = commodities;
    trace.queue_start.resize(nodes * commodities);
    trace.generated.assign(nodes * commodities, 0);
    trace.sent.assign(nodes * commodities, 0);
    trace.received.assign(nodes * commodities, 0);
    for (std::size_t i = 0; i < nodes; ++i) {
      for (std::size_t d = 0; d < commodities; ++d) {
        trace.queue_start[i * commodities + d] = queues_.length(NodeId::from_index(i), d);
      }
    }
  }

  // (1) Admission at flow sources, before this slot's service.
  std::vector<double> budget(nodes, cfg_.traffic.max_rate_pkts);
  std::vector<std::uint32_t> packet_budget(nodes, static_cast<std::uint32_t>(cfg_.traffic.max_rate_pkts));
  for (std::size_t f = 0; f < controllers_.size(); ++f) {
    auto& ctl = controllers_[f];
    const NodeId src = ctl.flow().source;
    const auto adm = ctl.control(queues_, cfg_.traffic, budget[src.index()], packet_budget[src.index()]);
    budget[src.index()] -= adm.admitted;
    packet_budget[src.index()] -= adm.packets;
    for (std::uint32_t k = 0; k < adm.packets; ++k) {
      queues_.push(src, Packet{ctl.flow().id, src, adm.commodity, t, 0});
    }
    auto& fc = ledger_.flows[f];
    fc.generated += adm.packets;
    fc.generated_to[adm.commodity] += adm.packets;
    if (tracing) trace.generated[src.index() * commodities + adm.commodity] += adm.packets;
  }

  // (2) Link weights; (3) schedules and time fractions.
  const auto link_weights = compute_link_weights(topo_, queues_, weights_, t);
  schedules_ = build_schedules(topo_, cfg_.rates, cfg_.phy, link_weights, schedule_count_);
  partition_channels(schedules_, cfg_.scheduler.channels, cfg_.scheduler.radios);

  // (4) Transport over active links, highest weight first. Arrivals are
  // staged and become visible next slot.
  struct Active {
    const ScheduledLink* link;
    double pi;
  };
  std::vector<Active> active;
  for (const auto& s : schedules_) {
    if (!(s.pi > 0.0)) continue;
    for (const auto& l : s.links) active.push_back({&l, s.pi});
  }
  std::stable_sort(active.begin(), active.end(), [](const Active& a, const Active& b) {
    if (a.link->weight != b.link->weight) return a.link->weight > b.link->weight;
    return a.link->link < b.link->link;
  });

  std::vector<std::pair<NodeId, Packet>> staged;
  for (const auto& a : active) {
    const auto& sl = *a.link;
    const auto k = weights_.index()(sl.link);
    const std::size_t d = sl.commodity;
    auto& credit = credit_bits_[k];
    credit += sl.rate_bps * a.pi * cfg_.phy.slot_s;

    SlotTrace::Move move{sl.link, d, 0, {}};
    while (credit >= cfg_.phy.packet_bits && !queues_.empty(sl.link.from, d)) {
      Packet p = queues_.pop(sl.link.from, d);
      credit -= cfg_.phy.packet_bits;
      ++p.hops;
      if (tracing) move.packet_commodities.push_back(p.commodity);
      staged.emplace_back(sl.link.to, p);
      ++move.packets;
    }
    // Airtime with nothing left to send is lost.
    if (queues_.empty(sl.link.from, d)) credit = 0.0;

    weights_.record(k, d, sl.rate_bps, a.pi);
    auto& lc = ledger_.links[k];
    lc.allocated_bits += sl.rate_bps * a.pi * cfg_.phy.slot_s;
    lc.allocated_bits_per_gw[d] += sl.rate_bps * a.pi * cfg_.phy.slot_s;
    lc.packets += move.packets;
    if (tracing) {
      trace.sent[sl.link.from.index() * commodities + d] += move.packets;
      trace.received[sl.link.to.index() * commodities + d] += move.packets;
      trace.moves.push_back(std::move(move));
    }
  }

  // (5) Arrivals land at the start of the next slot.
  const Slot arrival = t + 1;
  for (auto& [node, p] : staged) {
    if (queues_.gateway(p.commodity) == node) {
      auto& fc = ledger_.flows[p.flow - 1];
      fc.delivered += 1;
      fc.delivered_by[p.commodity] += 1;
      fc.delay_sum_slots += static_cast<std::uint64_t>(arrival - p.created);
      fc.hop_sum += p.hops;
    } else {
      if (topo_.is_gateway(node)) ++ledger_.gateway_relays;
      queues_.push(node, p);
    }
  }

  ++now_;
  ledger_.slots = static_cast<std::size_t>(now_);
  ledger_.queued_at_end = queues_.total();

  if (tracing) {
    trace.queue_end.resize(nodes * commodities);
    for (std::size_t i = 0; i < nodes; ++i) {
      for (std::size_t d = 0; d < commodities; ++d) {
        trace.queue_end[i * commodities + d] = queues_.length(NodeId::from_index(i), d);
      }
    }
    trace.schedules = &schedules_;
    observer_(trace);
  }
}

}  // namespace meshsim
