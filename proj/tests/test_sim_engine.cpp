#include <doctest.h>

#include "meshsim/sim_engine.hpp"
#include "meshsim/topology.hpp"
#include "test_util.hpp"

using namespace meshsim;
using testutil::l;
using testutil::n;

namespace {

// Two nodes 10 m apart; node 1 is the gateway, node 2 the only source.
Topology pair_topology() {
  auto t = testutil::line({0, 10});
  t.add_edge(n(1), n(2));
  t.set_gateways({n(1)});
  return t;
}

SimConfig one_flow(NodeId src) {
  SimConfig cfg;
  cfg.flows = {{1, src}};
  return cfg;
}

Topology sampled(std::uint64_t seed) {
  auto t = build_pruned_topology(sample_positions(10, 350.0, seed), PhyConfig{});
  t.set_gateways(max_distance_pair(t));
  return t;
}

std::uint64_t seed_connected(std::uint64_t from) {
  for (std::uint64_t s = from;; ++s) {
    if (sampled(s).connected()) return s;
  }
}

}  // namespace

TEST_CASE("54 Mbps link moves two packets and keeps the remainder") {
  Simulation sim(pair_topology(), one_flow(n(2)));
  sim.step();
  const auto k = sim.weight_state().index()(l(2, 1));
  CHECK(sim.credits()[k] == doctest::Approx(33750.0 - 2 * 11760.0));
  CHECK(sim.ledger().flows[0].generated == 10);
  CHECK(sim.ledger().flows[0].delivered == 2);
  CHECK(sim.queues().length(n(2), 0) == 8);
  REQUIRE(sim.last_schedules().size() == 2);
  CHECK(sim.last_schedules()[0].pi == 1.0);
  CHECK(sim.last_schedules()[0].links.at(0).rate_bps == 54e6);
}

TEST_CASE("6 Mbps link delivers its first packet in the fourth slot") {
  auto cfg = one_flow(n(2));
  cfg.rates = RateTable::parse("6:6.02");
  Simulation sim(pair_topology(), cfg);
  sim.run(3);
  CHECK(sim.ledger().flows[0].delivered == 0);
  const auto k = sim.weight_state().index()(l(2, 1));
  CHECK(sim.credits()[k] == doctest::Approx(3 * 3750.0));
  sim.step();
  CHECK(sim.ledger().flows[0].delivered == 1);
  CHECK(sim.credits()[k] == doctest::Approx(4 * 3750.0 - 11760.0));
  CHECK(sim.ledger().flows[0].delay_sum_slots == 4);
}

TEST_CASE("zero slots give an empty ledger") {
  Simulation sim(pair_topology(), one_flow(n(2)));
  sim.run(0);
  const auto& led = sim.ledger();
  CHECK(led.slots == 0);
  CHECK(led.total_generated() == 0);
  CHECK(led.total_delivered() == 0);
  CHECK(led.queued_at_end == 0);
  for (const auto& lc : led.links) CHECK(lc.allocated_bits == 0.0);
}

TEST_CASE("uncongested single hop delivers everything after one slot") {
  auto cfg = one_flow(n(2));
  cfg.traffic.max_rate_pkts = 1.0;
  Simulation sim(pair_topology(), cfg);
  sim.run(500);
  const auto& f = sim.ledger().flows[0];
  CHECK(f.generated == 500);
  CHECK(f.delivered == 500);
  CHECK(f.delay_sum_slots == 500);
  CHECK(f.hop_sum == 500);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(Simulation(pair_topology(), one_flow(n(1))), ConfigError);
  CHECK_THROWS_AS(Simulation(pair_topology(), one_flow(n(3))), ConfigError);
  SimConfig bad_ids;
  bad_ids.flows = {{2, n(2)}};
  CHECK_THROWS_AS(Simulation(pair_topology(), bad_ids), ConfigError);
  auto bad_v = one_flow(n(2));
  bad_v.traffic.v = 0.0;
  CHECK_THROWS_AS(Simulation(pair_topology(), bad_v), ConfigError);
  auto bad_c = one_flow(n(2));
  bad_c.scheduler.channels = 2;
  CHECK_THROWS_AS(Simulation(pair_topology(), bad_c), ConfigError);

  auto split = testutil::line({0, 10, 500, 510});
  split.add_edge(n(1), n(2));
  split.add_edge(n(3), n(4));
  split.set_gateways({n(1)});
  CHECK_THROWS_AS(Simulation(split, one_flow(n(2))), TopologyError);
}

TEST_CASE("per-slot queue law, conservation and commodity discipline") {
  const auto topo = sampled(seed_connected(1));
  for (auto policy : kAllPolicies) {
    SimConfig cfg;
    cfg.policy = policy;
    cfg.flows = first_non_gateway_flows(topo, 8);
    Simulation sim(topo, cfg);
    const std::size_t G = topo.gateways().size();
    std::vector<std::int64_t> net(topo.node_count() * G, 0);
    bool law_ok = true, discipline_ok = true;
    sim.set_observer([&](const SlotTrace& t) {
      for (std::size_t i = 0; i < topo.node_count(); ++i) {
        for (std::size_t d = 0; d < G; ++d) {
          const auto k = i * G + d;
          if (topo.gateways()[d] == NodeId::from_index(i)) {
            law_ok = law_ok && t.queue_start[k] == 0 && t.queue_end[k] == 0;
            continue;
          }
          const auto avail = t.queue_start[k] + t.generated[k];
          law_ok = law_ok && t.sent[k] <= avail && t.queue_end[k] == avail - t.sent[k] + t.received[k];
          net[k] += static_cast<std::int64_t>(t.generated[k] + t.received[k]) - static_cast<std::int64_t>(t.sent[k]);
        }
      }
      for (const auto& m : t.moves) {
        for (auto c : m.packet_commodities) discipline_ok = discipline_ok && c == m.commodity;
      }
    });
    sim.run(400);
    CHECK(law_ok);
    CHECK(discipline_ok);

    for (std::size_t i = 0; i < topo.node_count(); ++i) {
      for (std::size_t d = 0; d < G; ++d) {
        const auto node = NodeId::from_index(i);
        if (topo.gateways()[d] == node) continue;
        CHECK(net[i * G + d] == static_cast<std::int64_t>(sim.queues().length(node, d)));
      }
    }

    // Per flow and per commodity: generated = delivered + queued.
    std::vector<std::uint64_t> queued_flow(cfg.flows.size(), 0), queued_comm(G, 0);
    for (std::size_t i = 0; i < topo.node_count(); ++i) {
      for (std::size_t d = 0; d < G; ++d) {
        for (const auto& p : sim.queues().fifo(NodeId::from_index(i), d)) {
          ++queued_flow[p.flow - 1];
          ++queued_comm[p.commodity];
          CHECK(p.commodity == d);
        }
      }
    }
    std::vector<std::uint64_t> gen_comm(G, 0), del_comm(G, 0);
    for (std::size_t f = 0; f < cfg.flows.size(); ++f) {
      const auto& fc = sim.ledger().flows[f];
      CHECK(fc.generated == fc.delivered + queued_flow[f]);
      for (std::size_t d = 0; d < G; ++d) {
        gen_comm[d] += fc.generated_to[d];
        del_comm[d] += fc.delivered_by[d];
      }
      if (fc.delivered > 0) {
        // Every delivered packet walked at least the graph distance to some gateway.
        std::size_t nearest = SIZE_MAX;
        for (auto g : topo.gateways()) nearest = std::min(nearest, topo.hop_distance(fc.spec.source, g));
        CHECK(fc.hop_sum >= fc.delivered * nearest);
        CHECK(fc.delay_sum_slots >= fc.hop_sum);
      }
    }
    for (std::size_t d = 0; d < G; ++d) CHECK(gen_comm[d] == del_comm[d] + queued_comm[d]);
  }
}

TEST_CASE("runs are deterministic") {
  const auto topo = sampled(seed_connected(2));
  SimConfig cfg;
  cfg.policy = Policy::kWrdD;
  cfg.flows = first_non_gateway_flows(topo, 8);
  Simulation a(topo, cfg), b(topo, cfg);
  a.run(300);
  b.run(300);
  for (std::size_t f = 0; f < 8; ++f) {
    CHECK(a.ledger().flows[f].delivered == b.ledger().flows[f].delivered);
    CHECK(a.ledger().flows[f].delay_sum_slots == b.ledger().flows[f].delay_sum_slots);
  }
  for (std::size_t k = 0; k < a.ledger().links.size(); ++k) {
    CHECK(a.ledger().links[k].allocated_bits == b.ledger().links[k].allocated_bits);
  }
}

TEST_CASE("two channels run two schedules at once") {
  const auto topo = sampled(seed_connected(1));
  SimConfig cfg;
  cfg.policy = Policy::kWr;
  cfg.flows = first_non_gateway_flows(topo, 8);
  cfg.scheduler.channels = 2;
  cfg.scheduler.radios = 2;
  Simulation sim(topo, cfg);
  std::size_t both = 0;
  sim.set_observer([&](const SlotTrace& t) {
    std::size_t active[2] = {0, 0};
    for (const auto& s : *t.schedules) {
      if (s.pi > 0.0 && !s.empty()) ++active[s.channel];
    }
    if (active[0] == 1 && active[1] == 1) ++both;
    CHECK(active[0] <= 1);
    CHECK(active[1] <= 1);
  });
  sim.run(200);
  CHECK(both > 100);
}

TEST_CASE("cumulative rate counters match the ledger") {
  const auto topo = sampled(seed_connected(3));
  SimConfig cfg;
  cfg.policy = Policy::kWrd;
  cfg.flows = first_non_gateway_flows(topo, 8);
  Simulation sim(topo, cfg);
  sim.run(200);
  const double unit_bits = cfg.rates.lowest_rate() * cfg.phy.slot_s;
  for (std::size_t k = 0; k < topo.links().size(); ++k) {
    const auto& lc = sim.ledger().links[k];
    CHECK(sim.weight_state().cumulative(k) * unit_bits == doctest::Approx(lc.allocated_bits));
    double per = 0.0;
    for (std::size_t d = 0; d < topo.gateways().size(); ++d) per += sim.weight_state().cumulative(k, d);
    CHECK(per == doctest::Approx(sim.weight_state().cumulative(k)));
  }
}
