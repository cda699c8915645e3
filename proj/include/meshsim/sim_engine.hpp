#pragma once

// Slotted simulation loop: admission -> weights -> schedules -> time
// fractions -> packet transport -> queue update -> ledger.

#include <functional>
#include <vector>

#include "meshsim/metrics.hpp"
#include "meshsim/scheduler.hpp"
#include "meshsim/traffic.hpp"
#include "meshsim/weights.hpp"

namespace meshsim {

struct SimConfig {
  PhyConfig phy;
  RateTable rates = RateTable::ieee80211a();
  TrafficConfig traffic;
  Policy policy = Policy::kW;
  SchedulerConfig scheduler;
  std::vector<FlowSpec> flows;
};

/// What happened in one slot, for tracing and invariant checks. Per-(node,
/// commodity) arrays are indexed node_index * commodities + commodity.
struct SlotTrace {
  Slot slot = 0;
  std::size_t commodities = 0;
  std::vector<std::size_t> queue_start;   // Q_i^(d)(t) before admission
  std::vector<std::size_t> generated;     // admitted at the node this slot
  std::vector<std::size_t> sent;          // packets leaving the node
  std::vector<std::size_t> received;      // packets arriving (visible next slot)
  std::vector<std::size_t> queue_end;     // Q_i^(d)(t+1)
  const std::vector<Schedule>* schedules = nullptr;

  struct Move {
    Link link;
    std::size_t commodity;
    std::size_t packets;
    std::vector<std::size_t> packet_commodities;  // commodity of every moved packet
  };
  std::vector<Move> moves;
};

class Simulation {
 public:
  using Observer = std::function<void(const SlotTrace&)>;

  /// Throws TopologyError if the topology is disconnected and ConfigError
  /// for invalid flows or scheduler settings.
  Simulation(Topology topo, SimConfig cfg);

  const Topology& topology() const { return topo_; }
  const SimConfig& config() const { return cfg_; }
  const QueueState& queues() const { return queues_; }
  const WeightState& weight_state() const { return weights_; }
  const MetricsLedger& ledger() const { return ledger_; }
  MetricsLedger& ledger() { return ledger_; }
  Slot now() const { return now_; }
  std::size_t schedule_count() const { return schedule_count_; }

  void set_observer(Observer obs) { observer_ = std::move(obs); }

  /// Advance one slot.
  void step();
  void run(std::size_t slots);

  /// Last slot's schedules (with pi and channel filled).
  const std::vector<Schedule>& last_schedules() const { return schedules_; }
  /// Per-link transport credit in bits, topology link order.
  const std::vector<double>& credits() const { return credit_bits_; }

 private:
  Topology topo_;
  SimConfig cfg_;
  QueueState queues_;
  WeightState weights_;
  std::vector<RateController> controllers_;
  std::vector<double> credit_bits_;
  std::vector<Schedule> schedules_;
  MetricsLedger ledger_;
  std::size_t schedule_count_ = 1;
  Slot now_ = 0;
  Observer observer_;
};

}  // namespace meshsim
