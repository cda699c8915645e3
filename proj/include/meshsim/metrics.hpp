#pragma once

// Run ledger, derived metrics (throughput, delay, delivery ratios, Jain's
// index) and the table/JSON report writers.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meshsim/traffic.hpp"

namespace meshsim {

struct RunManifest {
  std::string version;
  std::uint64_t seed = 0;
  std::string config_hash;  // 16 hex digits
  std::string policy;
  std::size_t nodes = 0;
  double area_m = 0.0;
  std::size_t slots = 0;
  std::size_t channels = 1;
  std::size_t schedules = 0;
};

struct FlowCounters {
  FlowSpec spec;
  std::uint64_t generated = 0;
  std::vector<std::uint64_t> generated_to;  // per gateway
  std::vector<std::uint64_t> delivered_by;  // per gateway
  std::uint64_t delivered = 0;
  std::uint64_t delay_sum_slots = 0;
  std::uint64_t hop_sum = 0;
};

struct LinkCounters {
  Link link;
  double allocated_bits = 0.0;                // sum of rate * pi * l_t
  std::vector<double> allocated_bits_per_gw;  // same, by commodity
  std::uint64_t packets = 0;
};

struct MetricsLedger {
  RunManifest manifest;
  std::vector<NodeId> gateways;
  std::size_t slots = 0;
  std::vector<FlowCounters> flows;
  std::vector<LinkCounters> links;
  /// Packets of another gateway's commodity relayed through a gateway.
  std::uint64_t gateway_relays = 0;
  std::uint64_t queued_at_end = 0;

  std::uint64_t total_generated() const;
  std::uint64_t total_delivered() const;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (sum x)^2 / (n sum x^2). Requires n >= 1 and every x > 0.
double jain_index(std::span<const double> values);

/// delivered * l_p / (T * l_t), bits per second, one entry per flow.
std::vector<double> flow_throughput(const MetricsLedger& ledger, const PhyConfig& phy);

struct FlowRow {
  std::uint32_t flow = 0;
  NodeId source;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t backlog = 0;  // generated but not delivered
  std::vector<std::uint64_t> sent_to;
  std::vector<std::uint64_t> received_by;
  std::vector<std::optional<double>> delivery_pct;  // per gateway; absent when nothing was sent there
  std::vector<double> split;                        // realized y_d; empty when nothing generated
  double throughput_mbps = 0.0;
  std::optional<double> mean_delay_slots;
};

struct FairnessRow {
  std::optional<double> throughput;       // JFI over per-flow throughput
  std::optional<double> inverse_delay;    // JFI over 1 / mean delay
  std::optional<double> throughput_delay; // JFI over throughput / mean delay
};

struct AggregateRow {
  double throughput_mbps = 0.0;
  std::uint64_t received = 0;
  std::uint64_t generated = 0;
  std::optional<double> mean_delay_slots;
  std::optional<double> mean_delay_s;
};

struct Report {
  RunManifest manifest;
  std::vector<NodeId> gateways;
  std::vector<FlowRow> flows;
  FairnessRow fairness;
  AggregateRow aggregate;
  std::uint64_t gateway_relays = 0;
};

Report report_tables(const MetricsLedger& ledger, const PhyConfig& phy);

/// "# key=value ..." header line shared by every CSV output.
std::string manifest_header(const RunManifest& m);

void write_flows_csv(std::ostream& os, const Report& r);
void write_gateway_delivery_csv(std::ostream& os, const Report& r);
void write_fairness_csv(std::ostream& os, const Report& r);
void write_aggregate_csv(std::ostream& os, const Report& r);
void write_links_csv(std::ostream& os, const MetricsLedger& ledger);
std::string summary_json(const Report& r);

/// Fixed-format number for CSV/JSON cells; "n/a" for absent values.
std::string format_cell(std::optional<double> v);

}  // namespace meshsim
