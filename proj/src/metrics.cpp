#include "meshsim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace meshsim {

std::uint64_t MetricsLedger::total_generated() const {
  std::uint64_t n = 0;
  for (const auto& f : flows) n += f.generated;
  return n;
}

std::uint64_t MetricsLedger::total_delivered() const {
  std::uint64_t n = 0;
  for (const auto& f : flows) n += f.delivered;
  return n;
}

double jain_index(std::span<const double> values) {
  if (values.empty()) throw DomainError("jain_index: empty input");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : values) {
    if (!(x > 0.0)) throw DomainError("jain_index: values must be positive");
    sum += x;
    sum_sq += x * x;
  }
  return std::min(1.0, sum * sum / (static_cast<double>(values.size()) * sum_sq));
}

std::vector<double> flow_throughput(const MetricsLedger& ledger, const PhyConfig& phy) {
  std::vector<double> out;
  out.reserve(ledger.flows.size());
  const double seconds = static_cast<double>(ledger.slots) * phy.slot_s;
  for (const auto& f : ledger.flows) {
    out.push_back(seconds > 0.0 ? static_cast<double>(f.delivered) * phy.packet_bits / seconds : 0.0);
  }
  return out;
}

namespace {

std::optional<double> try_jain(const std::vector<std::optional<double>>& xs) {
  std::vector<double> v;
  for (const auto& x : xs) {
    if (!x || !(*x > 0.0)) return std::nullopt;
    v.push_back(*x);
  }
  if (v.empty()) return std::nullopt;
  return jain_index(v);
}

}  // namespace

Report report_tables(const MetricsLedger& ledger, const PhyConfig& phy) {
  Report r;
  r.manifest = ledger.manifest;
  r.gateways = ledger.gateways;
  r.gateway_relays = ledger.gateway_relays;

  const auto thr = flow_throughput(ledger, phy);
  std::vector<std::optional<double>> thr_x, inv_delay_x, ratio_x;
  std::uint64_t delay_sum = 0;
  for (std::size_t i = 0; i < ledger.flows.size(); ++i) {
    const auto& f = ledger.flows[i];
    FlowRow row;
    row.flow = f.spec.id;
    row.source = f.spec.source;
    row.generated = f.generated;
    row.delivered = f.delivered;
    row.backlog = f.generated - f.delivered;
    row.sent_to = f.generated_to;
    row.received_by = f.delivered_by;
    for (std::size_t g = 0; g < f.generated_to.size(); ++g) {
      if (f.generated_to[g] == 0) {
        row.delivery_pct.emplace_back(std::nullopt);
      } else {
        row.delivery_pct.emplace_back(100.0 * static_cast<double>(f.delivered_by[g]) /
                                      static_cast<double>(f.generated_to[g]));
      }
    }
    if (auto y = realized_split(f.generated_to)) row.split = *y;
    row.throughput_mbps = thr[i] / 1e6;
    if (f.delivered > 0) {
      row.mean_delay_slots = static_cast<double>(f.delay_sum_slots) / static_cast<double>(f.delivered);
    }
    delay_sum += f.delay_sum_slots;

    thr_x.emplace_back(row.throughput_mbps);
    if (row.mean_delay_slots) {
      inv_delay_x.emplace_back(1.0 / *row.mean_delay_slots);
      ratio_x.emplace_back(row.throughput_mbps / *row.mean_delay_slots);
    } else {
      inv_delay_x.emplace_back(std::nullopt);
      ratio_x.emplace_back(std::nullopt);
    }
    r.aggregate.throughput_mbps += row.throughput_mbps;
    r.aggregate.received += f.delivered;
    r.aggregate.generated += f.generated;
    r.flows.push_back(std::move(row));
  }
  r.fairness.throughput = try_jain(thr_x);
  r.fairness.inverse_delay = try_jain(inv_delay_x);
  r.fairness.throughput_delay = try_jain(ratio_x);
  if (r.aggregate.received > 0) {
    r.aggregate.mean_delay_slots = static_cast<double>(delay_sum) / static_cast<double>(r.aggregate.received);
    r.aggregate.mean_delay_s = *r.aggregate.mean_delay_slots * phy.slot_s;
  }
  return r;
}

std::string format_cell(std::optional<double> v) {
  if (!v) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

std::string manifest_header(const RunManifest& m) {
  std::ostringstream os;
  os << "# meshsim version=" << m.version << " seed=" << m.seed << " config=" << m.config_hash
     << " policy=" << m.policy << " nodes=" << m.nodes << " area_m=" << format_cell(m.area_m) << " slots=" << m.slots << " channels=" << m.channels
     << " schedules=" << m.schedules;
  return os.str();
}

void write_flows_csv(std::ostream& os, const Report& r) {
  os << manifest_header(r.manifest) << '\n';
  os << "flow,source,generated,delivered,backlog,throughput_mbps,mean_delay_slots";
  for (auto g : r.gateways) os << ",received_gw" << g;
  for (auto g : r.gateways) os << ",split_gw" << g;
  os << '\n';
  for (const auto& f : r.flows) {
    os << f.flow << ',' << f.source << ',' << f.generated << ',' << f.delivered << ',' << f.backlog << ','
       << format_cell(f.throughput_mbps) << ',' << format_cell(f.mean_delay_slots);
    for (auto v : f.received_by) os << ',' << v;
    for (std::size_t g = 0; g < r.gateways.size(); ++g) {
      os << ',' << (f.split.empty() ? std::string("n/a") : format_cell(f.split[g]));
    }
    os << '\n';
  }
}

void write_gateway_delivery_csv(std::ostream& os, const Report& r) {
  os << manifest_header(r.manifest) << '\n';
  os << "flow,source,gateway,sent,received,delivery_pct\n";
  for (const auto& f : r.flows) {
    for (std::size_t g = 0; g < r.gateways.size(); ++g) {
      os << f.flow << ',' << f.source << ',' << r.gateways[g] << ',' << f.sent_to[g] << ',' << f.received_by[g]
         << ',' << format_cell(f.delivery_pct[g]) << '\n';
    }
  }
}

void write_fairness_csv(std::ostream& os, const Report& r) {
  os << manifest_header(r.manifest) << '\n';
  os << "metric,jfi\n";
  os << "throughput," << format_cell(r.fairness.throughput) << '\n';
  os << "inverse_mean_delay," << format_cell(r.fairness.inverse_delay) << '\n';
  os << "throughput_over_mean_delay," << format_cell(r.fairness.throughput_delay) << '\n';
}

void write_aggregate_csv(std::ostream& os, const Report& r) {
  os << manifest_header(r.manifest) << '\n';
  os << "aggregated_throughput_mbps,total_generated,total_received,mean_delay_slots,mean_delay_s,gateway_relays\n";
  os << format_cell(r.aggregate.throughput_mbps) << ',' << r.aggregate.generated << ',' << r.aggregate.received
     << ',' << format_cell(r.aggregate.mean_delay_slots) << ',' << format_cell(r.aggregate.mean_delay_s) << ','
     << r.gateway_relays << '\n';
}

void write_links_csv(std::ostream& os, const MetricsLedger& ledger) {
  os << manifest_header(ledger.manifest) << '\n';
  os << "from,to,allocated_bits,packets";
  for (auto g : ledger.gateways) os << ",allocated_bits_gw" << g;
  os << '\n';
  for (const auto& l : ledger.links) {
    os << l.link.from << ',' << l.link.to << ',' << format_cell(l.allocated_bits) << ',' << l.packets;
    for (double b : l.allocated_bits_per_gw) os << ',' << format_cell(b);
    os << '\n';
  }
}

std::string summary_json(const Report& r) {
  using nlohmann::ordered_json;
  auto opt = [](std::optional<double> v) -> ordered_json { return v ? ordered_json(*v) : ordered_json(nullptr); };

  ordered_json j;
  j["manifest"] = {{"version", r.manifest.version},   {"seed", r.manifest.seed},
                   {"config_hash", r.manifest.config_hash}, {"policy", r.manifest.policy},
                   {"nodes", r.manifest.nodes},         {"area_m", r.manifest.area_m},
                   {"slots", r.manifest.slots},
                   {"channels", r.manifest.channels},   {"schedules", r.manifest.schedules}};
  ordered_json gws = ordered_json::array();
  for (auto g : r.gateways) gws.push_back(g.value);
  j["gateways"] = gws;
  j["aggregate"] = {{"throughput_mbps", r.aggregate.throughput_mbps},
                    {"generated", r.aggregate.generated},
                    {"received", r.aggregate.received},
                    {"mean_delay_slots", opt(r.aggregate.mean_delay_slots)},
                    {"mean_delay_s", opt(r.aggregate.mean_delay_s)},
                    {"gateway_relays", r.gateway_relays}};
  j["fairness"] = {{"throughput", opt(r.fairness.throughput)},
                   {"inverse_mean_delay", opt(r.fairness.inverse_delay)},
                   {"throughput_over_mean_delay", opt(r.fairness.throughput_delay)}};
  ordered_json flows = ordered_json::array();
  for (const auto& f : r.flows) {
    ordered_json pct = ordered_json::array();
    for (auto p : f.delivery_pct) pct.push_back(opt(p));
    flows.push_back({{"flow", f.flow},
                     {"source", f.source.value},
                     {"generated", f.generated},
                     {"delivered", f.delivered},
                     {"backlog", f.backlog},
                     {"throughput_mbps", f.throughput_mbps},
                     {"mean_delay_slots", opt(f.mean_delay_slots)},
                     {"sent_to", f.sent_to},
                     {"received_by", f.received_by},
                     {"delivery_pct", pct},
                     {"split", f.split}});
  }
  j["flows"] = flows;
  return j.dump(2) + "\n";
}

}  // namespace meshsim
