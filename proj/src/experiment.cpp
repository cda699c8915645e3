#include "meshsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>
#include <cstdio>
#include <memory>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "meshsim/topology.hpp"

#ifndef MESHSIM_VERSION
#define MESHSIM_VERSION "0.1.0"
#endif

namespace meshsim {

namespace fs = std::filesystem;

const char* version_string() { return MESHSIM_VERSION; }

void write_file_atomic(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    writer(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

RunResult execute_run(const RunSpec& spec, const Simulation::Observer& observer) {
  Topology topo = make_topology(spec);
  require_connected(topo);
  SimConfig cfg = spec.sim;
  cfg.flows = make_flows(spec, topo);

  Simulation sim(topo, cfg);
  auto& m = sim.ledger().manifest;
  m.version = version_string();
  m.seed = spec.seed;
  m.config_hash = spec.hash();
  m.policy = std::string(policy_name(spec.sim.policy));
  m.nodes = topo.node_count();
  m.area_m = spec.area_m;
  m.slots = spec.slots;
  m.channels = spec.sim.scheduler.channels;
  m.schedules = sim.schedule_count();
  if (observer) sim.set_observer(observer);
  sim.run(spec.slots);

  RunResult out{std::move(topo), sim.ledger(), {}};
  out.report = report_tables(out.ledger, spec.sim.phy);
  return out;
}

SummaryRow summarize(const RunSpec& spec, const Report& report) {
  SummaryRow s;
  s.prefix = spec.file_prefix();
  s.config_hash = report.manifest.config_hash;
  s.nodes = report.manifest.nodes;
  s.area_m = spec.area_m;
  s.seed = spec.seed;
  s.policy = report.manifest.policy;
  s.channels = report.manifest.channels;
  s.slots = report.manifest.slots;
  s.throughput_mbps = report.aggregate.throughput_mbps;
  s.received = report.aggregate.received;
  s.mean_delay_slots = report.aggregate.mean_delay_slots;
  s.jfi_throughput = report.fairness.throughput;
  s.jfi_inverse_delay = report.fairness.inverse_delay;
  s.jfi_throughput_delay = report.fairness.throughput_delay;
  for (const auto& f : report.flows) {
    s.flow_throughput_mbps.push_back(f.throughput_mbps);
    s.flow_mean_delay_slots.push_back(f.mean_delay_slots);
  }
  return s;
}

std::optional<SummaryRow> read_summary(const fs::path& json_path) {
  std::ifstream in(json_path);
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    auto opt = [](const nlohmann::json& v) -> std::optional<double> {
      return v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
    };
    SummaryRow s;
    const auto& m = j.at("manifest");
    s.config_hash = m.at("config_hash").get<std::string>();
    s.nodes = m.at("nodes").get<std::size_t>();
    s.area_m = m.at("area_m").get<double>();
    s.seed = m.at("seed").get<std::uint64_t>();
    s.policy = m.at("policy").get<std::string>();
    s.channels = m.at("channels").get<std::size_t>();
    s.slots = m.at("slots").get<std::size_t>();
    const auto& a = j.at("aggregate");
    s.throughput_mbps = a.at("throughput_mbps").get<double>();
    s.received = a.at("received").get<std::uint64_t>();
    s.mean_delay_slots = opt(a.at("mean_delay_slots"));
    const auto& f = j.at("fairness");
    s.jfi_throughput = opt(f.at("throughput"));
    s.jfi_inverse_delay = opt(f.at("inverse_mean_delay"));
    s.jfi_throughput_delay = opt(f.at("throughput_over_mean_delay"));
    for (const auto& flow : j.at("flows")) {
      s.flow_throughput_mbps.push_back(flow.at("throughput_mbps").get<double>());
      s.flow_mean_delay_slots.push_back(opt(flow.at("mean_delay_slots")));
    }
    return s;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

namespace {

class TraceWriter {
 public:
  TraceWriter(const RunManifest& header_source, std::ostream& schedules, std::ostream& queues,
              const std::vector<NodeId>& gateways)
      : schedules_(schedules), queues_(queues), gateways_(gateways) {
    schedules_ << manifest_header(header_source) << '\n'
               << "slot,m,channel,from,to,rate_mbps,power_mw,commodity,pi\n";
    queues_ << manifest_header(header_source) << '\n'
            << "slot,node,gateway,queue_start,generated,sent,received,queue_end\n";
  }

  void operator()(const SlotTrace& t) {
    char buf[64];
    for (std::size_t m = 0; m < t.schedules->size(); ++m) {
      const auto& s = (*t.schedules)[m];
      for (const auto& l : s.links) {
        std::snprintf(buf, sizeof buf, "%.9e", l.power_mw);
        schedules_ << t.slot << ',' << m + 1 << ',' << s.channel << ',' << l.link.from << ',' << l.link.to << ','
                   << l.rate_bps / 1e6 << ',' << buf << ',' << gateways_[l.commodity] << ',' << s.pi << '\n';
      }
    }
    const std::size_t nodes = t.queue_start.size() / t.commodities;
    for (std::size_t i = 0; i < nodes; ++i) {
      for (std::size_t d = 0; d < t.commodities; ++d) {
        const auto k = i * t.commodities + d;
        queues_ << t.slot << ',' << i + 1 << ',' << gateways_[d] << ',' << t.queue_start[k] << ','
                << t.generated[k] << ',' << t.sent[k] << ',' << t.received[k] << ',' << t.queue_end[k] << '\n';
      }
    }
  }

 private:
  std::ostream& schedules_;
  std::ostream& queues_;
  std::vector<NodeId> gateways_;
};

void write_run_outputs(const fs::path& dir, const RunSpec& spec, const RunResult& res) {
  const auto base = dir / spec.file_prefix();
  auto path = [&](const char* suffix) {
    fs::path p = base;
    p += suffix;
    return p;
  };
  write_file_atomic(path("_flows.csv"), [&](std::ostream& os) { write_flows_csv(os, res.report); });
  write_file_atomic(path("_gateways.csv"), [&](std::ostream& os) { write_gateway_delivery_csv(os, res.report); });
  write_file_atomic(path("_fairness.csv"), [&](std::ostream& os) { write_fairness_csv(os, res.report); });
  write_file_atomic(path("_aggregate.csv"), [&](std::ostream& os) { write_aggregate_csv(os, res.report); });
  write_file_atomic(path("_links.csv"), [&](std::ostream& os) { write_links_csv(os, res.ledger); });
  write_file_atomic(path("_topology.txt"), [&](std::ostream& os) {
    os << manifest_header(res.ledger.manifest) << '\n';
    write_edge_list(os, res.topology);
  });
  // Written last: its presence marks the run complete.
  write_file_atomic(path("_summary.json"), [&](std::ostream& os) { os << summary_json(res.report); });
}

RunOutcome run_one(const RunSpec& spec, const ExperimentPlan& plan) {
  RunOutcome out{spec, {}, false};
  fs::path json = plan.out_dir / spec.file_prefix();
  json += "_summary.json";
  if (auto prev = read_summary(json); prev && prev->config_hash == spec.hash()) {
    prev->prefix = spec.file_prefix();
    out.summary = *prev;
    out.skipped = true;
    return out;
  }

  RunResult res;
  if (plan.trace) {
    const auto base = plan.out_dir / spec.file_prefix();
    fs::path sched_path = base, queue_path = base;
    sched_path += "_trace.csv";
    queue_path += "_queues.csv";
    std::ostringstream sched_buf, queue_buf;
    const auto gateways = make_topology(spec).gateways();
    RunManifest header;
    header.version = version_string();
    header.seed = spec.seed;
    header.config_hash = spec.hash();
    header.policy = std::string(policy_name(spec.sim.policy));
    header.nodes = spec.nodes;
    header.area_m = spec.area_m;
    header.slots = spec.slots;
    header.channels = spec.sim.scheduler.channels;
    header.schedules = spec.sim.scheduler.schedules_for(gateways.size());
    TraceWriter writer(header, sched_buf, queue_buf, gateways);
    res = execute_run(spec, [&](const SlotTrace& t) { writer(t); });
    write_file_atomic(sched_path, [&](std::ostream& os) { os << sched_buf.str(); });
    write_file_atomic(queue_path, [&](std::ostream& os) { os << queue_buf.str(); });
  } else {
    res = execute_run(spec);
  }
  write_run_outputs(plan.out_dir, spec, res);
  out.summary = summarize(spec, res.report);
  return out;
}

}  // namespace

std::vector<RunOutcome> run_experiment(const ExperimentPlan& plan, std::ostream& log) {
  std::set<std::string> prefixes;
  for (const auto& r : plan.runs) {
    if (!prefixes.insert(r.file_prefix()).second) {
      throw ConfigError("plan has two runs with output prefix " + r.file_prefix());
    }
    r.sim.phy.validate();
    r.sim.scheduler.validate();
    const auto topo = make_topology(r);
    require_connected(topo);
    (void)make_flows(r, topo);
  }
  fs::create_directories(plan.out_dir);

  std::vector<RunOutcome> outcomes(plan.runs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const auto i = next.fetch_add(1);
      if (i >= plan.runs.size()) return;
      try {
        outcomes[i] = run_one(plan.runs[i], plan);
        std::lock_guard lock(log_mutex);
        const auto& s = outcomes[i].summary;
        log << (outcomes[i].skipped ? "skip " : "done ") << s.prefix << "  thr=" << format_cell(s.throughput_mbps)
            << " Mbps  received=" << s.received << "  jfi=" << format_cell(s.jfi_throughput) << '\n';
      } catch (...) {
        std::lock_guard lock(log_mutex);
        if (!failure) failure = std::current_exception();
        next = plan.runs.size();
        return;
      }
    }
  };

  std::size_t jobs = plan.jobs ? plan.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(plan.runs.size(), 1));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  write_file_atomic(plan.out_dir / "sweep_summary.csv", [&](std::ostream& os) { write_sweep_summary(os, outcomes); });
  write_file_atomic(plan.out_dir / "sweep_policy_means.csv",
                    [&](std::ostream& os) { write_policy_means(os, outcomes); });
  return outcomes;
}

void write_sweep_summary(std::ostream& os, const std::vector<RunOutcome>& runs) {
  os << "# meshsim version=" << version_string() << " sweep summary\n";
  os << "prefix,config,nodes,area_m,seed,policy,channels,slots,aggregated_throughput_mbps,total_received,"
        "mean_delay_slots,jfi_throughput,jfi_inverse_delay,jfi_throughput_over_delay\n";
  for (const auto& r : runs) {
    const auto& s = r.summary;
    os << s.prefix << ',' << s.config_hash << ',' << s.nodes << ',' << format_cell(s.area_m) << ',' << s.seed << ','
       << s.policy << ',' << s.channels << ',' << s.slots << ',' << format_cell(s.throughput_mbps) << ','
       << s.received << ',' << format_cell(s.mean_delay_slots) << ',' << format_cell(s.jfi_throughput) << ','
       << format_cell(s.jfi_inverse_delay) << ',' << format_cell(s.jfi_throughput_delay) << '\n';
  }
}

void write_policy_means(std::ostream& os, const std::vector<RunOutcome>& runs) {
  struct Acc {
    std::size_t count = 0;
    double thr = 0.0, received = 0.0;
    std::vector<double> delay, jfi_t, jfi_d, jfi_r;
  };
  // Policy order follows the canonical list rather than the name.
  auto policy_rank = [](const std::string& p) {
    for (std::size_t k = 0; k < std::size(kAllPolicies); ++k) {
      if (policy_name(kAllPolicies[k]) == p) return k;
    }
    return std::size(kAllPolicies);
  };
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Acc> groups;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::string> names;
  for (const auto& r : runs) {
    const auto& s = r.summary;
    const auto key = std::make_tuple(s.nodes, s.channels, policy_rank(s.policy));
    names[key] = s.policy;
    auto& a = groups[key];
    ++a.count;
    a.thr += s.throughput_mbps;
    a.received += static_cast<double>(s.received);
    if (s.mean_delay_slots) a.delay.push_back(*s.mean_delay_slots);
    if (s.jfi_throughput) a.jfi_t.push_back(*s.jfi_throughput);
    if (s.jfi_inverse_delay) a.jfi_d.push_back(*s.jfi_inverse_delay);
    if (s.jfi_throughput_delay) a.jfi_r.push_back(*s.jfi_throughput_delay);
  }
  auto mean = [](const std::vector<double>& v) -> std::optional<double> {
    if (v.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  os << "# meshsim version=" << version_string() << " means over seeds\n";
  os << "nodes,channels,policy,runs,aggregated_throughput_mbps,total_received,mean_delay_slots,jfi_throughput,"
        "jfi_inverse_delay,jfi_throughput_over_delay\n";
  for (const auto& [key, a] : groups) {
    const double n = static_cast<double>(a.count);
    os << std::get<0>(key) << ',' << std::get<1>(key) << ',' << names[key] << ',' << a.count << ','
       << format_cell(a.thr / n) << ',' << format_cell(a.received / n) << ',' << format_cell(mean(a.delay)) << ','
       << format_cell(mean(a.jfi_t)) << ',' << format_cell(mean(a.jfi_d)) << ',' << format_cell(mean(a.jfi_r))
       << '\n';
  }
}

}  // namespace meshsim
