#include "meshsim/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include "meshsim/topology.hpp"

namespace meshsim {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return d;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      const auto n = std::stoull(v, &used);
      if (trim(v.substr(used)).empty()) return n;
    }
  } catch (const std::logic_error&) {
  }
  throw ConfigError("config: " + key + " expects a non-negative integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: " + key + " expects true/false, got '" + v + "'");
}

std::vector<NodeId> to_ids(const std::string& key, const std::string& v) {
  std::vector<NodeId> ids;
  for (const auto& item : split_list(v)) {
    const auto n = to_u64(key, item);
    if (n == 0 || n > 0xffffffffULL) throw ConfigError("config: " + key + " node ids start at 1");
    ids.push_back(NodeId{static_cast<std::uint32_t>(n)});
  }
  return ids;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<Policy> parse_policy_list(const std::string& text) {
  if (trim(text) == "all") return {std::begin(kAllPolicies), std::end(kAllPolicies)};
  std::vector<Policy> out;
  for (const auto& item : split_list(text)) out.push_back(parse_policy(item));
  if (out.empty()) throw ConfigError("config: empty policy list");
  return out;
}

std::string RunSpec::canonical() const {
  std::ostringstream os;
  os << "nodes=" << nodes << ";area=" << fmt_double(area_m) << ";seed=" << seed << ";gateways=";
  for (auto g : gateways) os << g << ' ';
  os << ";topology=" << topology_file.generic_string();
  if (!topology_file.empty()) {
    std::ifstream in(topology_file);
    os << '[' << std::string(std::istreambuf_iterator<char>(in), {}) << ']';
  }
  os << ";flows=" << static_cast<int>(flows.mode) << ':'
     << flows.count << ':';
  for (auto s : flows.sources) os << s << ' ';
  os << ";slots=" << slots;
  const auto& p = sim.phy;
  os << ";noise=" << fmt_double(p.noise_mw) << ";pmax=" << fmt_double(p.max_power_mw)
     << ";alpha=" << fmt_double(p.path_loss_exponent) << ";d0=" << fmt_double(p.reference_distance_m)
     << ";slot=" << fmt_double(p.slot_s) << ";packet=" << fmt_double(p.packet_bits);
  os << ";rates=" << sim.rates.to_string();
  os << ";V=" << fmt_double(sim.traffic.v) << ";rmax=" << fmt_double(sim.traffic.max_rate_pkts);
  os << ";policy=" << policy_name(sim.policy) << ";M=" << sim.scheduler.schedules
     << ";C=" << sim.scheduler.channels << ";radios=" << sim.scheduler.radios;
  return os.str();
}

std::string RunSpec::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string RunSpec::file_prefix() const {
  std::ostringstream os;
  os << policy_name(sim.policy) << "_N" << nodes << "_s" << seed << "_T" << slots;
  if (sim.scheduler.channels > 1) os << "_C" << sim.scheduler.channels;
  return os.str();
}

ExperimentPlan PlanTemplate::expand() const {
  ExperimentPlan plan;
  plan.out_dir = out_dir;
  plan.trace = trace;
  plan.jobs = jobs;
  for (auto seed : seeds) {
    for (auto policy : policies) {
      RunSpec r = base;
      r.seed = seed;
      r.sim.policy = policy;
      plan.runs.push_back(std::move(r));
    }
  }
  return plan;
}

PlanTemplate parse_config(std::istream& is) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  PlanTemplate t;
  auto& r = t.base;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config: key '" + section + "' outside any section");
    }
    for (const auto& [key_raw, node] : body) {
      const std::string key = section + "." + key_raw;
      const std::string v = trim(node.data());
      if (section == "net") {
        if (key_raw == "nodes") r.nodes = to_u64(key, v);
        else if (key_raw == "area_m") r.area_m = to_double(key, v);
        else if (key_raw == "seed") t.seeds = {to_u64(key, v)};
        else if (key_raw == "seeds") {
          t.seeds.clear();
          for (const auto& s : split_list(v)) t.seeds.push_back(to_u64(key, s));
          if (t.seeds.empty()) throw ConfigError("config: net.seeds is empty");
        } else if (key_raw == "gateways") {
          r.gateways = (v == "max-distance") ? std::vector<NodeId>{} : to_ids(key, v);
        } else if (key_raw == "topology_file") r.topology_file = v;
        else throw ConfigError("config: unknown key " + key);
      } else if (section == "phy") {
        if (key_raw == "noise_dbm") r.sim.phy.noise_mw = dbm_to_mw(to_double(key, v));
        else if (key_raw == "max_power_dbm") r.sim.phy.max_power_mw = dbm_to_mw(to_double(key, v));
        else if (key_raw == "path_loss_exponent") r.sim.phy.path_loss_exponent = to_double(key, v);
        else if (key_raw == "reference_distance_m") r.sim.phy.reference_distance_m = to_double(key, v);
        else if (key_raw == "slot_us") r.sim.phy.slot_s = to_double(key, v) * 1e-6;
        else if (key_raw == "packet_bytes") r.sim.phy.packet_bits = to_double(key, v) * 8.0;
        else if (key_raw == "rate_table") r.sim.rates = RateTable::parse(v);
        else throw ConfigError("config: unknown key " + key);
      } else if (section == "flows") {
        if (key_raw == "mode") {
          if (v == "first") r.flows.mode = FlowMode::kFirstNonGateway;
          else if (v == "random") r.flows.mode = FlowMode::kRandom;
          else if (v == "explicit") r.flows.mode = FlowMode::kExplicit;
          else throw ConfigError("config: flows.mode must be first, random or explicit");
        } else if (key_raw == "count") r.flows.count = to_u64(key, v);
        else if (key_raw == "sources") {
          r.flows.sources = to_ids(key, v);
          r.flows.mode = FlowMode::kExplicit;
        } else if (key_raw == "v") r.sim.traffic.v = to_double(key, v);
        else if (key_raw == "max_rate") r.sim.traffic.max_rate_pkts = to_double(key, v);
        else throw ConfigError("config: unknown key " + key);
      } else if (section == "scheduler") {
        if (key_raw == "policy") t.policies = parse_policy_list(v);
        else if (key_raw == "schedules") r.sim.scheduler.schedules = to_u64(key, v);
        else if (key_raw == "channels") r.sim.scheduler.channels = to_u64(key, v);
        else if (key_raw == "radios") r.sim.scheduler.radios = to_u64(key, v);
        else if (key_raw == "slots") r.slots = to_u64(key, v);
        else throw ConfigError("config: unknown key " + key);
      } else if (section == "output") {
        if (key_raw == "dir") t.out_dir = v;
        else if (key_raw == "trace") t.trace = to_bool(key, v);
        else if (key_raw == "jobs") t.jobs = to_u64(key, v);
        else throw ConfigError("config: unknown key " + key);
      } else {
        throw ConfigError("config: unknown section [" + section + "]");
      }
    }
  }
  r.sim.phy.validate();
  if (r.nodes < 4) throw ConfigError("config: net.nodes must be at least 4");
  if (!(r.area_m > 0.0)) throw ConfigError("config: net.area_m must be positive");
  if (!(r.sim.traffic.v > 0.0) || !(r.sim.traffic.max_rate_pkts > 0.0)) {
    throw ConfigError("config: flows.v and flows.max_rate must be positive");
  }
  r.sim.scheduler.validate();
  return t;
}

PlanTemplate load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_config(in);
}

ExperimentPlan preset_plan(const std::string& name) {
  PlanTemplate t;
  if (name == "default") {
    return t.expand();
  }
  if (name == "mrmc") {
    ExperimentPlan plan;
    for (std::size_t c : {1, 2}) {
      for (auto policy : {Policy::kWr, Policy::kWrD}) {
        RunSpec r = t.base;
        r.sim.policy = policy;
        r.sim.scheduler.channels = c;
        r.sim.scheduler.radios = c;
        plan.runs.push_back(r);
      }
    }
    return plan;
  }
  if (name == "sweep") {
    ExperimentPlan plan;
    const std::pair<std::size_t, double> sizes[] = {{10, 350.0}, {15, 450.0}, {20, 500.0}};
    for (const auto& [n, side] : sizes) {
      for (auto policy : kAllPolicies) {
        RunSpec r = t.base;
        r.nodes = n;
        r.area_m = side;
        r.slots = 2600;
        r.sim.policy = policy;
        if (n > 10) r.flows = {FlowMode::kRandom, 8, {}};
        plan.runs.push_back(r);
      }
    }
    return plan;
  }
  throw ConfigError("unknown plan '" + name + "' (expected default, mrmc or sweep)");
}

Topology make_topology(const RunSpec& spec) {
  Topology topo;
  if (!spec.topology_file.empty()) {
    std::ifstream in(spec.topology_file);
    if (!in) throw ConfigError("cannot open topology file " + spec.topology_file.string());
    topo = read_edge_list(in, spec.sim.phy);
  } else {
    topo = build_pruned_topology(sample_positions(spec.nodes, spec.area_m, spec.seed), spec.sim.phy);
  }
  if (!spec.gateways.empty()) {
    topo.set_gateways(spec.gateways);
  } else if (topo.gateways().empty()) {
    topo.set_gateways(max_distance_pair(topo));
  }
  return topo;
}

std::vector<FlowSpec> make_flows(const RunSpec& spec, const Topology& topo) {
  switch (spec.flows.mode) {
    case FlowMode::kFirstNonGateway: return first_non_gateway_flows(topo, spec.flows.count);
    case FlowMode::kRandom:
      // Decorrelated from the placement stream.
      return random_flows(topo, spec.flows.count, spec.seed ^ 0x9e3779b97f4a7c15ULL);
    case FlowMode::kExplicit: return explicit_flows(topo, spec.flows.sources);
  }
  return {};
}

}  // namespace meshsim
