// meshsim: run mesh-network scheduling experiments and write CSV/JSON reports.
//
//   meshsim run [--config FILE | --plan default|mrmc|sweep] [overrides]
//   meshsim topology [--config FILE] [--seed S] [--nodes N]
//
// Exit status: 0 ok, 2 bad configuration, 3 disconnected topology.

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "meshsim/experiment.hpp"
#include "meshsim/topology.hpp"

using namespace meshsim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDisconnected = 3;

struct Overrides {
  std::string config;
  std::string plan;
  std::string policy;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> slots;
  std::optional<std::size_t> nodes;
  std::optional<double> area;
  std::optional<std::size_t> channels;
  std::optional<std::size_t> schedules;
  std::string out;
  bool trace = false;
  std::optional<std::size_t> jobs;
};

void apply(RunSpec& r, const Overrides& o) {
  if (o.slots) r.slots = *o.slots;
  if (o.nodes) r.nodes = *o.nodes;
  if (o.area) r.area_m = *o.area;
  if (o.channels) {
    r.sim.scheduler.channels = *o.channels;
    r.sim.scheduler.radios = *o.channels;
  }
  if (o.schedules) r.sim.scheduler.schedules = *o.schedules;
}

ExperimentPlan build_plan(const Overrides& o) {
  if (!o.config.empty() && !o.plan.empty()) throw ConfigError("--config and --plan are mutually exclusive");
  ExperimentPlan plan;
  if (!o.plan.empty()) {
    plan = preset_plan(o.plan);
    if (!o.policy.empty()) {
      const auto keep = parse_policy_list(o.policy);
      std::erase_if(plan.runs, [&](const RunSpec& r) { return std::ranges::find(keep, r.sim.policy) == keep.end(); });
    }
    if (o.seed) {
      for (auto& r : plan.runs) r.seed = *o.seed;
    }
  } else {
    PlanTemplate t = o.config.empty() ? PlanTemplate{} : load_config(o.config);
    if (!o.policy.empty()) t.policies = parse_policy_list(o.policy);
    if (o.seed) t.seeds = {*o.seed};
    plan = t.expand();
  }
  for (auto& r : plan.runs) {
    apply(r, o);
    r.sim.scheduler.validate();
  }
  if (!o.out.empty()) plan.out_dir = o.out;
  if (o.trace) plan.trace = true;
  if (o.jobs) plan.jobs = *o.jobs;
  if (plan.runs.empty()) throw ConfigError("plan has no runs");
  return plan;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Config file ([phy] [net] [flows] [scheduler] [output])");
  cmd->add_option("--seed", o.seed, "Seed for placement and flow choice");
  cmd->add_option("--nodes", o.nodes, "Number of nodes");
  cmd->add_option("--area", o.area, "Side of the square deployment area, m");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-gateway wireless mesh scheduling simulator"};
  app.set_version_flag("--version", std::string(version_string()));
  app.require_subcommand(1);

  Overrides o;
  auto* run = app.add_subcommand("run", "Run one or more simulations and write reports");
  add_common(run, o);
  run->add_option("--plan", o.plan, "Preset plan: default, mrmc or sweep");
  run->add_option("--policy", o.policy, "W, Wr, WD, WrD, Wrd, WrdD, a comma list, or all");
  run->add_option("--slots", o.slots, "Slots per run");
  run->add_option("--out", o.out, "Output directory");
  run->add_option("--channels", o.channels, "Channels (radios per node follow)");
  run->add_option("--schedules", o.schedules, "Schedules per slot (default |GW|+1)");
  run->add_flag("--trace", o.trace, "Write per-slot schedule and queue traces");
  run->add_option("--jobs", o.jobs, "Parallel runs (default: hardware threads)");

  auto* topo_cmd = app.add_subcommand("topology", "Print the pruned topology as an edge list");
  add_common(topo_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*topo_cmd) {
      PlanTemplate t = o.config.empty() ? PlanTemplate{} : load_config(o.config);
      RunSpec r = t.base;
      r.seed = o.seed.value_or(t.seeds.front());
      apply(r, o);
      const Topology topo = make_topology(r);
      const auto degrees = [&] {
        std::size_t lo = topo.node_count(), hi = 0;
        for (std::size_t i = 0; i < topo.node_count(); ++i) {
          const auto d = topo.degree(NodeId::from_index(i));
          lo = std::min(lo, d);
          hi = std::max(hi, d);
        }
        return std::pair{lo, hi};
      }();
      std::cout << "# nodes=" << topo.node_count() << " edges=" << topo.links().size() / 2
                << " degree_min=" << degrees.first << " degree_max=" << degrees.second
                << " connected=" << (topo.connected() ? "yes" : "no") << '\n';
      write_edge_list(std::cout, topo);
      require_connected(topo);
      return 0;
    }

    const ExperimentPlan plan = build_plan(o);
    run_experiment(plan, std::cerr);
    std::cerr << "wrote " << plan.runs.size() << " run(s) to " << plan.out_dir.string() << '\n';
    return 0;
  } catch (const TopologyError& e) {
    std::cerr << "meshsim: " << e.what() << '\n';
    return kExitDisconnected;
  } catch (const ConfigError& e) {
    std::cerr << "meshsim: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidCandidate& e) {
    std::cerr << "meshsim: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "meshsim: " << e.what() << '\n';
    return 1;
  }
}
