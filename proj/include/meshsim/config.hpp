#pragma once

// Experiment configuration: INI-style text with [phy], [net], [flows],
// [scheduler] and [output] sections. Conventional units at this boundary
// (dBm, microseconds, bytes, Mbps); SI/mW internally.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "meshsim/sim_engine.hpp"

namespace meshsim {

enum class FlowMode { kFirstNonGateway, kRandom, kExplicit };

struct FlowSelection {
  FlowMode mode = FlowMode::kFirstNonGateway;
  std::size_t count = 8;
  std::vector<NodeId> sources;  // kExplicit
};

/// One fully specified, independently reproducible run.
struct RunSpec {
  std::size_t nodes = 10;
  double area_m = 350.0;
  std::uint64_t seed = 1;
  std::vector<NodeId> gateways;  // empty: the max-distance pair
  std::filesystem::path topology_file;  // optional fixed topology
  FlowSelection flows;
  std::size_t slots = 10000;
  SimConfig sim;  // flows are resolved later from `flows`

  /// Canonical text of every field that affects the outcome.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
  /// "<policy>_N<n>_s<seed>_T<slots>", plus "_C<c>" when multi-channel.
  std::string file_prefix() const;
};

struct ExperimentPlan {
  std::vector<RunSpec> runs;
  std::filesystem::path out_dir = "out";
  bool trace = false;
  std::size_t jobs = 0;  // 0: hardware concurrency
};

/// Settings read from a config file before expansion into runs.
struct PlanTemplate {
  RunSpec base;
  std::vector<Policy> policies{std::begin(kAllPolicies), std::end(kAllPolicies)};
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path out_dir = "out";
  bool trace = false;
  std::size_t jobs = 0;

  ExperimentPlan expand() const;
};

/// Parses config text; unknown sections or keys are errors. Throws
/// ConfigError with the offending key.
PlanTemplate parse_config(std::istream& is);
PlanTemplate load_config(const std::filesystem::path& path);

/// Comma list of policy names, or "all".
std::vector<Policy> parse_policy_list(const std::string& text);

/// Named presets: "default" (10 nodes, 350 m, six policies, 10^4 slots),
/// "mrmc" (Wr and WrD at one and two channels), "sweep" (10/15/20 nodes in
/// 350/450/500 m squares, 2600 slots, six policies).
ExperimentPlan preset_plan(const std::string& name);

/// Topology for a run: sampled and pruned, or read from the edge-list file;
/// gateways applied. Does not check connectivity.
Topology make_topology(const RunSpec& spec);

/// Flow list for a run on a resolved topology.
std::vector<FlowSpec> make_flows(const RunSpec& spec, const Topology& topo);

}  // namespace meshsim
