#pragma once

// Executes experiment plans: one simulation per run, per-run report files,
// and sweep summaries. Runs are independent and may execute in parallel.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "meshsim/config.hpp"

namespace meshsim {

const char* version_string();

/// One row of the sweep summary, recoverable from a run's summary JSON.
struct SummaryRow {
  std::string prefix;
  std::string config_hash;
  std::size_t nodes = 0;
  double area_m = 0.0;
  std::uint64_t seed = 0;
  std::string policy;
  std::size_t channels = 1;
  std::size_t slots = 0;
  double throughput_mbps = 0.0;
  std::uint64_t received = 0;
  std::optional<double> mean_delay_slots;
  std::optional<double> jfi_throughput;
  std::optional<double> jfi_inverse_delay;
  std::optional<double> jfi_throughput_delay;
  std::vector<double> flow_throughput_mbps;
  std::vector<std::optional<double>> flow_mean_delay_slots;
};

struct RunOutcome {
  RunSpec spec;
  SummaryRow summary;
  bool skipped = false;  // outputs already present with a matching manifest
};

/// Everything a single run produces, in memory.
struct RunResult {
  Topology topology;
  MetricsLedger ledger;
  Report report;
};

/// Builds the topology and flows, runs the simulation and reports. With
/// `observer`, every slot is traced. Throws TopologyError when the sampled
/// topology is disconnected.
RunResult execute_run(const RunSpec& spec, const Simulation::Observer& observer = {});

/// Runs the plan, writing per-run files and the sweep summary into
/// plan.out_dir. Progress goes to `log`. Topologies are validated before any
/// run starts.
std::vector<RunOutcome> run_experiment(const ExperimentPlan& plan, std::ostream& log);

/// Writes through a temporary file then renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer);

SummaryRow summarize(const RunSpec& spec, const Report& report);
/// Reads the summary JSON written for a run; nullopt if missing or corrupt.
std::optional<SummaryRow> read_summary(const std::filesystem::path& json_path);

void write_sweep_summary(std::ostream& os, const std::vector<RunOutcome>& runs);
/// Means over seeds grouped by (nodes, channels, policy).
void write_policy_means(std::ostream& os, const std::vector<RunOutcome>& runs);

}  // namespace meshsim
