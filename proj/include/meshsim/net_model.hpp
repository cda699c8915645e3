#pragma once

// Core domain types shared by every part of the simulator.
//
// Unit conventions: powers in milliwatts, gains dimensionless, rates in
// bits/second, distances in meters, durations in seconds, packet sizes in
// bits. dB/dBm appear only at config and report boundaries.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace meshsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1-based node identifier.
struct NodeId {
  std::uint32_t value = 0;

  constexpr std::size_t index() const { return value - 1; }
  static constexpr NodeId from_index(std::size_t i) { return NodeId{static_cast<std::uint32_t>(i + 1)}; }

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

std::ostream& operator<<(std::ostream& os, NodeId id);

/// Directed link (from -> to).
struct Link {
  NodeId from;
  NodeId to;

  constexpr bool touches(NodeId n) const { return from == n || to == n; }
  constexpr bool shares_node(const Link& o) const {
    return touches(o.from) || touches(o.to);
  }

  friend constexpr auto operator<=>(const Link&, const Link&) = default;
};

std::ostream& operator<<(std::ostream& os, const Link& l);

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

struct PhyConfig {
  double noise_mw = 1e-9;          // -90 dBm
  double max_power_mw = 100.0;     // 20 dBm
  double path_loss_exponent = 3.0;
  double reference_distance_m = 10.0;
  double slot_s = 625e-6;
  double packet_bits = 1470.0 * 8.0;

  /// Throws ConfigError if any field is non-positive.
  void validate() const;
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);
double db_to_linear(double db);

/// (d/d0)^(-alpha). Coincident positions are a configuration error.
double channel_gain(const Position& a, const Position& b, const PhyConfig& phy);

struct RateEntry {
  double rate_bps;
  double threshold_db;
  double threshold_linear;
};

/// Discrete rate set, strictly descending in rate, with per-rate SINR
/// thresholds that strictly decrease along with the rate.
class RateTable {
 public:
  /// The 802.11a rate set: 54 Mbps / 24.56 dB down to 6 Mbps / 6.02 dB.
  static RateTable ieee80211a();

  /// Entries may be given in any order; they are sorted descending by rate.
  /// Throws ConfigError on duplicates, non-positive rates, or thresholds that
  /// do not increase with rate.
  static RateTable from_entries(std::vector<std::pair<double, double>> rate_bps_and_db);

  /// Parses "54:24.56,48:24.05,..." with rates in Mbps and thresholds in dB.
  static RateTable parse(const std::string& text);

  std::size_t size() const { return entries_.size(); }
  const RateEntry& operator[](std::size_t i) const { return entries_[i]; }
  std::span<const RateEntry> entries() const { return entries_; }

  double rate(std::size_t i) const { return entries_[i].rate_bps; }
  double beta(std::size_t i) const { return entries_[i].threshold_linear; }
  double lowest_rate() const { return entries_.back().rate_bps; }

  /// Index of an exact rate, or size() when absent.
  std::size_t index_of(double rate_bps) const;

  std::string to_string() const;

 private:
  std::vector<RateEntry> entries_;
};

/// Node placement, directed links and the dense pairwise gain matrix.
///
/// The link set is symmetric: every constructed edge is present in both
/// directions. Links are kept sorted lexicographically.
class Topology {
 public:
  Topology() = default;

  /// Builds a topology over the given positions with no links; gains are
  /// computed for every ordered pair.
  Topology(std::vector<Position> positions, const PhyConfig& phy);

  std::size_t node_count() const { return positions_.size(); }
  const std::vector<Position>& positions() const { return positions_; }
  const Position& position(NodeId n) const { return positions_[n.index()]; }

  /// G between transmitter `tx` and receiver `rx`.
  double gain(NodeId tx, NodeId rx) const { return gains_[tx.index() * positions_.size() + rx.index()]; }

  const std::vector<Link>& links() const { return links_; }
  bool has_link(NodeId a, NodeId b) const;
  std::size_t degree(NodeId n) const;
  std::vector<NodeId> neighbors(NodeId n) const;

  /// Adds both (a,b) and (b,a). Returns false if already present.
  bool add_edge(NodeId a, NodeId b);

  const std::vector<NodeId>& gateways() const { return gateways_; }
  bool is_gateway(NodeId n) const;
  /// Requires 1 <= |gw| < N and valid, distinct ids.
  void set_gateways(std::vector<NodeId> gw);

  /// Undirected connectivity of the link graph.
  bool connected() const;
  /// Hop distance between two nodes; SIZE_MAX if unreachable.
  std::size_t hop_distance(NodeId a, NodeId b) const;

 private:
  std::vector<Position> positions_;
  std::vector<double> gains_;
  std::vector<Link> links_;
  std::vector<std::vector<bool>> adjacency_;
  std::vector<NodeId> gateways_;
};

/// Deterministic uniform placement in [0, side]^2. Uses the raw 64-bit
/// engine output so the placement is identical across standard libraries.
std::vector<Position> sample_positions(std::size_t count, double side_m, std::uint64_t seed);

/// Uniform double in [0,1) from a 64-bit engine word.
inline double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace meshsim
