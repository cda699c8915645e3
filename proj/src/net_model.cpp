#include "meshsim/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace meshsim {

std::ostream& operator<<(std::ostream& os, NodeId id) { return os << id.value; }

std::ostream& operator<<(std::ostream& os, const Link& l) {
  return os << '(' << l.from << ',' << l.to << ')';
}

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void PhyConfig::validate() const {
  auto require = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("phy: ") + name + " must be positive");
    }
  };
  require(noise_mw, "noise power");
  require(max_power_mw, "max power");
  require(path_loss_exponent, "path loss exponent");
  require(reference_distance_m, "reference distance");
  require(slot_s, "slot duration");
  require(packet_bits, "packet length");
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double channel_gain(const Position& a, const Position& b, const PhyConfig& phy) {
  const double d = distance(a, b);
  if (!(d > 0.0)) {
    throw ConfigError("channel_gain: coincident node positions");
  }
  return std::pow(d / phy.reference_distance_m, -phy.path_loss_exponent);
}

RateTable RateTable::ieee80211a() {
  return from_entries({{54e6, 24.56},
                       {48e6, 24.05},
                       {36e6, 18.8},
                       {24e6, 17.04},
                       {18e6, 10.79},
                       {12e6, 9.03},
                       {9e6, 7.78},
                       {6e6, 6.02}});
}

RateTable RateTable::from_entries(std::vector<std::pair<double, double>> rate_bps_and_db) {
  if (rate_bps_and_db.empty()) {
    throw ConfigError("rate table: no entries");
  }
  std::sort(rate_bps_and_db.begin(), rate_bps_and_db.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  RateTable t;
  for (const auto& [rate, db] : rate_bps_and_db) {
    if (!(rate > 0.0) || !std::isfinite(db)) {
      throw ConfigError("rate table: rates must be positive and thresholds finite");
    }
    if (!t.entries_.empty()) {
      const auto& prev = t.entries_.back();
      if (prev.rate_bps == rate) {
        throw ConfigError("rate table: duplicate rate");
      }
      if (!(prev.threshold_db > db)) {
        throw ConfigError("rate table: thresholds must strictly increase with rate");
      }
    }
    t.entries_.push_back({rate, db, db_to_linear(db)});
  }
  return t;
}

RateTable RateTable::parse(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("rate table: expected MBPS:DB, got '" + item + "'");
    }
    try {
      std::size_t used = 0;
      const std::string r = item.substr(0, colon);
      const std::string d = item.substr(colon + 1);
      const double mbps = std::stod(r, &used);
      if (r.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(r);
      const double db = std::stod(d, &used);
      if (d.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(d);
      out.emplace_back(mbps * 1e6, db);
    } catch (const std::logic_error&) {
      throw ConfigError("rate table: malformed entry '" + item + "'");
    }
  }
  return from_entries(std::move(out));
}

std::size_t RateTable::index_of(double rate_bps) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].rate_bps == rate_bps) return i;
  }
  return entries_.size();
}

std::string RateTable::to_string() const {
  std::ostringstream os;
  os << std::setprecision(10);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ',';
    os << entries_[i].rate_bps / 1e6 << ':' << entries_[i].threshold_db;
  }
  return os.str();
}

Topology::Topology(std::vector<Position> positions, const PhyConfig& phy)
    : positions_(std::move(positions)) {
  const std::size_t n = positions_.size();
  gains_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) gains_[i * n + j] = channel_gain(positions_[i], positions_[j], phy);
    }
  }
  adjacency_.assign(n, std::vector<bool>(n, false));
}

bool Topology::has_link(NodeId a, NodeId b) const { return adjacency_[a.index()][b.index()]; }

std::size_t Topology::degree(NodeId n) const {
  const auto& row = adjacency_[n.index()];
  return static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
}

std::vector<NodeId> Topology::neighbors(NodeId n) const {
  std::vector<NodeId> out;
  for (std::size_t j = 0; j < node_count(); ++j) {
    if (adjacency_[n.index()][j]) out.push_back(NodeId::from_index(j));
  }
  return out;
}

bool Topology::add_edge(NodeId a, NodeId b) {
  if (a == b || a.value == 0 || b.value == 0 || a.index() >= node_count() || b.index() >= node_count()) {
    throw ConfigError("topology: invalid edge endpoints");
  }
  if (adjacency_[a.index()][b.index()]) return false;
  adjacency_[a.index()][b.index()] = true;
  adjacency_[b.index()][a.index()] = true;
  for (const Link l : {Link{a, b}, Link{b, a}}) {
    links_.insert(std::upper_bound(links_.begin(), links_.end(), l), l);
  }
  return true;
}

bool Topology::is_gateway(NodeId n) const {
  return std::find(gateways_.begin(), gateways_.end(), n) != gateways_.end();
}

void Topology::set_gateways(std::vector<NodeId> gw) {
  std::sort(gw.begin(), gw.end());
  if (gw.empty() || gw.size() >= node_count()) {
    throw ConfigError("topology: need at least one gateway and at least one non-gateway node");
  }
  if (std::adjacent_find(gw.begin(), gw.end()) != gw.end()) {
    throw ConfigError("topology: duplicate gateway id");
  }
  for (auto g : gw) {
    if (g.value == 0 || g.index() >= node_count()) {
      throw ConfigError("topology: gateway id out of range");
    }
  }
  gateways_ = std::move(gw);
}

std::size_t Topology::hop_distance(NodeId a, NodeId b) const {
  const std::size_t n = node_count();
  std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
  std::deque<std::size_t> frontier{a.index()};
  dist[a.index()] = 0;
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop_front();
    for (std::size_t v = 0; v < n; ++v) {
      if (adjacency_[u][v] && dist[v] == std::numeric_limits<std::size_t>::max()) {
        dist[v] = dist[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  return dist[b.index()];
}

bool Topology::connected() const {
  if (node_count() == 0) return true;
  const NodeId root{1};
  for (std::size_t i = 1; i < node_count(); ++i) {
    if (hop_distance(root, NodeId::from_index(i)) == std::numeric_limits<std::size_t>::max()) {
      return false;
    }
  }
  return true;
}

std::vector<Position> sample_positions(std::size_t count, double side_m, std::uint64_t seed) {
  if (!(side_m > 0.0)) {
    throw ConfigError("area side length must be positive");
  }
  std::mt19937_64 rng(seed);
  std::vector<Position> out(count);
  for (auto& p : out) {
    p.x = unit_from_bits(rng()) * side_m;
    p.y = unit_from_bits(rng()) * side_m;
  }
  return out;
}

}  // namespace meshsim
