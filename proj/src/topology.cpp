#include "meshsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace meshsim {

std::size_t degree_unit(std::size_t node_count) { return node_count / 3; }

PriorityList build_priorities(const Topology& full) {
  const std::size_t n = full.node_count();
  if (n < 4) {
    throw ConfigError("topology: at least 4 nodes are required");
  }
  PriorityList out;
  out.order.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId self = NodeId::from_index(i);
    auto& list = out.order[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) list.push_back(NodeId::from_index(j));
    }
    std::stable_sort(list.begin(), list.end(), [&](NodeId a, NodeId b) {
      const double ga = full.gain(a, self);
      const double gb = full.gain(b, self);
      if (ga != gb) return ga > gb;
      return a < b;
    });
  }
  return out;
}

Topology construct_topology(Topology topo, const PriorityList& priorities) {
  const std::size_t n = topo.node_count();
  const std::size_t unit = degree_unit(n);
  const std::size_t max_degree = 2 * unit;

  auto in_top = [&](NodeId of, NodeId who) {
    const auto& list = priorities.of(of);
    return std::find(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(unit), who) !=
           list.begin() + static_cast<std::ptrdiff_t>(unit);
  };

  // Mutual top-`unit` pairs.
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId a = NodeId::from_index(i);
    for (std::size_t r = 0; r < unit; ++r) {
      const NodeId b = priorities.of(a)[r];
      if (a < b && in_top(b, a)) topo.add_edge(a, b);
    }
  }

  // Attach each node to its j-th choice when that choice currently has
  // exactly k links. The deg(i) guard keeps the upper bound.
  for (std::size_t k = unit; k + 1 <= max_degree; ++k) {
    for (std::size_t j = 0; j < unit; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const NodeId a = NodeId::from_index(i);
        const NodeId v = priorities.of(a)[j];
        if (topo.has_link(a, v)) continue;
        if (topo.degree(v) == k && topo.degree(a) < max_degree) {
          topo.add_edge(a, v);
        }
      }
    }
  }
  return topo;
}

Topology build_pruned_topology(std::vector<Position> positions, const PhyConfig& phy) {
  Topology full(std::move(positions), phy);
  const auto pri = build_priorities(full);
  return construct_topology(std::move(full), pri);
}

std::vector<NodeId> max_distance_pair(const Topology& topo) {
  const std::size_t n = topo.node_count();
  if (n < 2) throw ConfigError("topology: need two nodes for a gateway pair");
  double best = -1.0;
  std::vector<NodeId> pair;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(topo.positions()[i], topo.positions()[j]);
      if (d > best) {
        best = d;
        pair = {NodeId::from_index(i), NodeId::from_index(j)};
      }
    }
  }
  return pair;
}

void require_connected(const Topology& topo) {
  if (topo.connected()) return;
  const std::size_t n = topo.node_count();
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto v : topo.neighbors(NodeId::from_index(u))) {
        if (comp[v.index()] < 0) {
          comp[v.index()] = ncomp;
          stack.push_back(v.index());
        }
      }
    }
    ++ncomp;
  }
  std::ostringstream msg;
  msg << "topology is disconnected (" << ncomp << " components):";
  for (int c = 0; c < ncomp; ++c) {
    msg << " {";
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (comp[i] != c) continue;
      msg << (first ? "" : ",") << i + 1;
      first = false;
    }
    msg << '}';
  }
  throw TopologyError(msg.str());
}

void write_edge_list(std::ostream& os, const Topology& topo) {
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << std::setprecision(17);
  os << "# meshsim edge list: i j gain\n";
  for (std::size_t i = 0; i < topo.node_count(); ++i) {
    const auto& p = topo.positions()[i];
    os << "# node " << i + 1 << ' ' << p.x << ' ' << p.y << '\n';
  }
  if (!topo.gateways().empty()) {
    os << "# gateways";
    for (auto g : topo.gateways()) os << ' ' << g;
    os << '\n';
  }
  for (const auto& l : topo.links()) {
    if (l.from < l.to) os << l.from << ' ' << l.to << ' ' << topo.gain(l.from, l.to) << '\n';
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

Topology read_edge_list(std::istream& is, const PhyConfig& phy) {
  std::map<std::uint32_t, Position> nodes;
  std::vector<NodeId> gateways;
  struct Edge {
    std::uint32_t a, b;
    double gain;
    int line;
  };
  std::vector<Edge> edges;

  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw ConfigError("edge list line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head[0] == '#') {
      std::string tag = head.size() > 1 ? head.substr(1) : std::string{};
      if (tag.empty() && !(ls >> tag)) continue;
      if (tag == "node") {
        std::uint32_t id;
        Position p;
        if (!(ls >> id >> p.x >> p.y) || id == 0) fail("malformed node line");
        if (!nodes.emplace(id, p).second) fail("duplicate node id");
      } else if (tag == "gateways") {
        std::uint32_t id;
        while (ls >> id) gateways.push_back(NodeId{id});
      }
      continue;
    }
    Edge e{};
    e.line = lineno;
    std::istringstream es(line);
    std::string extra;
    if (!(es >> e.a >> e.b >> e.gain) || (es >> extra)) fail("expected 'i j gain'");
    edges.push_back(e);
  }

  if (nodes.empty()) {
    throw ConfigError("edge list: no '# node' position lines");
  }
  std::vector<Position> positions;
  for (std::uint32_t id = 1; id <= nodes.size(); ++id) {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw ConfigError("edge list: node ids must be 1..N without gaps");
    positions.push_back(it->second);
  }
  Topology topo(std::move(positions), phy);
  for (const auto& e : edges) {
    lineno = e.line;
    if (e.a == 0 || e.b == 0 || e.a > topo.node_count() || e.b > topo.node_count() || e.a == e.b) {
      fail("edge endpoint out of range");
    }
    const double expect = topo.gain(NodeId{e.a}, NodeId{e.b});
    if (std::abs(e.gain - expect) > 1e-9 * expect) fail("gain disagrees with node positions");
    topo.add_edge(NodeId{e.a}, NodeId{e.b});
  }
  if (!gateways.empty()) topo.set_gateways(std::move(gateways));
  return topo;
}

}  // namespace meshsim
