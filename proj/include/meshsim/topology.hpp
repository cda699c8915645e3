#pragma once

// Initial mesh topology: prune the full mesh so that each node keeps links
// only to its strongest-gain neighbours, with degree bounded by 2*floor(N/3).

#include <iosfwd>
#include <string>
#include <vector>

#include "meshsim/net_model.hpp"

namespace meshsim {

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// For each node, the other nodes in descending gain order (ties by id).
struct PriorityList {
  std::vector<std::vector<NodeId>> order;

  const std::vector<NodeId>& of(NodeId n) const { return order[n.index()]; }
};

/// Requires at least 4 nodes.
PriorityList build_priorities(const Topology& full);

/// floor(N/3)
std::size_t degree_unit(std::size_t node_count);

/// Runs the pruning procedure on `base` (positions and gains, any existing
/// links are kept) and returns the resulting topology. Gateways are copied.
Topology construct_topology(Topology base, const PriorityList& priorities);

/// Builds priorities and topology in one go.
Topology build_pruned_topology(std::vector<Position> positions, const PhyConfig& phy);

/// The two mutually farthest nodes, lower id first. Ties prefer the
/// lexicographically smallest pair.
std::vector<NodeId> max_distance_pair(const Topology& topo);

/// Throws TopologyError naming the components when the link graph is not
/// connected.
void require_connected(const Topology& topo);

/// Edge-list text form. Lines starting with '#' are comments, except
/// "# node <id> <x> <y>" (positions) and "# gateways <id> <id> ...".
/// Every other non-blank line is "i j gain" for one undirected edge, i < j.
void write_edge_list(std::ostream& os, const Topology& topo);

/// Inverse of write_edge_list. Positions are required so that interference
/// gains between non-adjacent nodes are available. Listed gains must agree
/// with the positions to 1e-9 relative.
Topology read_edge_list(std::istream& is, const PhyConfig& phy);

}  // namespace meshsim
