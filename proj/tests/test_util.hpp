#pragma once

// Small fixtures shared by the unit tests.

#include <cmath>
#include <vector>

#include "meshsim/net_model.hpp"

namespace testutil {

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

/// Nodes on the x axis at the given coordinates.
inline meshsim::Topology line(std::vector<double> xs, const meshsim::PhyConfig& phy = {}) {
  std::vector<meshsim::Position> pos;
  for (double x : xs) pos.push_back({x, 0.0});
  return meshsim::Topology(pos, phy);
}

inline meshsim::NodeId n(std::uint32_t v) { return meshsim::NodeId{v}; }
inline meshsim::Link l(std::uint32_t a, std::uint32_t b) { return {meshsim::NodeId{a}, meshsim::NodeId{b}}; }

}  // namespace testutil
