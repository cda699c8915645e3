#include <doctest.h>

#include <random>

#include "meshsim/power_sinr.hpp"
#include "test_util.hpp"

using namespace meshsim;
using testutil::l;
using testutil::rel_close;

namespace {

const RateTable kRates = RateTable::ieee80211a();
constexpr std::size_t k6Mbps = 7;
constexpr std::size_t k54Mbps = 0;

// Links 1->2 and 3->4, direct gains 1, both cross gains 0.125.
Topology two_links() { return testutil::line({0, 10, 30, 20}); }

}  // namespace

TEST_CASE("gain matrix entries") {
  const auto topo = two_links();
  CandidateSet one;
  one.push(l(1, 2), k6Mbps);
  const auto a1 = build_gain_matrix(one, topo, kRates);
  REQUIRE(a1.rows() == 1);
  CHECK(a1(0, 0) == doctest::Approx(0.2500).epsilon(1e-4));
  CHECK(rel_close(a1(0, 0), 1.0 / std::pow(10.0, 0.602), 1e-14));

  CandidateSet two = one;
  two.push(l(3, 4), k6Mbps);
  const auto a2 = build_gain_matrix(two, topo, kRates);
  CHECK(a2(0, 0) == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(a2(1, 1) == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(a2(0, 1) == doctest::Approx(-0.125));
  CHECK(a2(1, 0) == doctest::Approx(-0.125));
}

TEST_CASE("gain matrix uses interferer-to-receiver gains") {
  const auto topo = testutil::line({0, 10, 100, 130});
  CandidateSet c;
  c.push(l(1, 2), k6Mbps);
  c.push(l(3, 4), k6Mbps);
  const auto a = build_gain_matrix(c, topo, kRates);
  CHECK(a(0, 1) == doctest::Approx(-topo.gain(testutil::n(3), testutil::n(2))));
  CHECK(a(1, 0) == doctest::Approx(-topo.gain(testutil::n(1), testutil::n(4))));
}

TEST_CASE("invalid candidates") {
  const auto topo = two_links();
  CandidateSet empty;
  CHECK_THROWS_AS(build_gain_matrix(empty, topo, kRates), InvalidCandidate);
  CandidateSet shared;
  shared.push(l(1, 2), 0);
  shared.push(l(2, 3), 0);
  CHECK_THROWS_AS(build_gain_matrix(shared, topo, kRates), InvalidCandidate);
  CandidateSet reversed;
  reversed.push(l(1, 2), 0);
  reversed.push(l(2, 1), 0);
  CHECK_THROWS_AS(build_gain_matrix(reversed, topo, kRates), InvalidCandidate);
  CandidateSet bad_rate;
  bad_rate.push(l(1, 2), 8);
  CHECK_THROWS_AS(build_gain_matrix(bad_rate, topo, kRates), InvalidCandidate);
  CHECK(node_disjoint({l(1, 2), l(3, 4)}));
  CHECK_FALSE(node_disjoint({l(1, 2), l(4, 1)}));
}

TEST_CASE("single link power is beta N0 / G") {
  const PhyConfig phy;
  const auto topo = two_links();
  CandidateSet c;
  c.push(l(1, 2), k6Mbps);
  const auto sol = solve_candidate(c, topo, kRates, phy);
  REQUIRE(sol.feasible());
  CHECK(sol.powers_mw(0) == doctest::Approx(4e-9).epsilon(1e-3));
  CHECK(rel_close(sol.powers_mw(0), kRates.beta(k6Mbps) * phy.noise_mw, 1e-12));
  CHECK(mw_to_dbm(sol.powers_mw(0)) == doctest::Approx(-84.0).epsilon(1e-3));
  const std::vector<double> p{sol.powers_mw(0)};
  CHECK(std::abs(verify_sinr(c, p, topo, kRates, phy.noise_mw)[0]) <= 1e-12);
}

TEST_CASE("symmetric two-link solve") {
  const PhyConfig phy;
  const auto topo = two_links();
  CandidateSet c;
  c.push(l(1, 2), k6Mbps);
  c.push(l(3, 4), k6Mbps);
  const auto sol = solve_candidate(c, topo, kRates, phy);
  REQUIRE(sol.feasible());
  // Closed form for a symmetric pair: p = N0 / (G/beta - c).
  const double expect = phy.noise_mw / (1.0 / kRates.beta(k6Mbps) - 0.125);
  CHECK(rel_close(sol.powers_mw(0), expect, 1e-12));
  CHECK(rel_close(sol.powers_mw(1), expect, 1e-12));
  CHECK(sol.powers_mw(0) == doctest::Approx(8e-9).epsilon(1e-3));
  const double sinr = sol.powers_mw(0) / (phy.noise_mw + 0.125 * sol.powers_mw(1));
  CHECK(rel_close(sinr, kRates.beta(k6Mbps), 1e-12));

  const std::vector<double> p{sol.powers_mw(0), sol.powers_mw(1)};
  for (double r : verify_sinr(c, p, topo, kRates, phy.noise_mw)) CHECK(std::abs(r) <= 1e-9);
  const std::vector<double> half{p[0] / 2, p[1] / 2};
  for (double r : verify_sinr(c, half, topo, kRates, phy.noise_mw)) CHECK(r < 0.0);
}

TEST_CASE("singular and ill-conditioned systems") {
  GainMatrix a(2, 2);
  a << 0.25, -0.25, -0.25, 0.25;
  const auto s = solve_powers(a, 1e-9, 100.0);
  CHECK_FALSE(s.feasible());
  CHECK(s.status == PowerStatus::kSingular);

  GainMatrix b(2, 2);
  b << 1.0, -1.0, -1.0, 1.0 + 1e-14;
  const auto t = solve_powers(b, 1e-9, 100.0);
  CHECK(t.status == PowerStatus::kIllConditioned);
  CHECK(t.condition_estimate > kMaxCondition);

  GainMatrix z(1, 1);
  z << 0.0;
  CHECK(solve_powers(z, 1e-9, 100.0).status == PowerStatus::kSingular);
  CHECK_THROWS_AS(solve_powers(GainMatrix(0, 0), 1e-9, 100.0), InvalidCandidate);
}

TEST_CASE("power classification") {
  const PhyConfig phy;
  // 54 Mbps over 10 km needs beta N0 / G = 285.76 * 1e-9 * 1e9 mW, above P_max.
  const auto far = testutil::line({0, 10000, 20000, 30000});
  CandidateSet c;
  c.push(l(1, 2), k54Mbps);
  const auto s = solve_candidate(c, far, kRates, phy);
  CHECK(s.status == PowerStatus::kExceedsMax);
  CHECK(s.powers_mw(0) > phy.max_power_mw);

  // Each receiver sits next to the other transmitter: no positive solution.
  const auto crossed = testutil::line({0, 100, 110, 10});
  CandidateSet x;
  x.push(l(1, 2), k54Mbps);
  x.push(l(3, 4), k54Mbps);
  CHECK(solve_candidate(x, crossed, kRates, phy).status == PowerStatus::kNonPositive);
  CHECK(std::string(to_string(PowerStatus::kNonPositive)).size() > 0);
}

TEST_CASE("adding a link never lowers existing powers") {
  const PhyConfig phy;
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Topology topo(sample_positions(8, 400.0, rng()), phy);
    CandidateSet c;
    for (std::uint32_t k = 0; k < 4; ++k) {
      c.push(l(2 * k + 1, 2 * k + 2), static_cast<std::size_t>(unit_from_bits(rng()) * 8));
    }
    for (std::size_t size = 2; size <= 4; ++size) {
      CandidateSet small, big;
      for (std::size_t k = 0; k + 1 < size; ++k) small.push(c.links[k], c.rate_index[k]);
      big = small;
      big.push(c.links[size - 1], c.rate_index[size - 1]);
      const auto a = solve_candidate(small, topo, kRates, phy);
      const auto b = solve_candidate(big, topo, kRates, phy);
      if (!a.feasible() || !b.feasible()) continue;
      ++checked;
      for (Eigen::Index k = 0; k < a.powers_mw.size(); ++k) {
        CHECK(b.powers_mw(k) >= a.powers_mw(k) * (1.0 - 1e-12));
      }
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("powers scale linearly with noise") {
  PhyConfig phy;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Topology topo(sample_positions(6, 300.0, rng()), phy);
    CandidateSet c;
    c.push(l(1, 2), 7);
    c.push(l(3, 4), 6);
    c.push(l(5, 6), 5);
    const auto a = build_gain_matrix(c, topo, kRates);
    const auto p1 = solve_powers(a, 1e-9, 1e9);
    const auto p2 = solve_powers(a, 3.5e-9, 1e9);
    if (p1.status != PowerStatus::kFeasible) continue;
    REQUIRE(p2.feasible());
    for (Eigen::Index k = 0; k < 3; ++k) CHECK(rel_close(p2.powers_mw(k), 3.5 * p1.powers_mw(k), 1e-10));
  }
}

TEST_CASE("feasible solves are tight") {
  const PhyConfig phy;
  std::mt19937_64 rng(99);
  int feasible = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Topology topo(sample_positions(10, 350.0, rng()), phy);
    CandidateSet c;
    const auto k = 1 + static_cast<std::uint32_t>(unit_from_bits(rng()) * 5);
    for (std::uint32_t i = 0; i < k; ++i) c.push(l(2 * i + 1, 2 * i + 2), static_cast<std::size_t>(unit_from_bits(rng()) * 8));
    const auto s = solve_candidate(c, topo, kRates, phy);
    if (!s.feasible()) continue;
    ++feasible;
    std::vector<double> p(s.powers_mw.data(), s.powers_mw.data() + s.powers_mw.size());
    for (double r : verify_sinr(c, p, topo, kRates, phy.noise_mw)) CHECK(std::abs(r) <= 1e-9);
  }
  CHECK(feasible > 50);
}
