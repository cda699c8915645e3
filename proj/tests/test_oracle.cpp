#include <doctest.h>

#include "meshsim/oracle.hpp"
#include "test_util.hpp"

using namespace meshsim;
using testutil::l;

namespace {

LinkWeight lw(Link link, double value) {
  LinkWeight w;
  w.link = link;
  w.value = value;
  w.backlog = value;
  return w;
}

}  // namespace

TEST_CASE("single link takes its highest feasible rate") {
  oracle::TinyInstance inst;
  inst.topo = testutil::line({0, 10, 8010, 9000});
  inst.links = {lw(l(1, 2), 4)};
  auto s = oracle::optimal_schedule(inst, 1.0);
  REQUIRE(s.links.size() == 1);
  CHECK(s.rate_index[0] == 0);
  CHECK(s.objective == doctest::Approx(54e6 * 625e-6 / 11760 + 4));

  inst.links = {lw(l(2, 3), 4)};  // 8 km
  s = oracle::optimal_schedule(inst, 1.0);
  REQUIRE(s.links.size() == 1);
  CHECK(inst.rates.rate(s.rate_index[0]) == 36e6);
}

TEST_CASE("conflicting links: larger rate term plus weight wins") {
  oracle::TinyInstance inst;
  inst.topo = testutil::line({0, 10, 8010, 9000});
  inst.links = {lw(l(1, 2), 3.0), lw(l(3, 2), 3.2)};
  auto s = oracle::optimal_schedule(inst, 1.0);
  REQUIRE(s.links.size() == 1);
  CHECK(s.links[0] == l(1, 2));

  inst.links = {lw(l(1, 2), 3.0), lw(l(3, 2), 4.5)};
  s = oracle::optimal_schedule(inst, 1.0);
  REQUIRE(s.links.size() == 1);
  CHECK(s.links[0] == l(3, 2));
}

TEST_CASE("nothing worth sending gives the empty schedule") {
  oracle::TinyInstance inst;
  inst.topo = testutil::line({0, 10, 20, 30});
  inst.links = {lw(l(1, 2), -10)};
  const auto s = oracle::optimal_schedule(inst, 1.0);
  CHECK(s.links.empty());
  CHECK(s.objective == 0.0);
}

TEST_CASE("oversized instances are refused") {
  oracle::TinyInstance inst = oracle::random_instance(1, 10, 9, 300.0);
  CHECK_THROWS_AS(oracle::optimal_schedule(inst, 1.0), oracle::TooLarge);
}

TEST_CASE("independent checker") {
  const PhyConfig phy;
  const RateTable rates = RateTable::ieee80211a();
  const auto topo = testutil::line({0, 10, 30, 20});
  const double p = phy.noise_mw / (1.0 / rates.beta(7) - 0.125);
  CHECK(oracle::feasible(topo, {l(1, 2), l(3, 4)}, {7, 7}, {p, p}, rates, phy));
  CHECK_FALSE(oracle::feasible(topo, {l(1, 2), l(3, 4)}, {7, 7}, {p / 2, p / 2}, rates, phy));
  CHECK_FALSE(oracle::feasible(topo, {l(1, 2), l(2, 4)}, {7, 7}, {p, p}, rates, phy));
  CHECK_FALSE(oracle::feasible(topo, {l(1, 2)}, {0}, {200.0}, rates, phy));
  CHECK_FALSE(oracle::feasible(topo, {l(1, 2)}, {0}, {-1.0}, rates, phy));
  CHECK_FALSE(oracle::feasible(topo, {l(1, 2)}, {0, 1}, {1.0}, rates, phy));
}

TEST_CASE("greedy never beats the oracle and is accepted by its checker") {
  int strictly_better = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = oracle::random_instance(seed, 6, 3, 200.0);
    const auto best = oracle::optimal_schedule(inst, 1.0);
    CHECK(oracle::feasible(inst.topo, best.links, best.rate_index, best.powers_mw, inst.rates, inst.phy));
    const auto greedy = build_schedules(inst.topo, inst.rates, inst.phy, inst.links, 1);
    CHECK(oracle::feasible(inst.topo, greedy[0], inst.rates, inst.phy));
    const double g = schedule_objective(greedy[0], 1.0, inst.phy);
    CHECK(g <= best.objective + 1e-9);
    if (best.objective > g + 1e-9) ++strictly_better;
  }
  MESSAGE("oracle strictly better on " << strictly_better << " of 60 instances");
}

TEST_CASE("random instances are reproducible") {
  const auto a = oracle::random_instance(9, 6, 5, 200.0);
  const auto b = oracle::random_instance(9, 6, 5, 200.0);
  REQUIRE(a.links.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(a.links[k].link == b.links[k].link);
    CHECK(a.links[k].value == b.links[k].value);
    CHECK(a.links[k].value >= -3);
    CHECK(a.links[k].value <= 20);
  }
}
