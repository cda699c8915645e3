#include <doctest.h>

#include <random>

#include "meshsim/net_model.hpp"
#include "test_util.hpp"

using namespace meshsim;
using testutil::rel_close;

TEST_CASE("channel gain follows the log-distance law") {
  PhyConfig phy;
  CHECK(channel_gain({0, 0}, {10, 0}, phy) == doctest::Approx(1.0));
  CHECK(channel_gain({0, 0}, {20, 0}, phy) == doctest::Approx(0.125));
  CHECK(channel_gain({0, 0}, {100, 0}, phy) == doctest::Approx(1e-3));
  CHECK(channel_gain({0, 0}, {6, 8}, phy) == doctest::Approx(1.0));
}

TEST_CASE("coincident positions are rejected") {
  CHECK_THROWS_AS(channel_gain({3, 4}, {3, 4}, PhyConfig{}), ConfigError);
  CHECK_THROWS_AS(Topology({{1, 1}, {1, 1}, {5, 5}}, PhyConfig{}), ConfigError);
}

TEST_CASE("gain strictly decreases with distance") {
  PhyConfig phy;
  double prev = channel_gain({0, 0}, {0.5, 0}, phy);
  for (double d = 1.0; d < 2000.0; d *= 1.37) {
    const double g = channel_gain({0, 0}, {d, 0}, phy);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("dBm conversions") {
  CHECK(dbm_to_mw(0.0) == doctest::Approx(1.0));
  CHECK(rel_close(dbm_to_mw(-90.0), 1e-9, 1e-12));
  CHECK(dbm_to_mw(20.0) == doctest::Approx(100.0));
  CHECK(db_to_linear(6.02) == doctest::Approx(3.999447).epsilon(1e-6));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double p = std::pow(10.0, unit_from_bits(rng()) * 24.0 - 12.0);
    CHECK(rel_close(dbm_to_mw(mw_to_dbm(p)), p, 1e-12));
  }
}

TEST_CASE("phy validation") {
  PhyConfig phy;
  CHECK_NOTHROW(phy.validate());
  phy.noise_mw = 0.0;
  CHECK_THROWS_AS(phy.validate(), ConfigError);
  phy = {};
  phy.packet_bits = -1.0;
  CHECK_THROWS_AS(phy.validate(), ConfigError);
}

TEST_CASE("default rate table") {
  const auto t = RateTable::ieee80211a();
  REQUIRE(t.size() == 8);
  const double mbps[] = {54, 48, 36, 24, 18, 12, 9, 6};
  const double db[] = {24.56, 24.05, 18.8, 17.04, 10.79, 9.03, 7.78, 6.02};
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(t.rate(i) == mbps[i] * 1e6);
    CHECK(t[i].threshold_db == db[i]);
    CHECK(rel_close(t.beta(i), std::pow(10.0, db[i] / 10.0), 1e-15));
    CHECK(t.index_of(mbps[i] * 1e6) == i);
    if (i > 0) CHECK(t.beta(i) < t.beta(i - 1));
  }
  CHECK(t.index_of(11e6) == t.size());
  CHECK(t.lowest_rate() == 6e6);
}

TEST_CASE("rate table parsing and validation") {
  const auto t = RateTable::parse("6:6.02, 54:24.56,12:9.03");
  REQUIRE(t.size() == 3);
  CHECK(t.rate(0) == 54e6);
  CHECK(t.rate(2) == 6e6);
  CHECK(RateTable::parse(t.to_string()).to_string() == t.to_string());
  CHECK(RateTable::parse(RateTable::ieee80211a().to_string()).size() == 8);

  CHECK_THROWS_AS(RateTable::parse(""), ConfigError);
  CHECK_THROWS_AS(RateTable::parse("54"), ConfigError);
  CHECK_THROWS_AS(RateTable::parse("54:x"), ConfigError);
  CHECK_THROWS_AS(RateTable::parse("54:20,54:21"), ConfigError);
  CHECK_THROWS_AS(RateTable::parse("54:10,6:12"), ConfigError);  // threshold falls with rate
  CHECK_THROWS_AS(RateTable::parse("-5:3"), ConfigError);
}

TEST_CASE("topology links are symmetric and sorted") {
  auto topo = testutil::line({0, 10, 20, 40});
  CHECK(topo.add_edge(testutil::n(3), testutil::n(1)));
  CHECK_FALSE(topo.add_edge(testutil::n(1), testutil::n(3)));
  CHECK(topo.add_edge(testutil::n(2), testutil::n(4)));
  CHECK(topo.has_link(testutil::n(1), testutil::n(3)));
  CHECK(topo.has_link(testutil::n(3), testutil::n(1)));
  CHECK(std::is_sorted(topo.links().begin(), topo.links().end()));
  CHECK(topo.links().size() == 4);
  CHECK(topo.degree(testutil::n(1)) == 1);
  CHECK(topo.gain(testutil::n(1), testutil::n(2)) == doctest::Approx(1.0));
  CHECK(topo.gain(testutil::n(4), testutil::n(2)) == doctest::Approx(1.0 / 27));
  CHECK_FALSE(topo.connected());
  CHECK(topo.hop_distance(testutil::n(1), testutil::n(2)) == SIZE_MAX);
  topo.add_edge(testutil::n(1), testutil::n(2));
  CHECK(topo.connected());
  CHECK(topo.hop_distance(testutil::n(3), testutil::n(4)) == 3);
  CHECK_THROWS_AS(topo.add_edge(testutil::n(2), testutil::n(2)), ConfigError);
  CHECK_THROWS_AS(topo.add_edge(testutil::n(2), testutil::n(9)), ConfigError);
}

TEST_CASE("gateway set must be a non-empty strict subset") {
  auto topo = testutil::line({0, 10, 20, 40});
  CHECK_THROWS_AS(topo.set_gateways({}), ConfigError);
  CHECK_THROWS_AS(topo.set_gateways({testutil::n(1), testutil::n(2), testutil::n(3), testutil::n(4)}), ConfigError);
  CHECK_THROWS_AS(topo.set_gateways({testutil::n(1), testutil::n(1)}), ConfigError);
  CHECK_THROWS_AS(topo.set_gateways({testutil::n(5)}), ConfigError);
  topo.set_gateways({testutil::n(4), testutil::n(1)});
  CHECK(topo.gateways() == std::vector<NodeId>{testutil::n(1), testutil::n(4)});
  CHECK(topo.is_gateway(testutil::n(4)));
  CHECK_FALSE(topo.is_gateway(testutil::n(2)));
}

TEST_CASE("position sampling is seeded and bounded") {
  const auto a = sample_positions(20, 350.0, 42);
  const auto b = sample_positions(20, 350.0, 42);
  const auto c = sample_positions(20, 350.0, 43);
  REQUIRE(a.size() == 20);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
    CHECK(a[i].x >= 0.0);
    CHECK(a[i].x < 350.0);
    CHECK(a[i].y >= 0.0);
    CHECK(a[i].y < 350.0);
    differs = differs || a[i].x != c[i].x;
  }
  CHECK(differs);
  CHECK_THROWS_AS(sample_positions(5, 0.0, 1), ConfigError);
}
