#include <doctest.h>

#include <cmath>
#include <limits>

#include "pcosync/broadcast.hpp"
#include "pcosync/rng.hpp"

using namespace pcosync;

namespace {

NodeId exhaustive_center(const std::vector<Position>& p) {
  NodeId best = 0;
  double best_r = std::numeric_limits<double>::infinity();
  for (NodeId i = 0; i < p.size(); ++i) {
    double r = 0;
    for (const auto& q : p) r = std::max(r, std::hypot(p[i].x - q.x, p[i].y - q.y));
    if (r < best_r) {
      best_r = r;
      best = i;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("broadcast receive-on time") {
  BroadcastConfig b;
  RadioConfig r;
  CHECK(b.rx_on_s(r) == doctest::Approx(45e-6));
  CHECK(b.period == 500.0);
}

TEST_CASE("center selection") {
  std::vector<Position> one{{3, 3}};
  CHECK(select_center_node(one) == 0);
  std::vector<Position> line{{0, 0}, {20, 0}, {10, 0}};
  CHECK(select_center_node(line) == 2);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    RngStream rng(seed, StreamId::placement);
    const auto pos = place_uniform(20, 1000, rng);
    CHECK(select_center_node(pos) == exhaustive_center(pos));
  }
}

TEST_CASE("fully reachable round") {
  RadioConfig r;
  BroadcastConfig b;
  RngStream rng(2, StreamId::placement);
  const auto pos = place_uniform(30, 1000, rng);
  EnergyLedger ledger(pos.size(), r);
  const NodeId c = select_center_node(pos);
  const SimTime t = SimTime::from_seconds(500);
  const auto res = broadcast_round(c, t, pos, r, b, ledger);
  CHECK(res.feasible);
  std::size_t transmitters = 0;
  for (NodeId i = 0; i < pos.size(); ++i) {
    if (ledger.node(i).tx_J > 0) ++transmitters;
    if (i == c) continue;
    CHECK(res.receptions[i].decoded);
    CHECK(ledger.node(i).rx_J == 0.05 * 45e-6);
    CHECK(ledger.node(i).startup_J == r.startup_energy_J());
    // Receivers install sender time plus airtime; the flight time stays as error.
    const double flight = distance(pos[c], pos[i]) / kSpeedOfLight;
    const double installed_error = res.receptions[i].timestamp - res.receptions[i].decoded_at.seconds();
    CHECK(installed_error == doctest::Approx(-flight).epsilon(1e-3));
  }
  CHECK(transmitters == 1);
}

TEST_CASE("distant receiver ignores flight time") {
  RadioConfig r;
  BroadcastConfig b;
  std::vector<Position> pos{{0, 0}, {900, 0}};
  EnergyLedger ledger(2, r);
  const auto res = broadcast_round(0, SimTime::zero(), pos, r, b, ledger);
  REQUIRE(res.receptions[1].decoded);
  CHECK(res.receptions[1].decoded_at.seconds() - res.receptions[1].timestamp ==
        doctest::Approx(900 / kSpeedOfLight).epsilon(1e-3));
}

TEST_CASE("out-of-range nodes are left untouched") {
  RadioConfig r;
  r.tx_power_max_dBm = -10;
  BroadcastConfig b;
  std::vector<Position> pos{{0, 0}, {5, 0}, {2000, 0}};
  EnergyLedger ledger(3, r);
  const auto res = broadcast_round(0, SimTime::zero(), pos, r, b, ledger);
  CHECK_FALSE(res.feasible);
  CHECK(res.tx_power_dBm == r.tx_power_max_dBm);
  CHECK(res.receptions[1].decoded);
  CHECK_FALSE(res.receptions[2].decoded);
}
