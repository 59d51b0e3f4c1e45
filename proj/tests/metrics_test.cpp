#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pcosync/metrics.hpp"

using namespace pcosync;

TEST_CASE("proportion out of sync") {
  CHECK(pos(612, 612) == 0.0);
  CHECK(pos(0, 612) == 1.0);
  CHECK(pos(459, 612) == doctest::Approx(0.25));
  for (std::size_t s = 0; s <= 37; ++s) CHECK(pos(s, 37) + static_cast<double>(s) / 37.0 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS(pos(5, 4));
}

TEST_CASE("sync efficiency") {
  CHECK(sync_efficiency(10, 10, 0.05) == doctest::Approx(20.0));
  CHECK(sync_efficiency(7, 10, 0.025) == doctest::Approx(2 * sync_efficiency(7, 10, 0.05)));
  CHECK_THROWS(sync_efficiency(1, 1, 0.0));
}

TEST_CASE("clock variance") {
  const std::vector<double> same{4.0, 4.0, 4.0};
  CHECK(clock_variance(same, 4.0) == 0.0);
  const std::vector<double> pm{-1e-6, 1e-6};
  CHECK(clock_variance(pm, 0.0) == doctest::Approx(1e-12));
  CHECK(clock_variance(pm, 7.0) == doctest::Approx(1e-12));
}

TEST_CASE("time to synchronize") {
  const SimTime open = SimTime::from_seconds(500);
  RoundRecord r{open, 5e-3, {open + SimTime::from_seconds(1e-4)}};
  CHECK(tts(r).ms == doctest::Approx(0.1));  // a lone master: one T_d
  CHECK(tts(r).converged);
  r.converged_at.push_back(open + SimTime::from_seconds(3e-3));
  CHECK(tts(r).ms == doctest::Approx(3.0));
  RoundRecord none{open, 5e-3, {}};
  CHECK(tts(none).ms == doctest::Approx(5.0));
  CHECK_FALSE(tts(none).converged);
}

TEST_CASE("gain ratio closed form") {
  const double oracle = std::pow(std::sqrt(1 / std::numbers::pi) + std::sqrt(1.0 / 101), 2) * 100;
  const double g = gain_ratio({100, 1e6, 2, GainMode::per_transmission});
  CHECK(g == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(std::abs(g - 44.05) < 0.01);

  for (double delta : {2.0, 3.0}) {
    double prev = 0;
    for (double n = 10; n <= 10000; n += 1) {
      const double v = gain_ratio({n, 1e6, delta, GainMode::per_transmission});
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("gain ratio does not depend on the area") {
  for (auto mode : {GainMode::per_transmission, GainMode::aggregate_sum}) {
    for (double delta : {2.0, 3.0, 3.5}) {
      for (double n : {2.0, 57.0, 612.0}) {
        const double ref = gain_ratio({n, 1e6, delta, mode});
        for (double a : {1.0, 3e4, 7.7e8}) CHECK(gain_ratio({n, a, delta, mode}) == doctest::Approx(ref).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("aggregate-sum gain falls toward 1/pi") {
  double prev = 1e9;
  for (double n = 10; n <= 100000; n *= 1.5) {
    const double v = gain_ratio({n, 1e6, 2, GainMode::aggregate_sum});
    CHECK(v < prev);
    CHECK(v > 1 / std::numbers::pi);
    prev = v;
  }
  CHECK(gain_ratio({1e9, 1e6, 2, GainMode::aggregate_sum}) == doctest::Approx(1 / std::numbers::pi).epsilon(1e-3));
  CHECK(gain_mode_from_string("aggregate-sum") == GainMode::aggregate_sum);
  CHECK_THROWS(gain_mode_from_string("bogus"));
}

TEST_CASE("energy ratio") {
  CHECK(energy_ratio(3.0, 3.0) == 1.0);
  CHECK(energy_ratio(15.0, 1.0) == 15.0);
  CHECK_THROWS(energy_ratio(1.0, 0.0));
}

TEST_CASE("metrics csv layout") {
  std::vector<MetricSample> rows(2);
  rows[0].t = SimTime::from_seconds(10);
  rows[0].tts_ms = 5.5;
  rows[1].t = SimTime::from_seconds(20);
  std::ostringstream out;
  write_metrics_csv(out, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == kMetricsCsvHeader);
  std::getline(in, line);
  CHECK(line.rfind("10.000000000,1,5.5,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("20.000000000,1,,", 0) == 0);
}
