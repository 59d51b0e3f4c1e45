#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "pcosync/simulation.hpp"

namespace pcosync {

NetworkSetup make_setup(const Scenario& scenario) {
  NetworkSetup setup;
  RngStream placement(scenario.seed, StreamId::placement);
  setup.positions = place_uniform(scenario.n_nodes, scenario.area_side_m, placement);

  // Partial Fisher-Yates over node ids for the GPS masters.
  std::vector<NodeId> ids(scenario.n_nodes);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  for (std::size_t i = 0; i < scenario.n_masters; ++i) {
    const std::size_t j = i + placement.index(ids.size() - i);
    std::swap(ids[i], ids[j]);
  }
  setup.masters.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(scenario.n_masters));
  std::sort(setup.masters.begin(), setup.masters.end());

  RngStream drift(scenario.seed, StreamId::drift_sign);
  setup.drift_rates.resize(scenario.n_nodes);
  for (auto& d : setup.drift_rates) d = drift.sign() * scenario.drift_magnitude;
  setup.initial_offsets.resize(scenario.n_nodes);
  for (auto& o : setup.initial_offsets) o = -drift.uniform() * scenario.initial_offset_max_s;
  return setup;
}

World::World(const Scenario& scenario, const NetworkSetup& setup)
    : scenario_(scenario),
      positions_(setup.positions),
      clocks_(setup.positions.size()),
      ledger_(setup.positions.size(), scenario.radio),
      mobility_rng_(scenario.seed, StreamId::mobility),
      has_master_(!setup.masters.empty()),
      drift_rates_(setup.drift_rates) {
  for (std::size_t i = 0; i < clocks_.size(); ++i) {
    clocks_[i].drift_rate = setup.drift_rates[i];
    clocks_[i].offset = setup.initial_offsets[i];
    clocks_[i].epoch = SimTime::zero();
  }
  for (double d : drift_rates_) digest(d);
  for (const auto& p : positions_) {
    digest(p.x);
    digest(p.y);
  }
}

void World::digest(double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    digest_ ^= (bits >> (8 * i)) & 0xff;
    digest_ *= 0x100000001b3ULL;
  }
}

void World::record_round(const RoundSummary& round) {
  rounds_.push_back(round);
  pending_tts_ms_ = round.tts.ms;
}

void World::schedule_mobility(SimTime at) {
  queue_.schedule(at, EventKind::mobility_step, [this, at] {
    positions_ = step_mobility(positions_, scenario_.mobility, mobility_rng_,
                               scenario_.mobility.step_dt);
    ++positions_version_;
    for (const auto& p : positions_) {
      digest(p.x);
      digest(p.y);
    }
    const SimTime next = at + SimTime::from_seconds(scenario_.mobility.step_dt);
    if (next.seconds() <= scenario_.duration_s) schedule_mobility(next);
  });
}

void World::schedule_sample(SimTime at) {
  queue_.schedule(at, EventKind::metric_sample, [this, at] {
    take_sample(at);
    const SimTime next = at + SimTime::from_seconds(scenario_.sample_interval_s);
    if (next.seconds() <= scenario_.duration_s + 1e-12) schedule_sample(next);
  });
}

void World::take_sample(SimTime t) {
  if (pre_sample_) pre_sample_(t);
  const std::size_t n = size();
  std::vector<double> errors(n);
  for (std::size_t i = 0; i < n; ++i) errors[i] = clock_error(clocks_[i], t);

  // Absolute (GPS) reference when a master exists, otherwise the fleet mean.
  double reference = 0.0;
  if (!has_master_) reference = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(n);
  std::size_t synced = 0;
  for (double e : errors) {
    if (std::abs(e - reference) <= scenario_.sync_tolerance_s) ++synced;
  }

  MetricSample s;
  s.t = t;
  s.pos = pos(synced, n);
  s.tts_ms = pending_tts_ms_;
  pending_tts_ms_.reset();
  s.clock_var_s2 = clock_variance(errors, reference);
  s.density_per_m2 = n >= 2 ? density(positions_) : 0.0;
  const EnergyTotals e = ledger_.network();
  s.energy_tx_J = e.tx_J;
  s.energy_rx_J = e.rx_J;
  s.energy_startup_J = e.startup_J;
  const double total = e.total();
  s.sync_eff_per_W = (total > 0 && t.ns() > 0) ? sync_efficiency(synced, n, total / t.seconds()) : 0.0;
  samples_.push_back(s);
}

LegResult World::run(Protocol protocol) {
  if (scenario_.mobility.enabled) schedule_mobility(SimTime::from_seconds(scenario_.mobility.step_dt));
  schedule_sample(SimTime::from_seconds(scenario_.sample_interval_s));
  // Windows that open just before the end are allowed to finish.
  const SimTime end = SimTime::from_seconds(scenario_.duration_s);
  queue_.run_until(end);
  const SimTime drain = end + SimTime::from_seconds(2.0 * scenario_.pco.window + 0.01);
  queue_.run_until(drain);

  LegResult r;
  r.protocol = protocol;
  r.n_nodes = size();
  r.duration_s = scenario_.duration_s;
  r.samples = std::move(samples_);
  r.rounds = std::move(rounds_);
  r.energy = ledger_.network();
  r.window_on_s = window_on_s_;
  r.infeasible_rounds = infeasible_rounds_;
  r.trajectory_digest = digest_;
  r.final_positions = positions_;
  r.drift_rates = drift_rates_;
  r.final_clock_errors.resize(size());
  for (std::size_t i = 0; i < size(); ++i) r.final_clock_errors[i] = clock_error(clocks_[i], queue_.now());
  return r;
}

}  // namespace pcosync
