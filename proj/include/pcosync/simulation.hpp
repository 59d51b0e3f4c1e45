#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pcosync/energy.hpp"
#include "pcosync/event_queue.hpp"
#include "pcosync/metrics.hpp"
#include "pcosync/rng.hpp"
#include "pcosync/scenario.hpp"
#include "pcosync/topology.hpp"
#include "pcosync/virtual_clock.hpp"

namespace pcosync {

/// Everything both protocol legs must share bit-for-bit: layout, GPS nodes and
/// clock drift/offset draws.
struct NetworkSetup {
  std::vector<Position> positions;
  std::vector<double> drift_rates;
  std::vector<double> initial_offsets;
  std::vector<NodeId> masters;  // ascending
};

NetworkSetup make_setup(const Scenario& scenario);

struct RoundSummary {
  SimTime opened;
  TtsResult tts;
  std::size_t converged_nodes = 0;
  bool feasible = true;
};

struct LegResult {
  Protocol protocol = Protocol::pco;
  std::size_t n_nodes = 0;
  double duration_s = 0.0;
  std::vector<MetricSample> samples;
  std::vector<RoundSummary> rounds;
  EnergyTotals energy;
  /// Sum over nodes of scheduled PCO receive-window time.
  double window_on_s = 0.0;
  std::size_t infeasible_rounds = 0;
  /// FNV-1a over the bit patterns of every position update and drift rate.
  std::uint64_t trajectory_digest = 0;
  std::vector<Position> final_positions;
  std::vector<double> drift_rates;
  std::vector<double> final_clock_errors;
};

/// State shared by both legs: event loop, geometry with optional mobility,
/// clocks, energy ledger and metric sampling.
class World {
 public:
  World(const Scenario& scenario, const NetworkSetup& setup);

  /// Schedules mobility steps and metric samples, runs to the scenario
  /// duration and packages the result.
  LegResult run(Protocol protocol);

  const Scenario& scenario() const { return scenario_; }
  EventQueue& queue() { return queue_; }
  const std::vector<Position>& positions() const { return positions_; }
  std::uint64_t positions_version() const { return positions_version_; }
  std::vector<VirtualClock>& clocks() { return clocks_; }
  EnergyLedger& ledger() { return ledger_; }
  std::size_t size() const { return positions_.size(); }
  bool has_master() const { return has_master_; }

  void record_round(const RoundSummary& round);
  void add_window_time(double seconds) { window_on_s_ += seconds; }
  void count_infeasible() { ++infeasible_rounds_; }
  /// Called right before each metric sample (e.g. to GPS-discipline masters).
  void set_pre_sample_hook(std::function<void(SimTime)> hook) { pre_sample_ = std::move(hook); }

 private:
  void schedule_mobility(SimTime at);
  void schedule_sample(SimTime at);
  void take_sample(SimTime t);
  void digest(double v);

  Scenario scenario_;
  EventQueue queue_;
  std::vector<Position> positions_;
  std::uint64_t positions_version_ = 0;
  std::vector<VirtualClock> clocks_;
  EnergyLedger ledger_;
  RngStream mobility_rng_;
  bool has_master_ = false;
  std::vector<MetricSample> samples_;
  std::vector<RoundSummary> rounds_;
  std::optional<double> pending_tts_ms_;
  double window_on_s_ = 0.0;
  std::size_t infeasible_rounds_ = 0;
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
  std::vector<double> drift_rates_;
  std::function<void(SimTime)> pre_sample_;
};

LegResult run_pco_leg(const Scenario& scenario, const NetworkSetup& setup);
LegResult run_broadcast_leg(const Scenario& scenario, const NetworkSetup& setup);

}  // namespace pcosync
