#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pcosync/metrics.hpp"
#include "pcosync/simulation.hpp"

namespace pcosync {

struct RunResult {
  Scenario scenario;
  std::optional<LegResult> pco;
  std::optional<LegResult> broadcast;
};

/// Runs the requested legs on one shared setup. With protocol=both the two
/// legs execute concurrently as independent event loops.
RunResult run_scenario(const Scenario& scenario);

struct TtsStats {
  std::size_t rounds = 0;
  double first_ms = 0.0;
  double rest_mean_ms = 0.0;  // rounds after the first
  double rest_var_s2 = 0.0;
};

TtsStats tts_stats(const LegResult& leg);

/// Final-sample efficiency: synchronized fraction per average watt.
double final_efficiency(const LegResult& leg);

/// Fraction of node-time spent in scheduled receive windows.
double duty_cycle(const LegResult& leg);

/// Ordered key/value rows of <name>.summary.csv.
std::vector<std::pair<std::string, std::string>> summary_rows(const RunResult& run);

/// Writes <name>.<protocol>.metrics.csv for each leg and <name>.summary.csv.
/// Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const RunResult& run,
                                                 const std::filesystem::path& out_dir);

struct SweepSpec {
  std::size_t n_min = 10;
  std::size_t n_max = 10000;
  std::size_t n_step = 10;
  std::vector<double> deltas{2.0, 3.0};
  GainMode mode = GainMode::per_transmission;
  double area_m2 = 1e6;
};

/// CSV with header n,delta,mode,gain_ratio, one row per (n, delta).
void sweep_gain(const SweepSpec& spec, std::ostream& out);

}  // namespace pcosync
