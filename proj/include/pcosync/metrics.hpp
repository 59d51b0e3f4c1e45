#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "pcosync/sim_time.hpp"

namespace pcosync {

/// Proportion out of sync, 1 - s/n.
double pos(std::size_t synced, std::size_t n);

/// (s/n) per watt of average transmitter + receiver power.
double sync_efficiency(std::size_t synced, std::size_t n, double total_power_W);

/// Population variance of (local - reference).
double clock_variance(std::span<const double> local_times, double reference);

/// One protocol round as seen by the TTS metric.
struct RoundRecord {
  SimTime opened;                // earliest radio-on of the round
  double window_s = 0.0;         // reported when nothing converged
  std::vector<SimTime> converged_at;
};

struct TtsResult {
  double ms = 0.0;
  bool converged = false;  // false: nothing converged, ms is the full window
};

/// Window open to the last locally-converging node.
TtsResult tts(const RoundRecord& round);

enum class GainMode { per_transmission, aggregate_sum };

std::string_view to_string(GainMode m);
GainMode gain_mode_from_string(std::string_view s);

struct GainQuery {
  double n = 1;
  double area_m2 = 1e6;
  double delta = 2;
  GainMode mode = GainMode::per_transmission;
};

/// Broadcast-distance pathloss over nearest-neighbour pathloss:
/// (sqrt(A/pi) + sqrt(A/(n+1)))^delta / (sqrt(A/n))^delta, the denominator
/// multiplied by n in aggregate-sum mode.
double gain_ratio(const GainQuery& q);

/// broadcast / PCO.
double energy_ratio(double broadcast_total_J, double pco_total_J);

struct MetricSample {
  SimTime t;
  double pos = 1.0;
  std::optional<double> tts_ms;
  double clock_var_s2 = 0.0;
  double density_per_m2 = 0.0;
  double energy_tx_J = 0.0;
  double energy_rx_J = 0.0;
  double energy_startup_J = 0.0;
  double sync_eff_per_W = 0.0;
};

inline constexpr std::string_view kMetricsCsvHeader =
    "t_s,pos,tts_ms,clock_var_s2,density_per_m2,energy_tx_J,energy_rx_J,energy_startup_J,"
    "sync_eff_per_W";

void write_metrics_csv(std::ostream& out, std::span<const MetricSample> samples);

}  // namespace pcosync
