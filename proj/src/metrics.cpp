#include "pcosync/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pcosync {

double pos(std::size_t synced, std::size_t n) {
  if (n == 0) throw std::invalid_argument("pos: n must be > 0");
  if (synced > n) throw std::invalid_argument("pos: synced exceeds n");
  return 1.0 - static_cast<double>(synced) / static_cast<double>(n);
}

double sync_efficiency(std::size_t synced, std::size_t n, double total_power_W) {
  if (!(total_power_W > 0)) throw std::invalid_argument("sync_efficiency: power must be > 0");
  return (1.0 - pos(synced, n)) / total_power_W;
}

double clock_variance(std::span<const double> local_times, double reference) {
  if (local_times.empty()) throw std::invalid_argument("clock_variance: no clocks");
  double mean = 0.0;
  for (double t : local_times) mean += t - reference;
  mean /= static_cast<double>(local_times.size());
  double acc = 0.0;
  for (double t : local_times) {
    const double d = (t - reference) - mean;
    acc += d * d;
  }
  return acc / static_cast<double>(local_times.size());
}

TtsResult tts(const RoundRecord& round) {
  if (round.converged_at.empty()) return {round.window_s * 1e3, false};
  const SimTime last = *std::max_element(round.converged_at.begin(), round.converged_at.end());
  return {(last - round.opened).seconds() * 1e3, true};
}

std::string_view to_string(GainMode m) {
  return m == GainMode::per_transmission ? "per-transmission" : "aggregate-sum";
}

GainMode gain_mode_from_string(std::string_view s) {
  if (s == "per-transmission") return GainMode::per_transmission;
  if (s == "aggregate-sum") return GainMode::aggregate_sum;
  throw std::invalid_argument("unknown gain mode '" + std::string(s) + "'");
}

double gain_ratio(const GainQuery& q) {
  if (!(q.n >= 1)) throw std::invalid_argument("gain_ratio: n must be >= 1");
  if (!(q.area_m2 > 0)) throw std::invalid_argument("gain_ratio: area must be > 0");
  const double broadcast =
      std::pow(std::sqrt(q.area_m2 / std::numbers::pi) + std::sqrt(q.area_m2 / (q.n + 1.0)), q.delta);
  double nearest = std::pow(std::sqrt(q.area_m2 / q.n), q.delta);
  if (q.mode == GainMode::aggregate_sum) nearest *= q.n;
  return broadcast / nearest;
}

double energy_ratio(double broadcast_total_J, double pco_total_J) {
  if (!(pco_total_J > 0)) throw std::invalid_argument("energy_ratio: PCO total must be > 0");
  if (!(broadcast_total_J > 0)) throw std::invalid_argument("energy_ratio: broadcast total must be > 0");
  return broadcast_total_J / pco_total_J;
}

void write_metrics_csv(std::ostream& out, std::span<const MetricSample> samples) {
  out << kMetricsCsvHeader << '\n';
  for (const auto& s : samples) {
    const std::string tts = s.tts_ms ? fmt::format("{:.9g}", *s.tts_ms) : std::string();
    out << fmt::format("{:.9f},{:.9g},{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", s.t.seconds(),
                       s.pos, tts, s.clock_var_s2, s.density_per_m2, s.energy_tx_J, s.energy_rx_J,
                       s.energy_startup_J, s.sync_eff_per_W);
  }
}

}  // namespace pcosync
