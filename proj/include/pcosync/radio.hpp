#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace pcosync {

inline constexpr double kSpeedOfLight = 299792458.0;

enum class PathlossModel { free_space, hata_rural };

std::string_view to_string(PathlossModel m);
PathlossModel pathloss_model_from_string(std::string_view s);

/// Radio timing, power and propagation constants shared by both protocols.
struct RadioConfig {
  double bitrate_bps = 4e6;
  double tx_power_max_dBm = 30.0;
  double rx_power_W = 0.05;
  double tx_circuit_power_W = 0.05;
  double lo_warmup_s = 450e-6;
  /// Energy for one off->on transition. Unset means lo_warmup_s * rx_power_W.
  std::optional<double> lo_startup_energy_J;
  double sensitivity_dBm = -90.0;
  double capture_threshold_dB = 10.0;
  /// Any time overlap destroys every overlapping reception.
  bool strict_collisions = false;
  double frequency_Hz = 1e9;
  double tx_antenna_height_m = 1.0;
  double rx_antenna_height_m = 1.0;
  PathlossModel pathloss_model = PathlossModel::hata_rural;
  double pathloss_exponent = 2.0;
  /// Clamp Hata inputs (frequency, antenna heights) into the model's validity range.
  bool hata_clamp = false;
  /// Power-control ladder.
  double power_floor_dBm = -60.0;
  double power_step_dB = 1.0;
  double probe_slot_s = 10e-6;

  double startup_energy_J() const { return lo_startup_energy_J.value_or(lo_warmup_s * rx_power_W); }
  double airtime_s(double bits) const { return bits / bitrate_bps; }
  void validate() const;
};

double dbm_to_watts(double dBm);
double watts_to_dbm(double watts);

/// Free-space loss with a generalised distance exponent:
/// 10*delta*log10(d) + 20*log10(f) + 20*log10(4*pi/c).
double freespace_pathloss_dB(double d_m, double f_Hz, double delta);

struct HataOptions {
  bool clamp = false;
};

/// Hata urban loss (small/medium-city mobile correction) with the open/rural
/// area correction applied. Frequencies outside 150..1500 MHz are rejected
/// unless clamping is enabled; antenna heights below the model minima are
/// clamped when enabled and otherwise evaluated raw. Either case logs a
/// one-time warning.
double hata_rural_pathloss_dB(double d_m, double f_Hz, double h_base_m, double h_mobile_m,
                              HataOptions opts = {});

inline constexpr double kMinLinkDistance_m = 1.0;

/// Loss used by the simulator for a link of length d_m (evaluated at no less
/// than kMinLinkDistance_m so coincident nodes stay finite). The Hata branch is
/// floored at free-space loss (delta = 2) because the raw formula
/// extrapolated below ~70 m drops under the physical free-space bound and
/// eventually goes negative.
double link_pathloss_dB(const RadioConfig& radio, double d_m);

/// Decode gate: the wanted signal must clear sensitivity and exceed the
/// power sum of every time-overlapping interferer by the capture threshold.
bool can_decode(double rx_dBm, double sensitivity_dBm, std::span<const double> interferers_dBm,
                double capture_threshold_dB = 10.0, bool strict_collisions = false);

}  // namespace pcosync
