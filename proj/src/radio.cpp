#include "pcosync/radio.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pcosync {

namespace {

void warn_once(std::once_flag& flag, const char* message) {
  std::call_once(flag, [message] { std::cerr << "warning: " << message << '\n'; });
}

std::once_flag g_hata_height_warning;

}  // namespace

std::string_view to_string(PathlossModel m) {
  switch (m) {
    case PathlossModel::free_space:
      return "free-space";
    case PathlossModel::hata_rural:
      return "hata-rural";
  }
  return "unknown";
}

PathlossModel pathloss_model_from_string(std::string_view s) {
  if (s == "free-space") return PathlossModel::free_space;
  if (s == "hata-rural") return PathlossModel::hata_rural;
  throw std::invalid_argument("unknown pathloss model '" + std::string(s) + "'");
}

void RadioConfig::validate() const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
  };
  require(std::isfinite(bitrate_bps) && bitrate_bps > 0, "bitrate_bps", "must be > 0");
  require(std::isfinite(tx_power_max_dBm), "tx_power_max_dBm", "must be finite");
  require(std::isfinite(rx_power_W) && rx_power_W >= 0, "rx_power_W", "must be >= 0");
  require(std::isfinite(tx_circuit_power_W) && tx_circuit_power_W >= 0, "tx_circuit_power_W",
          "must be >= 0");
  require(std::isfinite(lo_warmup_s) && lo_warmup_s >= 0, "lo_warmup_s", "must be >= 0");
  require(!lo_startup_energy_J || (std::isfinite(*lo_startup_energy_J) && *lo_startup_energy_J >= 0),
          "lo_startup_energy_J", "must be >= 0");
  require(std::isfinite(sensitivity_dBm), "sensitivity_dBm", "must be finite");
  require(sensitivity_dBm < tx_power_max_dBm, "sensitivity_dBm", "must be below tx_power_max_dBm");
  require(std::isfinite(capture_threshold_dB), "capture_threshold_dB", "must be finite");
  require(std::isfinite(frequency_Hz) && frequency_Hz > 0, "frequency_Hz", "must be > 0");
  require(tx_antenna_height_m > 0, "tx_antenna_height_m", "must be > 0");
  require(rx_antenna_height_m > 0, "rx_antenna_height_m", "must be > 0");
  require(std::isfinite(pathloss_exponent) && pathloss_exponent > 0, "pathloss_exponent",
          "must be > 0");
  require(std::isfinite(power_floor_dBm) && power_floor_dBm <= tx_power_max_dBm,
          "power_floor_dBm", "must not exceed tx_power_max_dBm");
  require(std::isfinite(power_step_dB) && power_step_dB > 0, "power_step_dB", "must be > 0");
  require(std::isfinite(probe_slot_s) && probe_slot_s > 0, "probe_slot_s", "must be > 0");
  if (pathloss_model == PathlossModel::hata_rural && !hata_clamp) {
    const double f_MHz = frequency_Hz / 1e6;
    require(f_MHz >= 150.0 && f_MHz <= 1500.0, "frequency_Hz",
            "outside Hata validity (150-1500 MHz); set hata_clamp to allow");
  }
}

double dbm_to_watts(double dBm) { return std::pow(10.0, (dBm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double freespace_pathloss_dB(double d_m, double f_Hz, double delta) {
  if (!(d_m > 0)) throw std::invalid_argument("freespace_pathloss_dB: distance must be > 0");
  // Link-budget convention: c rounded to 3e8, i.e. the familiar -147.56 dB term.
  return 10.0 * delta * std::log10(d_m) + 20.0 * std::log10(f_Hz) +
         20.0 * std::log10(4.0 * std::numbers::pi / 3e8);
}

double hata_rural_pathloss_dB(double d_m, double f_Hz, double h_base_m, double h_mobile_m,
                              HataOptions opts) {
  if (!(d_m > 0)) throw std::invalid_argument("hata_rural_pathloss_dB: distance must be > 0");
  double f_MHz = f_Hz / 1e6;
  if (f_MHz < 150.0 || f_MHz > 1500.0) {
    if (!opts.clamp) {
      throw std::invalid_argument("hata_rural_pathloss_dB: frequency outside 150-1500 MHz");
    }
    f_MHz = std::clamp(f_MHz, 150.0, 1500.0);
  }
  if (h_base_m < 30.0 || h_base_m > 200.0 || h_mobile_m < 1.0 || h_mobile_m > 10.0) {
    if (opts.clamp) {
      warn_once(g_hata_height_warning, "Hata antenna heights outside 30-200 m / 1-10 m; clamped");
      h_base_m = std::clamp(h_base_m, 30.0, 200.0);
      h_mobile_m = std::clamp(h_mobile_m, 1.0, 10.0);
    } else {
      warn_once(g_hata_height_warning,
                "Hata antenna heights outside 30-200 m / 1-10 m; evaluating the raw formula");
    }
  }

  const double lf = std::log10(f_MHz);
  const double lhb = std::log10(h_base_m);
  const double d_km = d_m / 1000.0;
  const double a_hm = (1.1 * lf - 0.7) * h_mobile_m - (1.56 * lf - 0.8);
  const double urban =
      69.55 + 26.16 * lf - 13.82 * lhb - a_hm + (44.9 - 6.55 * lhb) * std::log10(d_km);
  const double rural_correction = -4.78 * lf * lf + 18.33 * lf - 40.94;
  return urban + rural_correction;
}

double link_pathloss_dB(const RadioConfig& radio, double d_m) {
  d_m = std::max(d_m, kMinLinkDistance_m);
  switch (radio.pathloss_model) {
    case PathlossModel::free_space:
      return freespace_pathloss_dB(d_m, radio.frequency_Hz, radio.pathloss_exponent);
    case PathlossModel::hata_rural: {
      const double hata = hata_rural_pathloss_dB(d_m, radio.frequency_Hz, radio.tx_antenna_height_m,
                                                 radio.rx_antenna_height_m, {radio.hata_clamp});
      return std::max(hata, freespace_pathloss_dB(d_m, radio.frequency_Hz, 2.0));
    }
  }
  throw std::logic_error("unhandled pathloss model");
}

bool can_decode(double rx_dBm, double sensitivity_dBm, std::span<const double> interferers_dBm,
                double capture_threshold_dB, bool strict_collisions) {
  if (rx_dBm < sensitivity_dBm) return false;
  if (interferers_dBm.empty()) return true;
  if (strict_collisions) return false;
  double interference_W = 0.0;
  for (double i : interferers_dBm) interference_W += dbm_to_watts(i);
  return rx_dBm - watts_to_dbm(interference_W) >= capture_threshold_dB;
}

}  // namespace pcosync
