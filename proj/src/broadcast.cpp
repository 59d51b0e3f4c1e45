#include "pcosync/broadcast.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pcosync/power_control.hpp"

namespace pcosync {

void BroadcastConfig::validate() const {
  if (!(timestamp_bits > 0)) throw std::invalid_argument("timestamp_bits: must be > 0");
  if (!(period > 0)) throw std::invalid_argument("period: must be > 0");
}

NodeId select_center_node(std::span<const Position> positions) {
  if (positions.empty()) throw std::invalid_argument("select_center_node: no nodes");
  NodeId best = 0;
  double best_radius = std::numeric_limits<double>::infinity();
  for (NodeId i = 0; i < positions.size(); ++i) {
    double radius = 0.0;
    for (NodeId j = 0; j < positions.size() && radius < best_radius; ++j) {
      radius = std::max(radius, distance(positions[i], positions[j]));
    }
    if (radius < best_radius) {
      best_radius = radius;
      best = i;
    }
  }
  return best;
}

BroadcastRoundResult broadcast_round(NodeId center, SimTime t, std::span<const Position> positions,
                                     const RadioConfig& radio, const BroadcastConfig& cfg,
                                     EnergyLedger& ledger) {
  BroadcastRoundResult out;
  out.center = center;
  out.receptions.resize(positions.size());
  if (positions.size() < 2) return out;

  try {
    out.tx_power_dBm = min_broadcast_power(center, positions, radio);
  } catch (const InfeasibleBroadcast&) {
    out.tx_power_dBm = radio.tx_power_max_dBm;
    out.feasible = false;
  }

  const double airtime = cfg.rx_on_s(radio);
  ledger.charge_tx(center, cfg.timestamp_bits, dbm_to_watts(out.tx_power_dBm));

  for (NodeId r = 0; r < positions.size(); ++r) {
    if (r == center) continue;
    ledger.charge_rx(r, airtime);
    const double d = distance(positions[center], positions[r]);
    auto& rx = out.receptions[r];
    rx.rx_dBm = out.tx_power_dBm - link_pathloss_dB(radio, d);
    // The sole transmitter: no interferers.
    rx.decoded = can_decode(rx.rx_dBm, radio.sensitivity_dBm, {}, radio.capture_threshold_dB,
                            radio.strict_collisions);
    if (rx.decoded) {
      rx.decoded_at = t + SimTime::from_seconds(airtime + d / kSpeedOfLight);
      rx.timestamp = t.seconds() + airtime;
    }
  }
  return out;
}

}  // namespace pcosync
