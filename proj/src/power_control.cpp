#include "pcosync/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pcosync {

namespace {

double ladder_power(const RadioConfig& radio, int rung) {
  return std::min(radio.power_floor_dBm + rung * radio.power_step_dB, radio.tx_power_max_dBm);
}

int top_rung(const RadioConfig& radio) {
  return static_cast<int>(
      std::ceil((radio.tx_power_max_dBm - radio.power_floor_dBm) / radio.power_step_dB - 1e-9));
}

int rung_of(const RadioConfig& radio, double dBm) {
  const double r = (dBm - radio.power_floor_dBm) / radio.power_step_dB;
  return std::clamp(static_cast<int>(std::lround(r)), 0, top_rung(radio));
}

}  // namespace

PowerControlResult power_control_escalate(NodeId node, std::span<const Position> positions,
                                          const RadioConfig& radio, double probe_bits,
                                          EnergyLedger* ledger, std::optional<double> start_dBm) {
  const Neighbor nn = nearest_neighbor(node, positions);
  const double loss = link_pathloss_dB(radio, nn.distance_m);
  auto reaches = [&](int rung) { return ladder_power(radio, rung) - loss >= radio.sensitivity_dBm; };

  PowerControlResult res;
  auto probe = [&](int rung) {
    ++res.probes;
    if (ledger) {
      ledger->charge_tx(node, probe_bits, dbm_to_watts(ladder_power(radio, rung)));
      ledger->charge_rx(node, radio.probe_slot_s);
    }
  };

  const int top = top_rung(radio);
  int rung = start_dBm ? rung_of(radio, *start_dBm) : 0;
  probe(rung);
  if (reaches(rung)) {
    while (rung > 0) {
      probe(rung - 1);
      if (!reaches(rung - 1)) break;
      --rung;
    }
  } else {
    while (rung < top && !reaches(rung)) probe(++rung);
    res.exhausted = !reaches(rung);
  }
  res.tx_power_dBm = ladder_power(radio, rung);
  res.duration_s = res.probes * radio.probe_slot_s;
  return res;
}

InfeasibleBroadcast::InfeasibleBroadcast(double required_dBm, double max_dBm)
    : std::runtime_error("broadcast needs " + std::to_string(required_dBm) + " dBm, above the " +
                         std::to_string(max_dBm) + " dBm limit"),
      required_dBm_(required_dBm) {}

double required_broadcast_power(NodeId center, std::span<const Position> positions,
                                const RadioConfig& radio) {
  if (positions.size() < 2) throw std::invalid_argument("min_broadcast_power: no receivers");
  if (center >= positions.size()) throw std::out_of_range("min_broadcast_power: bad center id");
  double worst = -std::numeric_limits<double>::infinity();
  for (NodeId j = 0; j < positions.size(); ++j) {
    if (j == center) continue;
    worst = std::max(worst, link_pathloss_dB(radio, distance(positions[center], positions[j])));
  }
  return radio.sensitivity_dBm + worst;
}

double min_broadcast_power(NodeId center, std::span<const Position> positions,
                           const RadioConfig& radio) {
  const double p = required_broadcast_power(center, positions, radio);
  if (p > radio.tx_power_max_dBm) throw InfeasibleBroadcast(p, radio.tx_power_max_dBm);
  return p;
}

}  // namespace pcosync
