#include "pcosync/energy.hpp"

#include <stdexcept>

namespace pcosync {

EnergyLedger::EnergyLedger(std::size_t n_nodes, RadioConfig radio)
    : radio_(std::move(radio)), per_node_(n_nodes), on_(n_nodes, false) {}

void EnergyLedger::power_on(NodeId node) {
  if (!on_.at(node)) {
    per_node_[node].startup_J += radio_.startup_energy_J();
    on_[node] = true;
  }
}

void EnergyLedger::power_off(NodeId node) { on_.at(node) = false; }

void EnergyLedger::startup_if_off(NodeId node) {
  if (!on_.at(node)) per_node_[node].startup_J += radio_.startup_energy_J();
}

void EnergyLedger::charge_tx(NodeId node, double bits, double radiated_W) {
  if (!(bits > 0)) throw std::invalid_argument("charge_tx: bits must be > 0");
  if (!(radiated_W >= 0)) throw std::invalid_argument("charge_tx: radiated power must be >= 0");
  startup_if_off(node);
  per_node_[node].tx_J += radio_.airtime_s(bits) * (radiated_W + radio_.tx_circuit_power_W);
}

void EnergyLedger::charge_rx(NodeId node, double on_time_s) {
  if (!(on_time_s >= 0)) throw std::invalid_argument("charge_rx: on-time must be >= 0");
  startup_if_off(node);
  per_node_[node].rx_J += on_time_s * radio_.rx_power_W;
}

EnergyTotals EnergyLedger::network() const {
  EnergyTotals sum;
  for (const auto& e : per_node_) {
    sum.tx_J += e.tx_J;
    sum.rx_J += e.rx_J;
    sum.startup_J += e.startup_J;
  }
  return sum;
}

}  // namespace pcosync
