#pragma once

#include <cstddef>
#include <vector>

#include "pcosync/radio.hpp"

namespace pcosync {

using NodeId = std::size_t;

struct EnergyTotals {
  double tx_J = 0.0;
  double rx_J = 0.0;
  double startup_J = 0.0;
  double total() const { return tx_J + rx_J + startup_J; }
};

/// Per-node energy accumulators plus the radio on/off state that decides
/// when a local-oscillator startup is charged.
///
/// A charge made while the radio is off is treated as a self-contained burst:
/// one startup is charged and the radio stays off afterwards. Long listening
/// periods use power_on()/power_off() explicitly.
class EnergyLedger {
 public:
  EnergyLedger(std::size_t n_nodes, RadioConfig radio);

  void power_on(NodeId node);
  void power_off(NodeId node);
  bool is_on(NodeId node) const { return on_.at(node); }

  /// tx += (bits / bitrate) * (radiated + circuit power).
  void charge_tx(NodeId node, double bits, double radiated_W);
  /// rx += on_time * rx_power.
  void charge_rx(NodeId node, double on_time_s);

  const EnergyTotals& node(NodeId node) const { return per_node_.at(node); }
  EnergyTotals network() const;
  std::size_t size() const { return per_node_.size(); }
  const RadioConfig& radio() const { return radio_; }

 private:
  void startup_if_off(NodeId node);

  RadioConfig radio_;
  std::vector<EnergyTotals> per_node_;
  std::vector<bool> on_;
};

}  // namespace pcosync
