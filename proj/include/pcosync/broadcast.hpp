#pragma once

#include <span>
#include <vector>

#include "pcosync/energy.hpp"
#include "pcosync/radio.hpp"
#include "pcosync/sim_time.hpp"
#include "pcosync/topology.hpp"

namespace pcosync {

struct BroadcastConfig {
  double timestamp_bits = 180.0;
  double period = 500.0;
  double rx_on_s(const RadioConfig& radio) const { return radio.airtime_s(timestamp_bits); }
  void validate() const;
};

/// Discrete 1-center: the node whose farthest peer is nearest. Ties go to the
/// lowest id.
NodeId select_center_node(std::span<const Position> positions);

struct BroadcastReception {
  bool decoded = false;
  double rx_dBm = 0.0;
  SimTime decoded_at;       // end of the timestamp packet at this receiver
  double timestamp = 0.0;   // clock value to install at decoded_at
};

struct BroadcastRoundResult {
  NodeId center = 0;
  double tx_power_dBm = 0.0;
  bool feasible = true;  // false: required power exceeded the cap
  std::vector<BroadcastReception> receptions;  // indexed by node; center entry unused
};

/// One timestamp broadcast from `center` at true time t.
///
/// Transmit power is the minimum that reaches the farthest node, capped at
/// tx_power_max. The packet carries the sender's (GPS) time at the start of
/// transmission; receivers add the known airtime but not the flight time.
/// Energy is charged to the transmitter and every scheduled receiver.
BroadcastRoundResult broadcast_round(NodeId center, SimTime t, std::span<const Position> positions,
                                     const RadioConfig& radio, const BroadcastConfig& cfg,
                                     EnergyLedger& ledger);

}  // namespace pcosync
