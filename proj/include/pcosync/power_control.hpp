#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "pcosync/energy.hpp"
#include "pcosync/radio.hpp"
#include "pcosync/topology.hpp"

namespace pcosync {

struct PowerControlResult {
  double tx_power_dBm = 0.0;
  unsigned probes = 0;      // probe pulses sent
  bool exhausted = false;   // ladder topped out without reaching the neighbour
  double duration_s = 0.0;  // probes * probe_slot
};

/// Steps transmit power up a discrete ladder (power_floor + k * power_step,
/// capped at tx_power_max) until the nearest neighbour would decode a probe.
///
/// Every probe is one pulse of `probe_bits`, charged as TX energy together
/// with a probe_slot of listening. With `start_dBm` set (re-run after
/// movement) the search starts from that ladder rung and walks down while the
/// neighbour is still reached, or up until it is.
PowerControlResult power_control_escalate(NodeId node, std::span<const Position> positions,
                                          const RadioConfig& radio, double probe_bits,
                                          EnergyLedger* ledger,
                                          std::optional<double> start_dBm = std::nullopt);

class InfeasibleBroadcast : public std::runtime_error {
 public:
  InfeasibleBroadcast(double required_dBm, double max_dBm);
  double required_dBm() const { return required_dBm_; }

 private:
  double required_dBm_;
};

/// Exact (continuous) power at which the farthest receiver sees sensitivity.
/// Throws InfeasibleBroadcast when that exceeds tx_power_max_dBm.
double min_broadcast_power(NodeId center, std::span<const Position> positions,
                           const RadioConfig& radio);

/// Same computation without the feasibility check.
double required_broadcast_power(NodeId center, std::span<const Position> positions,
                                const RadioConfig& radio);

}  // namespace pcosync
