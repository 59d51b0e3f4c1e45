#include <algorithm>

#include "pcosync/broadcast.hpp"
#include "pcosync/simulation.hpp"

namespace pcosync {

namespace {

class BroadcastLeg {
 public:
  BroadcastLeg(const Scenario& scenario, const NetworkSetup& setup)
      : world_(scenario, setup), masters_(setup.masters) {
    // GPS nodes exist in both legs and are disciplined the same way.
    for (NodeId m : masters_) apply_correction(world_.clocks()[m], 0.0, SimTime::zero());
    world_.set_pre_sample_hook([this](SimTime t) {
      for (NodeId m : masters_) apply_correction(world_.clocks()[m], t.seconds(), t);
    });
  }

  LegResult run() {
    if (world_.size() >= 2) schedule_round(0);
    return world_.run(Protocol::broadcast);
  }

 private:
  void schedule_round(std::uint64_t k) {
    const double at = static_cast<double>(k) * world_.scenario().broadcast.period;
    if (at >= world_.scenario().duration_s) return;
    world_.queue().schedule(SimTime::from_seconds(at), EventKind::broadcast, [this, k] { round(k); });
  }

  void round(std::uint64_t k) {
    const SimTime t = world_.queue().now();
    const auto& pos = world_.positions();
    const NodeId center = select_center_node(pos);
    // The sender is GPS-disciplined at transmit time.
    apply_correction(world_.clocks()[center], t.seconds(), t);

    const auto res = broadcast_round(center, t, pos, world_.scenario().radio,
                                     world_.scenario().broadcast, world_.ledger());
    if (!res.feasible) world_.count_infeasible();

    RoundRecord rec{t, world_.scenario().broadcast.rx_on_s(world_.scenario().radio), {}};
    for (NodeId r = 0; r < res.receptions.size(); ++r) {
      const auto& rx = res.receptions[r];
      if (r == center || !rx.decoded) continue;
      rec.converged_at.push_back(rx.decoded_at);
      const double stamp = rx.timestamp;
      world_.queue().schedule(rx.decoded_at, EventKind::rx_complete, [this, r, stamp] {
        apply_correction(world_.clocks()[r], stamp, world_.queue().now());
      });
    }
    RoundSummary summary;
    summary.opened = t;
    summary.tts = tts(rec);
    summary.converged_nodes = rec.converged_at.size();
    summary.feasible = res.feasible;
    world_.record_round(summary);
    schedule_round(k + 1);
  }

  World world_;
  std::vector<NodeId> masters_;
};

}  // namespace

LegResult run_broadcast_leg(const Scenario& scenario, const NetworkSetup& setup) {
  BroadcastLeg leg(scenario, setup);
  return leg.run();
}

}  // namespace pcosync
