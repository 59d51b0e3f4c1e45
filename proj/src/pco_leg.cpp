#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "pcosync/oscillator.hpp"
#include "pcosync/power_control.hpp"
#include "pcosync/simulation.hpp"

namespace pcosync {

namespace {

// Links weaker than sensitivity by more than this are ignored entirely, even
// as interferers.
constexpr double kInterferenceMargin_dB = 20.0;

struct Arrival {
  std::uint64_t id = 0;
  NodeId from = 0;
  SimTime start;
  SimTime end;
  double rx_dBm = 0.0;
};

struct Link {
  NodeId to = 0;
  double rx_dBm = 0.0;
  SimTime delay;
};

struct PcoNode {
  bool master = false;
  OscillatorState osc;
  SimTime x_local;  // local time at which osc.x is current
  double tx_power_dBm = 0.0;
  bool has_power = false;
  bool listening = false;
  SimTime listen_since;
  std::uint64_t generation = 0;  // bumps invalidate pending self-fire / ticks
  SimTime window_end_local;
  std::optional<SimTime> converged_at;
  std::deque<Arrival> arrivals;
  std::deque<std::pair<SimTime, SimTime>> tx_busy;
  std::vector<Link> links;
  std::uint64_t links_version = ~0ULL;
  double links_power = NAN;
};

struct RoundAccum {
  SimTime opened = SimTime::max();
  std::vector<SimTime> converged_at;
  std::size_t open_windows = 0;
  std::size_t participants = 0;
};

class PcoLeg {
 public:
  PcoLeg(const Scenario& scenario, const NetworkSetup& setup)
      : world_(scenario, setup),
        params_(scenario.pco),
        radio_(scenario.radio),
        protocol_rng_(scenario.seed, StreamId::protocol),
        nodes_(setup.positions.size()),
        airtime_(radio_.airtime_s(params_.pulse_bits)),
        airtime_t_(SimTime::from_seconds(airtime_)),
        td_ns_(std::llround(params_.t_d * 1e9)) {
    for (NodeId m : setup.masters) {
      nodes_[m].master = true;
      // GPS time from the start.
      apply_correction(world_.clocks()[m], 0.0, SimTime::zero());
    }
    world_.set_pre_sample_hook([this](SimTime t) {
      for (NodeId i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].master) apply_correction(world_.clocks()[i], t.seconds(), t);
      }
    });
  }

  LegResult run() {
    for (NodeId i = 0; i < nodes_.size(); ++i) schedule_round_open(i, 0);
    return world_.run(Protocol::pco);
  }

 private:
  VirtualClock& clock(NodeId i) { return world_.clocks()[i]; }
  SimTime now() const { return const_cast<World&>(world_).queue().now(); }

  SimTime local_now(NodeId i) {
    return SimTime::from_seconds(local_time(clock(i), now()));
  }

  SimTime true_at_local(NodeId i, SimTime local) {
    const SimTime t = SimTime::from_seconds(true_time_of(clock(i), local.seconds()));
    return std::max(t, now());
  }

  void schedule_round_open(NodeId i, std::uint64_t k) {
    const double nominal = static_cast<double>(k) * params_.resync_period;
    if (nominal >= world_.scenario().duration_s) return;
    const SimTime local = SimTime::from_seconds(nominal);
    const SimTime at = nodes_[i].master ? std::max(local, now()) : true_at_local(i, local);
    world_.queue().schedule(at, EventKind::round_open, [this, i, k] { round_open(i, k); });
  }

  void round_open(NodeId i, std::uint64_t k) {
    PcoNode& node = nodes_[i];
    const SimTime t = now();
    if (node.master) apply_correction(clock(i), t.seconds(), t);
    world_.ledger().power_on(i);

    double pc_duration = 0.0;
    const bool need_pc = world_.size() >= 2 && (!node.has_power || world_.scenario().mobility.enabled);
    if (need_pc) {
      std::optional<double> start;
      if (node.has_power) start = node.tx_power_dBm;
      const auto res = power_control_escalate(i, world_.positions(), radio_, params_.pulse_bits,
                                              &world_.ledger(), start);
      node.tx_power_dBm = res.tx_power_dBm;
      node.has_power = true;
      pc_duration = res.duration_s;
    }

    RoundAccum& round = rounds_[k];
    round.opened = std::min(round.opened, t);
    ++round.open_windows;
    ++round.participants;

    world_.queue().schedule(t + SimTime::from_seconds(pc_duration), EventKind::window_open,
                            [this, i, k] { window_open(i, k); });
  }

  void window_open(NodeId i, std::uint64_t k) {
    PcoNode& node = nodes_[i];
    const SimTime t = now();
    node.listening = true;
    node.listen_since = t;
    node.converged_at.reset();
    node.arrivals.clear();
    node.tx_busy.clear();
    node.osc = OscillatorState{};
    node.osc.role = node.master ? Role::master : Role::slave;
    const SimTime local = local_now(i);
    node.x_local = local;
    node.window_end_local = local + SimTime::from_seconds(params_.window);
    ++node.generation;

    const SimTime close_at = node.master ? t + SimTime::from_seconds(params_.window)
                                         : true_at_local(i, node.window_end_local);
    world_.queue().schedule(close_at, EventKind::window_close, [this, i, k] { window_close(i, k); });

    if (node.master) {
      // Ticks sit on the local T_d grid.
      const std::int64_t first = (local.ns() + td_ns_ - 1) / td_ns_ * td_ns_;
      schedule_master_tick(i, SimTime::from_ns(first));
    } else {
      node.osc.x = protocol_rng_.uniform(0.0, params_.x_th);
      schedule_self_fire(i);
    }
  }

  void schedule_master_tick(NodeId i, SimTime local) {
    PcoNode& node = nodes_[i];
    if (local >= node.window_end_local) return;
    const SimTime at = true_at_local(i, local);
    const std::uint64_t gen = node.generation;
    world_.queue().schedule(at, EventKind::master_tick, [this, i, gen, local] {
      PcoNode& n = nodes_[i];
      if (gen != n.generation || !n.listening) return;
      auto res = master_tick(n.osc, params_, local, spec(i));
      n.osc = res.state;
      after_emission(i);
      schedule_master_tick(i, local + SimTime::from_ns(td_ns_));
    });
  }

  PulseSpec spec(NodeId i) const { return {i, airtime_, nodes_[i].tx_power_dBm}; }

  void advance(NodeId i) {
    PcoNode& node = nodes_[i];
    const SimTime local = local_now(i);
    if (local > node.x_local) {
      node.osc = integrate(node.osc, params_, (local - node.x_local).seconds());
    }
    node.x_local = std::max(local, node.x_local);
  }

  void schedule_self_fire(NodeId i) {
    PcoNode& node = nodes_[i];
    const std::uint64_t gen = ++node.generation;
    const auto dt = params_.time_to_threshold(node.osc.x);
    if (!dt) return;
    const SimTime local_fire = node.x_local + SimTime::from_seconds(*dt);
    if (local_fire >= node.window_end_local) return;
    world_.queue().schedule(true_at_local(i, local_fire), EventKind::self_fire, [this, i, gen] {
      PcoNode& n = nodes_[i];
      if (gen != n.generation || !n.listening) return;
      advance(i);
      do_fire(i);
    });
  }

  void do_fire(NodeId i) {
    PcoNode& node = nodes_[i];
    node.osc.x = params_.x_th;
    auto res = fire(node.osc, params_, node.x_local, spec(i));
    node.osc = res.state;
    after_emission(i);
    schedule_self_fire(i);
  }

  void after_emission(NodeId i) {
    PcoNode& node = nodes_[i];
    if (detect_convergence(node.osc, params_) && !node.converged_at) node.converged_at = now();
    transmit(i);
  }

  const std::vector<double>& pathloss_matrix() {
    if (pl_version_ != world_.positions_version() || pl_.empty()) {
      const auto& pos = world_.positions();
      const std::size_t n = pos.size();
      pl_.assign(n * n, 0.0);
      dist_.assign(n * n, 0.0);
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          const double d = distance(pos[a], pos[b]);
          const double l = link_pathloss_dB(radio_, d);
          pl_[a * n + b] = pl_[b * n + a] = l;
          dist_[a * n + b] = dist_[b * n + a] = d;
        }
      }
      pl_version_ = world_.positions_version();
    }
    return pl_;
  }

  const std::vector<Link>& links(NodeId i) {
    PcoNode& node = nodes_[i];
    const auto& pl = pathloss_matrix();
    if (node.links_version == pl_version_ && node.links_power == node.tx_power_dBm) return node.links;
    const std::size_t n = nodes_.size();
    node.links.clear();
    for (NodeId r = 0; r < n; ++r) {
      if (r == i) continue;
      const double rx = node.tx_power_dBm - pl[i * n + r];
      if (rx < radio_.sensitivity_dBm - kInterferenceMargin_dB) continue;
      node.links.push_back({r, rx, SimTime::from_seconds(dist_[i * n + r] / kSpeedOfLight)});
    }
    node.links_version = pl_version_;
    node.links_power = node.tx_power_dBm;
    return node.links;
  }

  void transmit(NodeId i) {
    PcoNode& node = nodes_[i];
    const SimTime t = now();
    world_.ledger().charge_tx(i, params_.pulse_bits, dbm_to_watts(node.tx_power_dBm));
    node.tx_busy.emplace_back(t, t + airtime_t_);
    for (const Link& link : links(i)) {
      Arrival a{next_arrival_id_++, i, t + link.delay, t + link.delay + airtime_t_, link.rx_dBm};
      nodes_[link.to].arrivals.push_back(a);
      const NodeId r = link.to;
      world_.queue().schedule(a.end, EventKind::rx_complete, [this, r, a] { rx_complete(r, a); });
    }
  }

  void prune(PcoNode& node) {
    const SimTime horizon = now() - SimTime::from_ns(1'000'000);
    while (!node.arrivals.empty() && node.arrivals.front().end < horizon) node.arrivals.pop_front();
    while (!node.tx_busy.empty() && node.tx_busy.front().second < horizon) node.tx_busy.pop_front();
  }

  void rx_complete(NodeId r, const Arrival& a) {
    PcoNode& node = nodes_[r];
    prune(node);
    if (!node.listening || node.listen_since > a.start) return;
    if (a.rx_dBm < radio_.sensitivity_dBm) return;
    for (const auto& [s, e] : node.tx_busy) {
      if (s < a.end && e > a.start) return;  // half duplex
    }
    interferers_.clear();
    for (const Arrival& b : node.arrivals) {
      if (b.id != a.id && b.start < a.end && b.end > a.start) interferers_.push_back(b.rx_dBm);
    }
    if (!can_decode(a.rx_dBm, radio_.sensitivity_dBm, interferers_, radio_.capture_threshold_dB,
                    radio_.strict_collisions)) {
      return;
    }
    if (node.master) return;
    advance(r);
    const auto out = on_pulse_decoded(node.osc, params_, node.x_local);
    const bool changed = out.state.x != node.osc.x;
    node.osc = out.state;
    if (out.fire) {
      do_fire(r);
    } else if (changed) {
      schedule_self_fire(r);
    }
  }

  void window_close(NodeId i, std::uint64_t k) {
    PcoNode& node = nodes_[i];
    const SimTime t = now();
    node.listening = false;
    ++node.generation;
    world_.ledger().charge_rx(i, params_.window);
    world_.ledger().power_off(i);
    world_.add_window_time(params_.window);
    if (node.master) {
      apply_correction(clock(i), t.seconds(), t);
    } else {
      close_window(node.osc, params_, clock(i), airtime_);
    }

    RoundAccum& round = rounds_[k];
    if (node.converged_at) round.converged_at.push_back(*node.converged_at);
    if (--round.open_windows == 0) finalize_round(k);
    schedule_round_open(i, k + 1);
  }

  void finalize_round(std::uint64_t k) {
    RoundAccum& acc = rounds_[k];
    RoundRecord rec{acc.opened, params_.window, acc.converged_at};
    RoundSummary summary;
    summary.opened = acc.opened;
    summary.tts = tts(rec);
    summary.converged_nodes = acc.converged_at.size();
    world_.record_round(summary);
    rounds_.erase(k);
  }

  World world_;
  PcoParams params_;
  RadioConfig radio_;
  RngStream protocol_rng_;
  std::vector<PcoNode> nodes_;
  double airtime_;
  SimTime airtime_t_;
  std::int64_t td_ns_;
  std::map<std::uint64_t, RoundAccum> rounds_;
  std::vector<double> pl_;
  std::vector<double> dist_;
  std::uint64_t pl_version_ = ~0ULL;
  std::uint64_t next_arrival_id_ = 0;
  std::vector<double> interferers_;
};

}  // namespace

LegResult run_pco_leg(const Scenario& scenario, const NetworkSetup& setup) {
  PcoLeg leg(scenario, setup);
  return leg.run();
}

}  // namespace pcosync
