#pragma once

#include <optional>

#include "pcosync/energy.hpp"
#include "pcosync/sim_time.hpp"
#include "pcosync/virtual_clock.hpp"

namespace pcosync {

/// Leaky integrate-and-fire oscillator parameters.
///
/// State obeys dx/dt = s0 - gamma * x between pulses; each decoded neighbour
/// pulse adds epsilon; reaching x_th fires a pulse and resets x to 0.
struct PcoParams {
  std::optional<double> s0;  // threshold units / s; unset derives it from t_d
  double gamma = 1e4;
  double x_th = 3.0;
  double epsilon = 1.0;
  double t_d = 100e-6;
  double refractory = 10e-6;
  double window = 5e-3;
  double resync_period = 500.0;
  double phase_tol = 0.02;
  unsigned k_confirm = 3;
  double pulse_bits = 16.0;

  /// s0 if set, else the drive that makes the free-running period t_d:
  /// x_th / t_d without leak, gamma * x_th / (1 - exp(-gamma * t_d)) with it.
  double drive() const;
  /// Local time for x to climb from `x` to x_th, or nullopt if it never does.
  std::optional<double> time_to_threshold(double x) const;
  void validate() const;
};

enum class Role { master, slave };

struct OscillatorState {
  double x = 0.0;
  std::optional<SimTime> last_pulse;   // t_{p-1}
  std::optional<double> last_gap;      // t_p - t_{p-1}, seconds
  std::optional<double> prev_gap;      // the gap before last_gap
  double phi = 0.0;
  SimTime refractory_until = SimTime::min();
  Role role = Role::slave;
  unsigned confirm_count = 0;
  bool converged = false;
};

struct Pulse {
  NodeId origin = 0;
  SimTime t_start;
  double duration = 0.0;
  double tx_power_dBm = 0.0;
};

/// Per-node emission template used when a pulse is built.
struct PulseSpec {
  NodeId origin = 0;
  double duration = 0.0;
  double tx_power_dBm = 0.0;
};

/// Advances x over dt seconds along the closed-form solution, clamped to
/// [0, x_th]. Masters are returned unchanged.
OscillatorState integrate(OscillatorState state, const PcoParams& params, double dt);

struct DecodeOutcome {
  OscillatorState state;
  bool fire = false;
};

/// Count-based coupling: one decoded pulse adds epsilon unless the node is a
/// master or still refractory. Reaching x_th requests a fire at t.
DecodeOutcome on_pulse_decoded(OscillatorState state, const PcoParams& params, SimTime t);

struct FireResult {
  OscillatorState state;
  Pulse pulse;
};

/// Emits a pulse at t, resets x, opens the refractory period and records
/// phi = (t - t_{p-1}) / t_d. Gap bookkeeping feeds detect_convergence.
FireResult fire(OscillatorState state, const PcoParams& params, SimTime t, const PulseSpec& spec);

/// Master emission: same bookkeeping as fire(), no dependence on x.
FireResult master_tick(OscillatorState state, const PcoParams& params, SimTime t,
                       const PulseSpec& spec);

/// True once k_confirm consecutive firings each had |gap - previous gap| <=
/// phase_tol * t_d; latches `converged`. Masters define the train and count as
/// converged after their first complete gap.
bool detect_convergence(OscillatorState& state, const PcoParams& params);

struct WindowCloseResult {
  bool corrected = false;
  double correction_s = 0.0;  // change of the local reading at the last pulse
};

/// End-of-window clock alignment for a slave.
///
/// A converged node snaps its last pulse onto the T_d grid of the master
/// epoch. Its firing trails the pulse that entrained it by one decode
/// (`airtime_s`), so the grid point is taken at (last_pulse - airtime) and the
/// airtime added back. Non-converged nodes are left untouched.
WindowCloseResult close_window(const OscillatorState& state, const PcoParams& params,
                               VirtualClock& clock, double airtime_s);

}  // namespace pcosync
