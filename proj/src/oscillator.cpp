#include "pcosync/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pcosync {

double PcoParams::drive() const {
  if (s0) return *s0;
  if (gamma == 0.0) return x_th / t_d;
  return gamma * x_th / (1.0 - std::exp(-gamma * t_d));
}

std::optional<double> PcoParams::time_to_threshold(double x) const {
  if (x >= x_th) return 0.0;
  const double s = drive();
  if (gamma == 0.0) {
    if (s <= 0.0) return std::nullopt;
    return (x_th - x) / s;
  }
  const double x_inf = s / gamma;
  if (x_inf <= x_th) return std::nullopt;
  return std::log((x_inf - x) / (x_inf - x_th)) / gamma;
}

void PcoParams::validate() const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
  };
  require(std::isfinite(x_th) && x_th > 0, "x_th", "must be > 0");
  require(std::isfinite(epsilon) && epsilon > 0, "epsilon", "must be > 0");
  require(!s0 || (std::isfinite(*s0) && *s0 >= 0), "s0", "must be >= 0");
  require(std::isfinite(gamma) && gamma >= 0, "gamma", "must be >= 0");
  require(std::isfinite(refractory) && refractory > 0, "refractory", "must be > 0");
  require(std::isfinite(t_d) && t_d > refractory, "t_d", "must exceed refractory");
  require(std::isfinite(window) && window > t_d, "window", "must exceed t_d");
  require(std::isfinite(resync_period) && resync_period > window, "resync_period",
          "must exceed window");
  require(std::isfinite(phase_tol) && phase_tol >= 0, "phase_tol", "must be >= 0");
  require(k_confirm >= 1, "k_confirm", "must be >= 1");
  require(std::isfinite(pulse_bits) && pulse_bits > 0, "pulse_bits", "must be > 0");
}

OscillatorState integrate(OscillatorState state, const PcoParams& params, double dt) {
  if (dt < 0) throw std::invalid_argument("integrate: dt must be >= 0");
  if (state.role == Role::master) return state;
  const double s = params.drive();
  double x;
  if (params.gamma == 0.0) {
    x = state.x + s * dt;
  } else {
    const double x_inf = s / params.gamma;
    x = x_inf + (state.x - x_inf) * std::exp(-params.gamma * dt);
  }
  state.x = std::clamp(x, 0.0, params.x_th);
  return state;
}

DecodeOutcome on_pulse_decoded(OscillatorState state, const PcoParams& params, SimTime t) {
  if (state.role == Role::master || t < state.refractory_until) return {state, false};
  state.x = std::min(state.x + params.epsilon, params.x_th);
  return {state, state.x >= params.x_th};
}

namespace {

void record_pulse(OscillatorState& state, const PcoParams& params, SimTime t) {
  if (state.last_pulse) {
    const double gap = (t - *state.last_pulse).seconds();
    state.phi = gap / params.t_d;
    state.prev_gap = state.last_gap;
    state.last_gap = gap;
    if (state.prev_gap && std::abs(gap - *state.prev_gap) <= params.phase_tol * params.t_d) {
      ++state.confirm_count;
    } else {
      state.confirm_count = 0;
      if (state.role == Role::slave) state.converged = false;
    }
  }
  state.last_pulse = t;
  state.refractory_until = t + SimTime::from_seconds(params.refractory);
}

}  // namespace

FireResult fire(OscillatorState state, const PcoParams& params, SimTime t, const PulseSpec& spec) {
  record_pulse(state, params, t);
  state.x = 0.0;
  return {state, Pulse{spec.origin, t, spec.duration, spec.tx_power_dBm}};
}

FireResult master_tick(OscillatorState state, const PcoParams& params, SimTime t,
                       const PulseSpec& spec) {
  if (state.role != Role::master) throw std::logic_error("master_tick on a slave");
  record_pulse(state, params, t);
  return {state, Pulse{spec.origin, t, spec.duration, spec.tx_power_dBm}};
}

bool detect_convergence(OscillatorState& state, const PcoParams& params) {
  if (state.role == Role::master) {
    state.converged = state.converged || state.last_gap.has_value();
  } else {
    state.converged = state.confirm_count >= params.k_confirm;
  }
  return state.converged;
}

WindowCloseResult close_window(const OscillatorState& state, const PcoParams& params,
                               VirtualClock& clock, double airtime_s) {
  if (state.role == Role::master || !state.converged || !state.last_pulse) return {};
  const std::int64_t last_ns = state.last_pulse->ns();
  const std::int64_t td_ns = std::llround(params.t_d * 1e9);
  const std::int64_t air_ns = std::llround(airtime_s * 1e9);
  const auto k = std::llround(static_cast<double>(last_ns - air_ns) / static_cast<double>(td_ns));
  const double reference = static_cast<double>(k * td_ns + air_ns) * 1e-9;
  const double local_last = static_cast<double>(last_ns) * 1e-9;
  const SimTime t_true = SimTime::from_seconds(true_time_of(clock, local_last));
  apply_correction(clock, reference, t_true);
  return {true, reference - local_last};
}

}  // namespace pcosync
