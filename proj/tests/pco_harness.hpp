#pragma once

// Small stand-alone drivers for oscillator dynamics, independent of the
// network engine: a master/slave pair and an all-to-all slave pair.

#include <algorithm>
#include <deque>
#include <optional>
#include <vector>

#include "pcosync/oscillator.hpp"
#include "pcosync/virtual_clock.hpp"

namespace harness {

using namespace pcosync;

struct EntrainmentTrace {
  std::vector<SimTime> fires_local;  // slave pulse times on its own clock
  std::vector<SimTime> fires_true;
  std::vector<SimTime> master_true;  // master pulse times
  std::optional<std::size_t> converged_after;  // slave pulse count at detection
  OscillatorState state;
};

/// Master ticking on the true-time T_d grid, one slave with its own clock,
/// every master pulse decoded `delay_s` after emission.
inline EntrainmentTrace entrain(const PcoParams& p, double x0, const VirtualClock& clock,
                                SimTime open, double window_s, double delay_s) {
  EntrainmentTrace tr;
  auto local = [&](SimTime t) { return SimTime::from_seconds(local_time(clock, t)); };
  auto true_of = [&](SimTime l) { return SimTime::from_seconds(true_time_of(clock, l.seconds())); };
  const std::int64_t td = std::llround(p.t_d * 1e9);
  const SimTime end = open + SimTime::from_seconds(window_s);
  const SimTime delay = SimTime::from_seconds(delay_s);

  OscillatorState& s = tr.state;
  s.x = x0;
  SimTime xl = local(open);
  SimTime t = open;
  SimTime next_tick = SimTime::from_ns((open.ns() + td - 1) / td * td);
  std::deque<SimTime> decodes;

  auto advance = [&](SimTime at) {
    const SimTime l = local(at);
    if (l > xl) s = integrate(s, p, (l - xl).seconds());
    xl = std::max(l, xl);
    t = at;
  };
  auto do_fire = [&] {
    s.x = p.x_th;
    s = fire(s, p, xl, {}).state;
    tr.fires_local.push_back(xl);
    tr.fires_true.push_back(t);
    if (detect_convergence(s, p) && !tr.converged_after) tr.converged_after = tr.fires_local.size();
  };

  while (true) {
    SimTime fire_at = SimTime::max();
    if (auto dt = p.time_to_threshold(s.x)) fire_at = std::max(true_of(xl + SimTime::from_seconds(*dt)), t);
    const SimTime dec = decodes.empty() ? SimTime::max() : decodes.front();
    const SimTime ev = std::min({next_tick, dec, fire_at});
    if (ev >= end) break;
    if (ev == next_tick && next_tick <= dec) {
      tr.master_true.push_back(next_tick);
      decodes.push_back(next_tick + delay);
      next_tick += SimTime::from_ns(td);
      continue;
    }
    advance(ev);
    if (dec <= fire_at) {
      decodes.pop_front();
      const auto out = on_pulse_decoded(s, p, xl);
      s = out.state;
      if (out.fire) do_fire();
    } else {
      do_fire();
    }
  }
  return tr;
}

struct PairTrace {
  std::vector<SimTime> fires[2];
  std::optional<std::size_t> coincident_after;  // total pulses until a joint firing
};

/// Two identical slaves coupled all-to-all with zero delay.
inline PairTrace slave_pair(const PcoParams& p, double xa, double xb, std::size_t max_pulses) {
  PairTrace tr;
  OscillatorState s[2];
  s[0].x = xa;
  s[1].x = xb;
  SimTime t = SimTime::zero();
  std::size_t pulses = 0;
  auto emit = [&](int i) {
    s[i].x = p.x_th;
    s[i] = fire(s[i], p, t, {}).state;
    tr.fires[i].push_back(t);
    ++pulses;
  };
  while (pulses < max_pulses) {
    SimTime f[2];
    for (int i = 0; i < 2; ++i) {
      const auto dt = p.time_to_threshold(s[i].x);
      f[i] = dt ? t + SimTime::from_seconds(*dt) : SimTime::max();
    }
    const int first = f[1] < f[0] ? 1 : 0;
    if (f[first] == SimTime::max()) break;
    const double dt = (f[first] - t).seconds();
    for (auto& st : s) st = integrate(st, p, dt);
    t = f[first];
    emit(first);
    const int other = 1 - first;
    const auto out = on_pulse_decoded(s[other], p, t);
    s[other] = out.state;
    if (out.fire) {
      emit(other);
      // The echo lands inside the first node's refractory period.
      s[first] = on_pulse_decoded(s[first], p, t).state;
      if (!tr.coincident_after) tr.coincident_after = pulses;
    }
  }
  return tr;
}

}  // namespace harness
