#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pcosync/sim_time.hpp"

namespace pcosync {

enum class EventKind {
  pulse_start,
  pulse_end,
  rx_complete,
  self_fire,
  master_tick,
  round_open,
  window_open,
  window_close,
  broadcast,
  mobility_step,
  metric_sample,
};

/// Thrown when an event is scheduled before the current simulation time.
class CausalityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Event {
  SimTime fire_at;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::metric_sample;
  std::function<void()> action;
};

/// Discrete-event scheduler. Events fire in (fire_at, seq) order; seq is the
/// creation ordinal, so simultaneous events run in the order they were
/// scheduled.
class EventQueue {
 public:
  void schedule(SimTime at, EventKind kind, std::function<void()> action);

  /// Processes every event with fire_at <= t_end, then advances the clock to
  /// t_end. Handlers may schedule further events.
  std::size_t run_until(SimTime t_end);

  SimTime now() const { return now_; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  static bool later(const Event& a, const Event& b) {
    if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
    return a.seq > b.seq;
  }

  std::vector<Event> heap_;
  SimTime now_ = SimTime::zero();
  std::uint64_t next_seq_ = 0;
};

}  // namespace pcosync
