#include "pcosync/virtual_clock.hpp"

#include <stdexcept>

namespace pcosync {

namespace {

double elapsed_since_epoch(const VirtualClock& clock, SimTime t_true) {
  if (t_true < clock.epoch) throw std::logic_error("clock read before its last correction");
  return (t_true - clock.epoch).seconds();
}

}  // namespace

double local_time(const VirtualClock& clock, SimTime t_true) {
  return clock.offset + (1.0 + clock.drift_rate) * elapsed_since_epoch(clock, t_true);
}

double clock_error(const VirtualClock& clock, SimTime t_true) {
  const double dt = elapsed_since_epoch(clock, t_true);
  return (clock.offset - clock.epoch.seconds()) + clock.drift_rate * dt;
}

double true_time_of(const VirtualClock& clock, double local) {
  return clock.epoch.seconds() + (local - clock.offset) / (1.0 + clock.drift_rate);
}

void apply_correction(VirtualClock& clock, double reference, SimTime t_true) {
  if (t_true < clock.epoch) throw std::logic_error("correction before the clock's last epoch");
  clock.offset = reference;
  clock.epoch = t_true;
}

}  // namespace pcosync
