#pragma once

#include "pcosync/sim_time.hpp"

namespace pcosync {

/// Drifting node-local clock: local = offset + (1 + drift_rate) * (t - epoch).
///
/// Corrections rewrite offset and epoch only; the frequency error (drift_rate)
/// is never estimated or removed.
struct VirtualClock {
  double drift_rate = 0.0;  // s local per s true, minus one
  double offset = 0.0;      // local reading at epoch, seconds
  SimTime epoch = SimTime::zero();
};

double local_time(const VirtualClock& clock, SimTime t_true);

/// local_time(clock, t) - t, evaluated without the large-value cancellation of
/// subtracting two absolute readings.
double clock_error(const VirtualClock& clock, SimTime t_true);

/// True time at which the clock reads `local` (inverse of local_time).
double true_time_of(const VirtualClock& clock, double local);

/// Sets the clock so that local_time(clock, t_true) == reference.
void apply_correction(VirtualClock& clock, double reference, SimTime t_true);

}  // namespace pcosync
