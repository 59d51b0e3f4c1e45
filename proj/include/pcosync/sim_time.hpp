#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>

namespace pcosync {

/// Simulation time stored as integer nanoseconds.
///
/// Integer storage keeps event ordering exact and runs reproducible; a 16-bit
/// pulse at 4 Mb/s (4 us) is 4000 ticks.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime from_ns(std::int64_t ns) { return SimTime(ns); }
  static SimTime from_seconds(double s) { return SimTime(std::llround(s * 1e9)); }
  static constexpr SimTime zero() { return SimTime(0); }
  static constexpr SimTime min() { return SimTime(std::numeric_limits<std::int64_t>::min() / 2); }
  static constexpr SimTime max() { return SimTime(std::numeric_limits<std::int64_t>::max() / 2); }

  constexpr std::int64_t ns() const { return ns_; }
  constexpr double seconds() const { return static_cast<double>(ns_) * 1e-9; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime other) const { return SimTime(ns_ + other.ns_); }
  constexpr SimTime operator-(SimTime other) const { return SimTime(ns_ - other.ns_); }
  constexpr SimTime& operator+=(SimTime other) {
    ns_ += other.ns_;
    return *this;
  }

 private:
  constexpr explicit SimTime(std::int64_t ns) : ns_(ns) {}
  std::int64_t ns_ = 0;
};

}  // namespace pcosync
