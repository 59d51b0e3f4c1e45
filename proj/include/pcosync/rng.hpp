#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace pcosync {

/// Purpose label that partitions randomness so that, e.g., mobility draws are
/// unaffected by how many protocol draws a leg makes.
enum class StreamId : std::uint64_t {
  placement = 1,
  drift_sign = 2,
  mobility = 3,
  protocol = 4,
};

/// Seeded random stream. The engine is mt19937_64 and the real-valued draws
/// are computed here rather than through <random> distributions, whose output
/// is implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamId id);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller).
  double normal();
  /// +1 or -1 with equal probability.
  int sign() { return (next_u64() >> 63) != 0 ? 1 : -1; }
  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pcosync
