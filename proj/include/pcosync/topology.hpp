#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pcosync/rng.hpp"

namespace pcosync {

using NodeId = std::size_t;

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

double distance(const Position& a, const Position& b);

/// Brownian motion plus a centroid-directed drift and short-range repulsion.
/// A negative k_attract makes the population spread outwards.
struct MobilityParams {
  bool enabled = false;
  double sigma = 1.0;         // m / sqrt(s)
  double k_attract = -0.1;    // m/s along the unit vector toward the centroid
  double k_repel = 5.0;       // m^3/s, inverse-square repulsion
  double r0 = 10.0;           // repulsion range, m
  double step_dt = 1.0;       // s
  void validate() const;
};

/// n i.i.d. uniform points in [0, side]^2.
std::vector<Position> place_uniform(std::size_t n, double side_m, RngStream& rng);

struct Neighbor {
  NodeId id = 0;
  double distance_m = 0.0;
};

/// Exact Euclidean nearest neighbour of node i; ties go to the lowest id.
Neighbor nearest_neighbor(NodeId i, std::span<const Position> positions);

/// Nodes per square metre of convex-hull area. A degenerate (collinear) hull
/// falls back to the bounding-box area.
double density(std::span<const Position> positions);

/// Signed convex-hull area helper, exposed for tests.
double convex_hull_area(std::span<const Position> positions);

std::vector<Position> step_mobility(std::span<const Position> positions,
                                    const MobilityParams& params, RngStream& rng, double dt);

}  // namespace pcosync
