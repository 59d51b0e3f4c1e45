#include "pcosync/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace pcosync {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void MobilityParams::validate() const {
  if (!(sigma >= 0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma: must be >= 0");
  if (!(step_dt > 0) || !std::isfinite(step_dt)) throw std::invalid_argument("step_dt: must be > 0");
  if (!std::isfinite(k_attract)) throw std::invalid_argument("k_attract: must be finite");
  if (!(k_repel >= 0) || !std::isfinite(k_repel)) throw std::invalid_argument("k_repel: must be >= 0");
  if (!(r0 > 0) || !std::isfinite(r0)) throw std::invalid_argument("r0: must be > 0");
}

std::vector<Position> place_uniform(std::size_t n, double side_m, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("place_uniform: n must be >= 1");
  if (!(side_m > 0)) throw std::invalid_argument("place_uniform: side must be > 0");
  std::vector<Position> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(0.0, side_m);
    const double y = rng.uniform(0.0, side_m);
    out.push_back({x, y});
  }
  return out;
}

Neighbor nearest_neighbor(NodeId i, std::span<const Position> positions) {
  if (positions.size() < 2) throw std::invalid_argument("nearest_neighbor: need at least 2 nodes");
  if (i >= positions.size()) throw std::out_of_range("nearest_neighbor: node id out of range");
  Neighbor best{0, std::numeric_limits<double>::infinity()};
  for (NodeId j = 0; j < positions.size(); ++j) {
    if (j == i) continue;
    const double d = distance(positions[i], positions[j]);
    if (d < best.distance_m) best = {j, d};
  }
  return best;
}

double convex_hull_area(std::span<const Position> positions) {
  if (positions.size() < 3) return 0.0;
  std::vector<Position> pts(positions.begin(), positions.end());
  std::sort(pts.begin(), pts.end(),
            [](const Position& a, const Position& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  auto cross = [](const Position& o, const Position& a, const Position& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  // Andrew's monotone chain.
  std::vector<Position> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);
  double area2 = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    area2 += a.x * b.y - b.x * a.y;
  }
  return std::abs(area2) / 2.0;
}

double density(std::span<const Position> positions) {
  if (positions.empty()) throw std::invalid_argument("density: no nodes");
  double area = convex_hull_area(positions);
  if (!(area > 0)) {
    auto [xmin, xmax] = std::minmax_element(positions.begin(), positions.end(),
                                            [](auto& a, auto& b) { return a.x < b.x; });
    auto [ymin, ymax] = std::minmax_element(positions.begin(), positions.end(),
                                            [](auto& a, auto& b) { return a.y < b.y; });
    area = (xmax->x - xmin->x) * (ymax->y - ymin->y);
  }
  if (!(area > 0)) throw std::invalid_argument("density: positions span zero area");
  return static_cast<double>(positions.size()) / area;
}

namespace {

std::int64_t cell_key(std::int64_t cx, std::int64_t cy) { return (cx << 32) ^ (cy & 0xffffffff); }

}  // namespace

std::vector<Position> step_mobility(std::span<const Position> positions,
                                    const MobilityParams& params, RngStream& rng, double dt) {
  const std::size_t n = positions.size();
  std::vector<Position> next(positions.begin(), positions.end());
  if (n == 0) return next;

  Position centroid;
  for (const auto& p : positions) {
    centroid.x += p.x;
    centroid.y += p.y;
  }
  centroid.x /= static_cast<double>(n);
  centroid.y /= static_cast<double>(n);

  std::unordered_map<std::int64_t, std::vector<NodeId>> cells;
  if (params.k_repel > 0) {
    for (NodeId i = 0; i < n; ++i) {
      const auto cx = static_cast<std::int64_t>(std::floor(positions[i].x / params.r0));
      const auto cy = static_cast<std::int64_t>(std::floor(positions[i].y / params.r0));
      cells[cell_key(cx, cy)].push_back(i);
    }
  }
  const double d_min = 0.05 * params.r0;
  const double noise_scale = params.sigma * std::sqrt(dt);

  for (NodeId i = 0; i < n; ++i) {
    const Position& p = positions[i];
    double vx = 0.0;
    double vy = 0.0;

    const double cdx = centroid.x - p.x;
    const double cdy = centroid.y - p.y;
    const double cd = std::hypot(cdx, cdy);
    if (cd > 0) {
      vx += params.k_attract * cdx / cd;
      vy += params.k_attract * cdy / cd;
    }

    if (params.k_repel > 0) {
      const auto cx = static_cast<std::int64_t>(std::floor(p.x / params.r0));
      const auto cy = static_cast<std::int64_t>(std::floor(p.y / params.r0));
      for (std::int64_t ox = -1; ox <= 1; ++ox) {
        for (std::int64_t oy = -1; oy <= 1; ++oy) {
          auto it = cells.find(cell_key(cx + ox, cy + oy));
          if (it == cells.end()) continue;
          for (NodeId j : it->second) {
            if (j == i) continue;
            double dx = p.x - positions[j].x;
            double dy = p.y - positions[j].y;
            double d = std::hypot(dx, dy);
            if (d >= params.r0) continue;
            if (d == 0.0) {
              // Coincident: split along x, lower id moving to -x.
              dx = i < j ? -1.0 : 1.0;
              dy = 0.0;
            } else {
              dx /= d;
              dy /= d;
            }
            const double de = std::max(d, d_min);
            const double mag = params.k_repel / (de * de);
            vx += mag * dx;
            vy += mag * dy;
          }
        }
      }
    }

    const double nx = rng.normal();
    const double ny = rng.normal();
    next[i].x = p.x + noise_scale * nx + dt * vx;
    next[i].y = p.y + noise_scale * ny + dt * vy;
  }
  return next;
}

}  // namespace pcosync
