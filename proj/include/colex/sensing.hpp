#pragma once

#include "colex/grid.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <vector>

namespace colex {

// 360 degree planar scanner carried by the ground vehicle.
struct LidarSensor {
  double range = 6.0;
  int beam_count = 720;
};

// Axis-aligned ground rectangle seen by the downward camera. The default
// side gives a 4.6 m^2 footprint.
struct CameraFootprint {
  double side_x = 2.144;
  double side_y = 2.144;
};

struct ObservedCell {
  CellIndex cell;
  CellState state;  // Free or Occupied, never Unknown
  friend bool operator==(const ObservedCell&, const ObservedCell&) = default;
};

// Unique cells, in discovery order.
struct Observation {
  std::vector<ObservedCell> cells;
};

// Casts `beam_count` evenly spaced rays from `pose` through the truth grid.
// Traversed cells are reported Free up to the first Occupied cell, which is
// reported Occupied; nothing past the hit or past `range` is reported.
// Throws InvalidPoseError unless the pose lies on a Free truth cell.
Observation simulate_lidar(const OccupancyGrid& truth, const Eigen::Vector2d& pose,
                           const LidarSensor& sensor);

// Calls f(CellIndex) for each grid cell whose center lies in the footprint
// rectangle centred on `pose` (boundary inclusive).
template <typename F>
void for_each_footprint_cell(const OccupancyGrid& grid, const Eigen::Vector2d& pose,
                             const CameraFootprint& footprint, F&& f);

// Reports every cell whose center lies in the footprint rectangle centred on
// `pose`, with its true state. No occlusion; cells off the grid are clipped.
Observation simulate_camera(const OccupancyGrid& truth, const Eigen::Vector2d& pose,
                            const CameraFootprint& footprint);

// Writes `obs` into `belief` and returns the cells whose state changed.
// A known cell observed with a different known state throws
// InconsistencyError and leaves `belief` untouched.
std::vector<CellIndex> integrate(OccupancyGrid& belief, const Observation& obs);

struct Integrated {
  OccupancyGrid belief;
  std::vector<CellIndex> changed;
};
Integrated integrate(const OccupancyGrid& belief, const Observation& obs);

template <typename F>
void for_each_footprint_cell(const OccupancyGrid& grid, const Eigen::Vector2d& pose,
                             const CameraFootprint& footprint, F&& f) {
  const double res = grid.resolution();
  const double hx = 0.5 * footprint.side_x, hy = 0.5 * footprint.side_y;
  const Eigen::Vector2d rel = (pose - grid.origin()) / res;
  // Candidate window one cell wider than the rectangle; the exact center
  // test below decides membership.
  const int x0 = std::max(0, static_cast<int>(std::floor(rel.x() - hx / res)) - 1);
  const int y0 = std::max(0, static_cast<int>(std::floor(rel.y() - hy / res)) - 1);
  const int x1 = std::min(grid.width() - 1, static_cast<int>(std::ceil(rel.x() + hx / res)) + 1);
  const int y1 = std::min(grid.height() - 1, static_cast<int>(std::ceil(rel.y() + hy / res)) + 1);
  for (int y = y0; y <= y1; ++y) {
    const double cy = grid.origin().y() + (y + 0.5) * res;
    if (std::abs(cy - pose.y()) > hy) continue;
    for (int x = x0; x <= x1; ++x) {
      const double cx = grid.origin().x() + (x + 0.5) * res;
      if (std::abs(cx - pose.x()) <= hx) f(grid.index(x, y));
    }
  }
}

}  // namespace colex
