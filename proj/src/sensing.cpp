#include "colex/sensing.hpp"

#include "colex/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace colex {

namespace {

std::string describe(const Eigen::Vector2d& p) {
  return "(" + std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")";
}

}  // namespace

Observation simulate_lidar(const OccupancyGrid& truth, const Eigen::Vector2d& pose,
                           const LidarSensor& sensor) {
  if (!(sensor.range > 0.0) || sensor.beam_count < 4)
    throw std::invalid_argument("lidar needs range > 0 and at least 4 beams");
  const std::optional<Cell> origin_cell = truth.world_to_cell(pose);
  if (!origin_cell) throw InvalidPoseError("lidar pose " + describe(pose) + " is outside the grid");
  if (truth.at(*origin_cell) != CellState::Free)
    throw InvalidPoseError("lidar pose " + describe(pose) + " is not on a free cell");

  Observation obs;
  std::vector<char> seen(truth.size(), 0);
  auto report = [&](CellIndex i, CellState s) {
    if (seen[i]) return;
    seen[i] = 1;
    obs.cells.push_back({i, s});
  };

  const double res = truth.resolution();
  const Eigen::Vector2d rel = (pose - truth.origin()) / res;
  const double inf = std::numeric_limits<double>::infinity();
  for (int beam = 0; beam < sensor.beam_count; ++beam) {
    const double angle = 2.0 * std::numbers::pi * beam / sensor.beam_count;
    const double dx = std::cos(angle), dy = std::sin(angle);
    int cx = origin_cell->x, cy = origin_cell->y;
    const int step_x = dx > 0 ? 1 : -1;
    const int step_y = dy > 0 ? 1 : -1;
    // Ray parameter in meters at which the next x / y cell boundary is crossed.
    const double delta_x = std::abs(dx) > 1e-12 ? res / std::abs(dx) : inf;
    const double delta_y = std::abs(dy) > 1e-12 ? res / std::abs(dy) : inf;
    double next_x = std::abs(dx) > 1e-12
                        ? ((dx > 0 ? (cx + 1 - rel.x()) : (rel.x() - cx)) * res) / std::abs(dx)
                        : inf;
    double next_y = std::abs(dy) > 1e-12
                        ? ((dy > 0 ? (cy + 1 - rel.y()) : (rel.y() - cy)) * res) / std::abs(dy)
                        : inf;
    while (true) {
      const CellIndex i = truth.index(cx, cy);
      if (truth[i] == CellState::Occupied) {
        report(i, CellState::Occupied);
        break;
      }
      report(i, CellState::Free);
      double entry;
      if (next_x < next_y) {
        entry = next_x;
        cx += step_x;
        next_x += delta_x;
      } else {
        entry = next_y;
        cy += step_y;
        next_y += delta_y;
      }
      if (entry > sensor.range || !truth.in_bounds(cx, cy)) break;
    }
  }
  return obs;
}

Observation simulate_camera(const OccupancyGrid& truth, const Eigen::Vector2d& pose,
                            const CameraFootprint& footprint) {
  if (!(footprint.side_x > 0.0) || !(footprint.side_y > 0.0))
    throw std::invalid_argument("camera footprint sides must be positive");
  Observation obs;
  for_each_footprint_cell(truth, pose, footprint, [&](CellIndex i) { obs.cells.push_back({i, truth[i]}); });
  return obs;
}

std::vector<CellIndex> integrate(OccupancyGrid& belief, const Observation& obs) {
  for (const ObservedCell& o : obs.cells) {
    if (o.cell < 0 || o.cell >= belief.size()) throw std::out_of_range("observed cell outside belief grid");
    if (o.state == CellState::Unknown) throw std::invalid_argument("observation reports an Unknown state");
    const CellState current = belief[o.cell];
    if (current != CellState::Unknown && current != o.state) {
      const Cell c = belief.cell(o.cell);
      throw InconsistencyError("cell (" + std::to_string(c.x) + ", " + std::to_string(c.y) +
                               ") observed in conflict with its known state");
    }
  }
  std::vector<CellIndex> changed;
  for (const ObservedCell& o : obs.cells) {
    if (belief[o.cell] != o.state) {
      belief.set(o.cell, o.state);
      changed.push_back(o.cell);
    }
  }
  return changed;
}

Integrated integrate(const OccupancyGrid& belief, const Observation& obs) {
  Integrated out{belief, {}};
  out.changed = integrate(out.belief, obs);
  return out;
}

}  // namespace colex
