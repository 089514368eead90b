#include "colex/ugv_trajectory.hpp"

#include "colex/error.hpp"

#include <algorithm>
#include <cmath>

namespace colex {

namespace {

bool all_free(const OccupancyGrid& g, int x0, int y0, int x1, int y1) {
  if (x0 < 0 || y0 < 0 || x1 >= g.width() || y1 >= g.height()) return false;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (g.at(x, y) != CellState::Free) return false;
  return true;
}

Eigen::AlignedBox2d to_world(const OccupancyGrid& g, const CellBox& b) {
  const double r = g.resolution();
  return {g.origin() + r * Eigen::Vector2d(b.x0, b.y0), g.origin() + r * Eigen::Vector2d(b.x1 + 1, b.y1 + 1)};
}

}  // namespace

CellBox inflate_box(const OccupancyGrid& belief, CellBox box) {
  bool grew = true;
  while (grew) {
    grew = false;
    if (all_free(belief, box.x0 - 1, box.y0, box.x0 - 1, box.y1)) { --box.x0; grew = true; }
    if (all_free(belief, box.x1 + 1, box.y0, box.x1 + 1, box.y1)) { ++box.x1; grew = true; }
    if (all_free(belief, box.x0, box.y0 - 1, box.x1, box.y0 - 1)) { --box.y0; grew = true; }
    if (all_free(belief, box.x0, box.y1 + 1, box.x1, box.y1 + 1)) { ++box.y1; grew = true; }
  }
  return box;
}

Corridor generate_corridor(const OccupancyGrid& belief, const std::vector<CellIndex>& path) {
  if (path.empty()) throw InvalidPathError("corridor needs a non-empty path");
  for (CellIndex i : path) {
    if (i < 0 || i >= belief.size() || belief[i] != CellState::Free) {
      throw InvalidPathError("path cell " + std::to_string(i) + " is not free");
    }
  }
  Corridor corridor;
  corridor.path = path;
  corridor.path_assignment.assign(path.size(), -1);

  const Cell first = belief.cell(path[0]);
  CellBox box = inflate_box(belief, {first.x, first.y, first.x, first.y});
  corridor.cell_boxes.push_back(box);
  std::size_t j = 0;
  while (true) {
    while (j < path.size() && box.contains(belief.cell(path[j]))) corridor.path_assignment[j++] =
        static_cast<int>(corridor.cell_boxes.size()) - 1;
    if (j == path.size()) break;

    const Cell prev = belief.cell(path[j - 1]);
    const Cell next = belief.cell(path[j]);
    CellBox seed{std::min(prev.x, next.x), std::min(prev.y, next.y), std::max(prev.x, next.x),
                 std::max(prev.y, next.y)};
    if (!all_free(belief, seed.x0, seed.y0, seed.x1, seed.y1)) seed = {next.x, next.y, next.x, next.y};
    CellBox grown = inflate_box(belief, seed);
    if (!grown.overlaps(box)) {
      throw CorridorBreakError(j, "no overlapping box across path step " + std::to_string(j));
    }
    box = grown;
    corridor.cell_boxes.push_back(box);
  }
  for (const CellBox& b : corridor.cell_boxes) corridor.boxes.push_back(to_world(belief, b));
  return corridor;
}

std::vector<Eigen::Vector2d> corridor_anchors(const Corridor& corridor, const OccupancyGrid& belief,
                                              const Eigen::Vector2d& start, const Eigen::Vector2d& end) {
  std::vector<Eigen::Vector2d> pts{start};
  std::size_t j = 0;
  for (std::size_t i = 0; i + 1 < corridor.boxes.size(); ++i) {
    while (j + 1 < corridor.path.size() && corridor.path_assignment[j + 1] <= static_cast<int>(i)) ++j;
    const Eigen::AlignedBox2d overlap = corridor.boxes[i].intersection(corridor.boxes[i + 1]);
    const Eigen::Vector2d c = belief.cell_to_world(belief.cell(corridor.path[j]));
    pts.push_back(c.cwiseMax(overlap.min()).cwiseMin(overlap.max()));
  }
  pts.push_back(end);
  return pts;
}

std::vector<Eigen::Vector2d> corridor_waypoints(const Corridor& corridor, const Eigen::Vector2d& start,
                                                const Eigen::Vector2d& end) {
  std::vector<Eigen::Vector2d> pts{start};
  for (std::size_t i = 0; i + 1 < corridor.boxes.size(); ++i)
    pts.push_back(corridor.boxes[i].intersection(corridor.boxes[i + 1]).center());
  pts.push_back(end);
  return pts;
}

std::vector<double> allocate_times(std::span<const Eigen::Vector2d> waypoints, double v_max, double a_max) {
  if (!(v_max > 0.0) || !(a_max > 0.0)) throw std::invalid_argument("v_max and a_max must be positive");
  std::vector<double> durations;
  const std::size_t legs = waypoints.size() < 2 ? 0 : waypoints.size() - 1;
  const double ramp = std::isinf(a_max) ? 0.0 : 0.5 * v_max / a_max;
  for (std::size_t i = 0; i < legs; ++i) {
    double t = (waypoints[i + 1] - waypoints[i]).norm() / v_max;
    if (i == 0) t += ramp;
    if (i + 1 == legs) t += ramp;
    durations.push_back(std::max(t, kMinSegmentDuration));
  }
  return durations;
}

}  // namespace colex
