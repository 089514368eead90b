#pragma once

#include "colex/bezier.hpp"
#include "colex/grid.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>
#include <vector>

namespace colex {

// Inclusive cell range [x0, x1] x [y0, y1].
struct CellBox {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool contains(Cell c) const { return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1; }
  bool overlaps(const CellBox& o) const { return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1; }
  friend bool operator==(const CellBox&, const CellBox&) = default;
};

// Chain of free rectangles covering a grid path; consecutive boxes overlap.
struct Corridor {
  std::vector<CellBox> cell_boxes;
  std::vector<Eigen::AlignedBox2d> boxes;  // world meters, cell-aligned
  std::vector<CellIndex> path;
  std::vector<int> path_assignment;  // box index per path cell
};

// Greedy inflation: grow a box one cell per side per round while the new
// row/column stays Free, move along the path to the first cell outside it,
// and seed the next box across that step so the two overlap.
// Throws InvalidPathError for non-Free path cells and CorridorBreakError
// when consecutive boxes cannot be made to overlap.
Corridor generate_corridor(const OccupancyGrid& belief, const std::vector<CellIndex>& path);

// Largest box around `seed` reachable by the inflation rule.
CellBox inflate_box(const OccupancyGrid& belief, CellBox seed);

// start, centres of consecutive box overlaps, end.
std::vector<Eigen::Vector2d> corridor_waypoints(const Corridor& corridor, const Eigen::Vector2d& start,
                                                const Eigen::Vector2d& end);

// start, the last path cell of each box projected into its overlap with the
// next box, end. Tracks the grid path where room-sized overlaps would put
// their centres far off it.
std::vector<Eigen::Vector2d> corridor_anchors(const Corridor& corridor, const OccupancyGrid& belief,
                                              const Eigen::Vector2d& start, const Eigen::Vector2d& end);

// Trapezoidal heuristic over the polyline: distance / v_max per leg, plus
// v_max / (2 a_max) on the first and last legs for speeding up from and
// slowing down to rest. Legs never get less than kMinSegmentDuration.
inline constexpr double kMinSegmentDuration = 0.1;
std::vector<double> allocate_times(std::span<const Eigen::Vector2d> waypoints, double v_max, double a_max);

struct BezierOptions {
  int degree = 5;
  double v_max = 1.0;
  double a_max = 1.0;
  // Boxes are shrunk by this much inside the solver so interior-point
  // round-off cannot leave a control point outside its box.
  double box_margin = 1e-8;
};

// Minimizes integrated squared acceleration over Bernstein control points,
// one segment per box, with every control point inside its box, C2
// junctions, the given end states, and hodograph control points of velocity
// and acceleration inside inscribed octagons of radius v_max / a_max.
// Throws InfeasibleError naming the first unsatisfiable constraint family
// ("corridor", "velocity", "acceleration").
Trajectory optimize_bezier(const Corridor& corridor, const KinematicState<double>& start,
                           const KinematicState<double>& end, std::span<const double> durations,
                           const BezierOptions& options = {});

// Integral of |acceleration|^2 over the trajectory, exact for Bezier pieces.
double acceleration_cost(const Trajectory& traj);

// Rest-to-rest straight legs through the waypoints (control points
// P0,P0,P0,P1,P1,P1 per leg): the feasible reference the optimizer must beat.
Trajectory straight_seed(std::span<const Eigen::Vector2d> waypoints, std::span<const double> durations,
                         int degree = 5);

}  // namespace colex
