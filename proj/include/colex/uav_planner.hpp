#pragma once

#include "colex/bezier.hpp"
#include "colex/frontier.hpp"
#include "colex/grid.hpp"
#include "colex/sensing.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace colex {

// Planar state at the fixed flight altitude.
struct UavState {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
};

// Constant-acceleration motion of fixed duration.
struct Primitive {
  Eigen::Vector2d accel = Eigen::Vector2d::Zero();
  double duration = 1.0;
  UavState start;
  UavState end;

  static Primitive propagate(const UavState& from, const Eigen::Vector2d& accel, double duration);
  UavState at(double t) const;
  // Exact quadratic piece in the shared segment representation.
  BezierSegment<double> segment(int degree = 5) const;
};

// {-a, 0, +a}^2 with the four diagonal entries rescaled to magnitude a, so
// every non-zero command has the same authority.
std::vector<Eigen::Vector2d> make_accel_set(double a_max);

struct TreeParams {
  std::vector<Eigen::Vector2d> accel_set = make_accel_set(1.0);
  double tau = 1.0;
  int depth = 3;
  double v_max = 1.4;
  // Optional per-cell no-fly flags (non-zero = forbidden endpoint). Empty = off.
  std::vector<std::uint8_t> no_fly;
};

struct TreeNode {
  Primitive primitive;
  int parent = -1;  // -1: child of the root state
  int depth = 1;
  std::vector<int> children;
};

struct PathTree {
  UavState root;
  std::vector<TreeNode> nodes;
  std::vector<int> leaves;  // nodes without surviving children, ascending

  bool empty() const { return nodes.empty(); }
  // Primitives from the root to `leaf`.
  std::vector<Primitive> path_to(int leaf) const;
};

// Full expansion of the acceleration set to `depth`, pruning branches whose
// endpoint or midpoint speed exceeds v_max, whose endpoint leaves the grid,
// or whose endpoint lands on a no-fly cell. Returns an empty tree when every
// branch is pruned.
PathTree expand_tree(const UavState& state, const OccupancyGrid& grid, const TreeParams& params);

struct GainParams {
  double w_a = 1.0;
  double w_b = 3.0;
  double rho = 0.1;       // s^3/m^2
  double g_min = 1.0;     // cells/s
  double sample_dt = 0.1;  // footprint sweep spacing, seconds
};

struct PathScore {
  double gain = 0.0;
  double cost = 0.0;
  double ratio = 0.0;
};

// Footprint sample positions along one primitive, both ends included.
std::vector<Eigen::Vector2d> sweep_samples(const Primitive& p, double sample_dt);

// Weighted count of frontier cells swept by the footprint (each counted once)
// over time plus effort: sum(tau) + rho * sum(|a|^2 tau).
PathScore score(std::span<const Primitive> path, const FrontierSet& frontiers, const OccupancyGrid& grid,
                const CameraFootprint& footprint, const GainParams& params);

struct Selection {
  enum class Status { Selected, InsufficientGain };
  Status status = Status::InsufficientGain;
  int leaf = -1;
  PathScore score;
  std::vector<Primitive> path;
};

// Highest ratio leaf (ties: lower cost, then smaller node index). The status
// is InsufficientGain when that ratio is below g_min. Precondition: the tree
// is not empty.
Selection select_best(const PathTree& tree, const FrontierSet& frontiers, const OccupancyGrid& grid,
                      const CameraFootprint& footprint, const GainParams& params);

// Distant goal: the frontier-B cluster (or, with none, the frontier-A line)
// maximizing weight * size / distance, as the nearest cell center to its
// centroid. nullopt when there is no frontier at all.
std::optional<Eigen::Vector2d> select_global_goal(const FrontierSet& frontiers, const OccupancyGrid& grid,
                                                  const Eigen::Vector2d& position, const GainParams& params);

// Piecewise quintic through `waypoints` minimizing integrated squared jerk,
// with velocity and acceleration pinned at both ends and continuity up to
// snap at interior waypoints. Positions come from `waypoints`; only
// vel/acc of the end states are used. Throws DegenerateInputError for
// non-positive durations or a singular system.
Trajectory min_jerk(std::span<const Eigen::Vector2d> waypoints, const KinematicState<double>& start,
                    const KinematicState<double>& end, std::span<const double> durations);

// Same solve, returned as monomial coefficients in local time t per segment
// (column j multiplies t^j).
std::vector<Eigen::Matrix<double, 2, 6>> min_jerk_coefficients(std::span<const Eigen::Vector2d> waypoints,
                                                                const KinematicState<double>& start,
                                                                const KinematicState<double>& end,
                                                                std::span<const double> durations);

// Integral of |jerk|^2, exact for polynomial pieces.
double jerk_cost(const Trajectory& traj);

}  // namespace colex
