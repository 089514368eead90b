#pragma once

#include "colex/bezier.hpp"
#include "colex/grid.hpp"
#include "colex/harmonic.hpp"
#include "colex/map_gen.hpp"
#include "colex/sensing.hpp"
#include "colex/uav_planner.hpp"
#include "colex/ugv_trajectory.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace colex {

enum class Mode { UgvOnly, UavOnly, Collaborative };
std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct UgvConfig {
  double v_max = 1.0;
  double a_max = 1.0;
  LidarSensor lidar;
  // Time allocation plans at this fraction of v_max; the octagon speed
  // bound and control-point conservatism need the slack.
  double planning_speed_fraction = 0.6;
  // Descent path cells handed to the corridor per replan.
  int path_horizon = 60;
  // Duration growth per infeasible QP attempt, and attempts allowed.
  double retime_factor = 1.5;
  int retime_attempts = 4;
  SorParams sor;
};

struct UavConfig {
  double v_max = 1.4;
  double a_max = 1.0;
  CameraFootprint footprint;
  double tau = 1.0;
  int depth = 3;
  GainParams gain;
  // Spacing of intermediate waypoints on the way to a distant goal, meters.
  double goal_waypoint_spacing = 2.0;
};

struct ScenarioConfig {
  MapGenConfig map;
  std::string map_file;  // when set, overrides `map`
  UgvConfig ugv;
  UavConfig uav;
  Cell start{5, 5};
  double replan_period = 1.0;
  double dt = 0.05;
  double progress_target = 0.95;
  double timeout = 1200.0;
  Mode mode = Mode::Collaborative;
};

struct ProgressSample {
  double t = 0.0;
  double known_fraction = 0.0;
  double ugv_dist = 0.0;
  double uav_dist = 0.0;
  friend bool operator==(const ProgressSample&, const ProgressSample&) = default;
};

enum class Termination { TargetReached, Timeout, DeadEnd };
std::string to_string(Termination t);
Termination termination_from_string(const std::string& name);

struct OrderingBenchmark {
  int problems = 0;
  long rowmajor_sweeps = 0;
  long spreading_sweeps = 0;
  double ratio = 1.0;
  double max_field_difference = 0.0;
  friend bool operator==(const OrderingBenchmark&, const OrderingBenchmark&) = default;
};

// Wall-clock measurements, kept apart from the deterministic results.
struct PlannerTiming {
  std::vector<double> ugv_plan_ms;  // whole UGV replan incl. harmonic solve
  std::vector<double> ugv_traj_ms;  // corridor + time allocation + QP
  std::vector<double> uav_traj_ms;  // tree + selection (+ min-jerk)
  friend bool operator==(const PlannerTiming&, const PlannerTiming&) = default;
};

double mean(const std::vector<double>& v);
double max_of(const std::vector<double>& v);

struct RunReport {
  Mode mode = Mode::Collaborative;
  std::string map_name;
  std::uint64_t seed = 0;
  std::vector<ProgressSample> progress;
  std::optional<double> t_exp;
  Termination termination = Termination::Timeout;
  std::string reason;
  double ugv_distance = 0.0;
  double uav_distance = 0.0;
  int ugv_replans = 0;
  int uav_replans = 0;
  int ugv_descent_fallbacks = 0;
  int ugv_plan_failures = 0;
  int uav_global_goals = 0;
  long sor_sweeps = 0;
  std::optional<OrderingBenchmark> ordering_benchmark;
  PlannerTiming timing;
  friend bool operator==(const RunReport&, const RunReport&) = default;
};

struct StepView {
  double t;
  const OccupancyGrid& belief;
  const OccupancyGrid& truth;
  std::optional<Eigen::Vector2d> ugv;
  std::optional<Eigen::Vector2d> uav;
};

// Observers for tests and tooling; none affect the simulation.
struct RunHooks {
  std::function<void(const StepView&)> on_step;
  std::function<void(const Corridor&, const Trajectory&)> on_ugv_trajectory;
  // Records incremental harmonic problems, up to `max_recorded_problems`.
  std::vector<SorProblem>* sor_problems = nullptr;
  int max_recorded_problems = 20;
  // Ends the run once this many UGV problems were recorded (0 = never).
  bool stop_when_recorded = false;
  // Starts from this belief instead of an all-Unknown map.
  std::optional<OccupancyGrid> initial_belief;
};

OccupancyGrid scenario_map(const ScenarioConfig& config);

RunReport run(const ScenarioConfig& config, const RunHooks& hooks = {});
RunReport run(const ScenarioConfig& config, const OccupancyGrid& truth, const RunHooks& hooks = {});

struct ModeComparison {
  std::vector<RunReport> rows;  // UgvOnly, UavOnly, Collaborative
};

// All three modes on the identical map instance.
ModeComparison compare_modes(const ScenarioConfig& config);

// Records the first `replans` UGV harmonic problems of a run and replays
// them with row-major and spreading orderings.
OrderingBenchmark benchmark_orderings(const ScenarioConfig& config, int replans = 20);
OrderingBenchmark summarize(const SweepComparison& comparison, int problems);

}  // namespace colex
