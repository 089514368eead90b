#include "colex/sim.hpp"

#include "colex/error.hpp"
#include "colex/frontier.hpp"
#include "colex/log.hpp"
#include "colex/map_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace colex {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::UgvOnly: return "ugv";
    case Mode::UavOnly: return "uav";
    case Mode::Collaborative: return "collab";
  }
  return "collab";
}

Mode mode_from_string(const std::string& name) {
  if (name == "ugv") return Mode::UgvOnly;
  if (name == "uav") return Mode::UavOnly;
  if (name == "collab") return Mode::Collaborative;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::TargetReached: return "target_reached";
    case Termination::Timeout: return "timeout";
    case Termination::DeadEnd: return "dead_end";
  }
  return "timeout";
}

Termination termination_from_string(const std::string& name) {
  if (name == "target_reached") return Termination::TargetReached;
  if (name == "timeout") return Termination::Timeout;
  if (name == "dead_end") return Termination::DeadEnd;
  throw std::invalid_argument("unknown termination '" + name + "'");
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

OccupancyGrid scenario_map(const ScenarioConfig& config) {
  if (!config.map_file.empty()) return load_map_file(config.map_file);
  return generate_map(config.map);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

constexpr double kTimeEps = 1e-9;

struct Robot {
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
  std::optional<Trajectory> traj;
  double traj_start = 0.0;
  double next_replan = 0.0;
  bool no_target = false;
  std::optional<Eigen::Vector2d> last_sensed;
  double distance = 0.0;
  // UAV only: the current trajectory heads for this global goal.
  std::optional<Eigen::Vector2d> goal;

  bool moving(double t) const {
    return traj && t - traj_start < traj->total_duration() - 1e-6;
  }
  bool finished(double t) const { return traj && !moving(t); }

  KinematicState<double> state(double t) const {
    KinematicState<double> s;
    s.pos = pos;
    if (traj) {
      const auto smp = traj->sample(t - traj_start);
      s.vel = smp.vel;
      s.acc = smp.acc;
      if (smp.clamped && t - traj_start > 0) s.acc.setZero();
    }
    return s;
  }
};

// Pulls v slightly inside the octagon the trajectory optimizer enforces, so
// a state inherited from the previous solution is strictly feasible.
Eigen::Vector2d inside_octagon(const Eigen::Vector2d& v, double radius) {
  const double face = radius * std::cos(std::numbers::pi / 8.0);
  double worst = 0.0;
  for (int j = 0; j < 8; ++j) {
    const Eigen::Vector2d n(std::cos(j * std::numbers::pi / 4.0), std::sin(j * std::numbers::pi / 4.0));
    worst = std::max(worst, n.dot(v) / face);
  }
  constexpr double kLimit = 1.0 - 1e-6;
  return worst > kLimit ? Eigen::Vector2d(v * (kLimit / worst)) : v;
}

// Breadth-first search over Free cells to the nearest frontier cell at
// least `min_free` Free cells away (the start counts as one). Returns the
// path including the frontier cell, or empty.
std::vector<CellIndex> bfs_to_frontier(const OccupancyGrid& belief, const BoundaryConditions& bc, CellIndex start,
                                       int min_free) {
  std::vector<CellIndex> parent(belief.size(), -2);
  std::vector<int> hops(belief.size(), 0);
  std::queue<CellIndex> queue;
  parent[start] = -1;
  hops[start] = 1;
  queue.push(start);
  while (!queue.empty()) {
    const CellIndex i = queue.front();
    queue.pop();
    const Cell c = belief.cell(i);
    for (int k = 0; k < 4; ++k) {
      const int nx = c.x + kDx4[k], ny = c.y + kDy4[k];
      if (!belief.in_bounds(nx, ny)) continue;
      const CellIndex n = belief.index(nx, ny);
      if (parent[n] != -2) continue;
      if (bc.is_frontier(n) && hops[i] >= min_free) {
        std::vector<CellIndex> path{n};
        for (CellIndex p = i; p != -1; p = parent[p]) path.push_back(p);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (belief[n] != CellState::Free) continue;
      parent[n] = i;
      hops[n] = hops[i] + 1;
      queue.push(n);
    }
  }
  return {};
}

// Largest speed over dense samples of the trajectory.
double sampled_max_speed(const Trajectory& traj, double step) {
  double best = 0.0;
  for (const auto& seg : traj.segments()) {
    const int n = std::max(2, static_cast<int>(std::ceil(seg.duration / step)));
    for (int k = 0; k <= n; ++k) best = std::max(best, seg.evaluate(seg.duration * k / n).vel.norm());
  }
  return best;
}

Trajectory braking_primitive(const Eigen::Vector2d& pos, const Eigen::Vector2d& vel, double a_max, double tau) {
  Eigen::Vector2d accel = Eigen::Vector2d::Zero();
  const double speed = vel.norm();
  if (speed > 0.0) accel = -vel / speed * std::min(a_max, speed / tau);
  return Trajectory({Primitive::propagate({pos, vel}, accel, tau).segment()});
}

enum class PlanOutcome { Planned, NoTarget, Failed };

class Simulation {
 public:
  Simulation(const ScenarioConfig& config, const OccupancyGrid& truth, const RunHooks& hooks)
      : config_(config), truth_(truth), hooks_(hooks),
        belief_(hooks.initial_belief ? *hooks.initial_belief
                                     : OccupancyGrid(truth.width(), truth.height(), truth.resolution(),
                                                     CellState::Unknown, truth.origin())) {
    if (!(config.dt > 0.0) || !(config.replan_period > 0.0) || !(config.timeout > 0.0))
      throw std::invalid_argument("dt, replan period and timeout must be positive");
    if (!(config.progress_target > 0.0 && config.progress_target <= 1.0))
      throw std::invalid_argument("progress target must lie in (0, 1]");
    if (belief_.width() != truth.width() || belief_.height() != truth.height())
      throw std::invalid_argument("initial belief does not match the map size");
    if (!truth.in_bounds(config.start.x, config.start.y) || truth.at(config.start.x, config.start.y) != CellState::Free)
      throw InvalidPoseError("start cell is not free in the map");

    const Eigen::Vector2d start = truth.cell_to_world(config.start);
    if (config.mode != Mode::UavOnly) ugv_.emplace().pos = start;
    if (config.mode != Mode::UgvOnly) uav_.emplace().pos = start;

    known_ = belief_.size() - belief_.count(CellState::Unknown);

    tree_params_.accel_set = make_accel_set(config.uav.a_max);
    tree_params_.tau = config.uav.tau;
    tree_params_.depth = config.uav.depth;
    tree_params_.v_max = config.uav.v_max;

    report_.mode = config.mode;
    report_.seed = config.map.seed;
    report_.map_name = config.map_file.empty() ? to_string(config.map.kind) : "file";
  }

  RunReport run() {
    const long max_steps = static_cast<long>(std::ceil(config_.timeout / config_.dt - 1e-9));
    for (long step = 0;; ++step) {
      const double t = step * config_.dt;
      if (step > 0) advance(t);
      sense();
      record(t);
      if (fraction() >= config_.progress_target - 1e-12) {
        finish(Termination::TargetReached, t, "known fraction reached the target");
        break;
      }
      if (step >= max_steps) {
        finish(Termination::Timeout, t, "timeout before the target");
        break;
      }
      if (stop_requested_) {
        finish(Termination::Timeout, t, "stopped after recording the requested problems");
        break;
      }
      plan(t);
      if (dead_end(t)) {
        finish(Termination::DeadEnd, t, "no robot has a reachable frontier");
        break;
      }
    }
    return std::move(report_);
  }

 private:
  double fraction() const { return static_cast<double>(known_) / static_cast<double>(belief_.size()); }

  void advance(double t) {
    for (Robot* r : {ugv_ ? &*ugv_ : nullptr, uav_ ? &*uav_ : nullptr}) {
      if (r == nullptr || !r->traj) continue;
      const Eigen::Vector2d next = r->traj->sample(t - r->traj_start).pos;
      r->distance += (next - r->pos).norm();
      r->pos = next;
    }
  }

  void sense() {
    if (ugv_ && ugv_->last_sensed != ugv_->pos) {
      known_ += static_cast<CellIndex>(integrate(belief_, simulate_lidar(truth_, ugv_->pos, config_.ugv.lidar)).size());
      ugv_->last_sensed = ugv_->pos;
    }
    if (uav_ && uav_->last_sensed != uav_->pos) {
      known_ += static_cast<CellIndex>(
          integrate(belief_, simulate_camera(truth_, uav_->pos, config_.uav.footprint)).size());
      uav_->last_sensed = uav_->pos;
    }
  }

  void record(double t) {
    ProgressSample s{t, fraction(), ugv_ ? ugv_->distance : 0.0, uav_ ? uav_->distance : 0.0};
    report_.progress.push_back(s);
    if (hooks_.on_step) {
      StepView view{t, belief_, truth_, {}, {}};
      if (ugv_) view.ugv = ugv_->pos;
      if (uav_) view.uav = uav_->pos;
      hooks_.on_step(view);
    }
  }

  void finish(Termination why, double t, const std::string& reason) {
    report_.termination = why;
    report_.reason = reason;
    if (why == Termination::TargetReached) report_.t_exp = t;
    if (ugv_) report_.ugv_distance = ugv_->distance;
    if (uav_) report_.uav_distance = uav_->distance;
    log_info("run " + to_string(config_.mode) + " ended: " + reason);
  }

  bool due(const Robot& r, double t) const {
    return t >= r.next_replan - kTimeEps || r.finished(t);
  }

  void plan(double t) {
    const bool ugv_due = ugv_ && due(*ugv_, t);
    const bool uav_due = uav_ && due(*uav_, t);
    if (!ugv_due && !uav_due) return;
    frontiers_ = extract_frontiers(belief_);

    if (ugv_due) {
      const auto t0 = Clock::now();
      const PlanOutcome out = plan_ugv(t);
      report_.timing.ugv_plan_ms.push_back(ms_since(t0));
      ++report_.ugv_replans;
      ugv_->no_target = out == PlanOutcome::NoTarget;
      if (out == PlanOutcome::Failed) ++report_.ugv_plan_failures;
      if (out != PlanOutcome::Planned && ugv_->finished(t)) ugv_->traj.reset();
      ugv_->next_replan = t + config_.replan_period;
    }
    if (uav_due) {
      const PlanOutcome out = plan_uav(t);
      ++report_.uav_replans;
      uav_->no_target = out == PlanOutcome::NoTarget;
      if (out == PlanOutcome::NoTarget && !uav_->moving(t)) uav_->traj.reset();
      uav_->next_replan = t + config_.replan_period;
    }
  }

  bool dead_end(double t) const {
    for (const auto* r : {ugv_ ? &*ugv_ : nullptr, uav_ ? &*uav_ : nullptr}) {
      if (r != nullptr && (!r->no_target || r->moving(t))) return false;
    }
    return true;
  }

  PlanOutcome plan_ugv(double t) {
    Robot& ugv = *ugv_;
    const std::vector<FrontierLine> lines = cluster_frontier_lines(frontiers_, belief_);
    if (lines.empty()) return PlanOutcome::NoTarget;

    BoundaryConditions bc = build_boundary(belief_, lines);
    std::vector<CellIndex> seeds = boundary_changes(field_ ? &field_->bc : nullptr, bc);
    if (hooks_.sor_problems && static_cast<int>(hooks_.sor_problems->size()) < hooks_.max_recorded_problems) {
      hooks_.sor_problems->push_back({bc, seeds});
      if (hooks_.stop_when_recorded &&
          static_cast<int>(hooks_.sor_problems->size()) >= hooks_.max_recorded_problems)
        stop_requested_ = true;
    }
    HarmonicField field = solve_sor(field_ ? &*field_ : nullptr, bc, config_.ugv.sor,
                                    UpdateOrdering::spreading(std::move(seeds)));
    report_.sor_sweeps += field.iterations;
    field_ = std::move(field);

    const auto cell = belief_.world_to_cell(ugv.pos);
    if (!cell || belief_.at(cell->x, cell->y) != CellState::Free)
      throw InvalidPoseError("ground robot left the known free space");
    const CellIndex here = belief_.index(cell->x, cell->y);

    std::vector<CellIndex> path;
    try {
      path = descend_path(*field_, here);
    } catch (const StuckError& e) {
      log_debug(std::string("descent stuck, falling back to search: ") + e.what());
    }
    if (!path.empty() && belief_[path.back()] != CellState::Free) path.pop_back();
    if (path.size() < 2) {
      ++report_.ugv_descent_fallbacks;
      path = bfs_to_frontier(belief_, field_->bc, here, 2);
      if (path.empty()) return PlanOutcome::NoTarget;
      path.pop_back();
    }
    if (static_cast<int>(path.size()) > config_.ugv.path_horizon) path.resize(config_.ugv.path_horizon);
    if (log_level() == LogLevel::Debug) {
      std::ostringstream os;
      const Cell a = belief_.cell(path.front()), b = belief_.cell(path.back());
      os << "ugv t=" << t << " at (" << a.x << "," << a.y << ") path " << path.size() << " cells to (" << b.x << ","
         << b.y << "), field " << (*field_)[here] << " sweeps " << field_->iterations;
      log_debug(os.str());
    }

    const auto t0 = Clock::now();
    const PlanOutcome out = ugv_trajectory(t, path);
    report_.timing.ugv_traj_ms.push_back(ms_since(t0));
    return out;
  }

  PlanOutcome ugv_trajectory(double t, std::vector<CellIndex> path) {
    Robot& ugv = *ugv_;
    Corridor corridor;
    while (true) {
      try {
        corridor = generate_corridor(belief_, path);
        break;
      } catch (const CorridorBreakError& e) {
        if (e.covered() < 2) return PlanOutcome::Failed;
        path.resize(e.covered());
      }
    }

    KinematicState<double> start = ugv.state(t);
    start.vel = inside_octagon(start.vel, config_.ugv.v_max);
    start.acc = inside_octagon(start.acc, config_.ugv.a_max);
    KinematicState<double> end;
    end.pos = belief_.cell_to_world(belief_.cell(path.back()));

    const std::vector<Eigen::Vector2d> waypoints = corridor_anchors(corridor, belief_, start.pos, end.pos);
    std::vector<double> durations = allocate_times(
        waypoints, config_.ugv.v_max * config_.ugv.planning_speed_fraction, config_.ugv.a_max);
    BezierOptions opt;
    opt.v_max = config_.ugv.v_max;
    opt.a_max = config_.ugv.a_max;
    for (int attempt = 0; attempt < config_.ugv.retime_attempts; ++attempt) {
      try {
        Trajectory traj = optimize_bezier(corridor, start, end, durations, opt);
        if (hooks_.on_ugv_trajectory) hooks_.on_ugv_trajectory(corridor, traj);
        ugv.traj = std::move(traj);
        ugv.traj_start = t;
        return PlanOutcome::Planned;
      } catch (const InfeasibleError& e) {
        log_debug(std::string("ground trajectory infeasible (") + e.family() + "), retiming");
        for (double& d : durations) d *= config_.ugv.retime_factor;
      }
    }
    return PlanOutcome::Failed;
  }

  PlanOutcome plan_uav(double t) {
    Robot& uav = *uav_;
    if (frontiers_.frontier_a.empty() && frontiers_.frontier_b.empty()) return PlanOutcome::NoTarget;
    const auto t0 = Clock::now();
    const KinematicState<double> now = uav.state(t);

    const PathTree tree = expand_tree({now.pos, now.vel}, belief_, tree_params_);
    if (!tree.empty()) {
      const Selection sel = select_best(tree, frontiers_, belief_, config_.uav.footprint, config_.uav.gain);
      if (sel.status == Selection::Status::Selected) {
        uav.traj = Trajectory({sel.path.front().segment()});
        uav.traj_start = t;
        uav.goal.reset();
        report_.timing.uav_traj_ms.push_back(ms_since(t0));
        return PlanOutcome::Planned;
      }
    }

    const auto goal = select_global_goal(frontiers_, belief_, now.pos, config_.uav.gain);
    if (!goal) return PlanOutcome::NoTarget;
    if (uav.goal && uav.moving(t) && (*uav.goal - *goal).norm() < 1e-9) {
      report_.timing.uav_traj_ms.push_back(ms_since(t0));
      return PlanOutcome::Planned;
    }
    ++report_.uav_global_goals;
    uav.traj = goal_trajectory(now, *goal);
    uav.traj_start = t;
    uav.goal = goal;
    report_.timing.uav_traj_ms.push_back(ms_since(t0));
    return PlanOutcome::Planned;
  }

  // Minimum-jerk flight to a rest at `goal` through evenly spaced waypoints
  // on the straight line, stretched until the speed limit holds.
  Trajectory goal_trajectory(const KinematicState<double>& now, const Eigen::Vector2d& goal) const {
    const UavConfig& c = config_.uav;
    const double limit = c.v_max * (1.0 - 1e-4);
    if (now.vel.norm() <= limit) {
      const double length = (goal - now.pos).norm();
      const int legs = std::max(1, static_cast<int>(std::ceil(length / c.goal_waypoint_spacing)));
      std::vector<Eigen::Vector2d> waypoints;
      for (int k = 0; k <= legs; ++k) waypoints.push_back(now.pos + (goal - now.pos) * (double(k) / legs));
      std::vector<double> durations = allocate_times(waypoints, c.v_max, c.a_max);
      KinematicState<double> start{now.pos, now.vel, Eigen::Vector2d::Zero()};
      KinematicState<double> end{goal, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
      for (int attempt = 0; attempt < 16; ++attempt) {
        Trajectory traj = min_jerk(waypoints, start, end, durations);
        if (sampled_max_speed(traj, 0.005) <= limit) return traj;
        for (double& d : durations) d *= 1.2;
      }
    }
    return braking_primitive(now.pos, now.vel, c.a_max, c.tau);
  }

  const ScenarioConfig& config_;
  const OccupancyGrid& truth_;
  const RunHooks& hooks_;
  OccupancyGrid belief_;
  CellIndex known_ = 0;
  std::optional<Robot> ugv_;
  std::optional<Robot> uav_;
  FrontierSet frontiers_;
  std::optional<HarmonicField> field_;
  TreeParams tree_params_;
  bool stop_requested_ = false;
  RunReport report_;
};

}  // namespace

RunReport run(const ScenarioConfig& config, const OccupancyGrid& truth, const RunHooks& hooks) {
  return Simulation(config, truth, hooks).run();
}

RunReport run(const ScenarioConfig& config, const RunHooks& hooks) {
  const OccupancyGrid truth = scenario_map(config);
  return run(config, truth, hooks);
}

ModeComparison compare_modes(const ScenarioConfig& config) {
  const OccupancyGrid truth = scenario_map(config);
  ModeComparison out;
  for (Mode m : {Mode::UgvOnly, Mode::UavOnly, Mode::Collaborative}) {
    ScenarioConfig c = config;
    c.mode = m;
    out.rows.push_back(run(c, truth));
  }
  return out;
}

OrderingBenchmark summarize(const SweepComparison& comparison, int problems) {
  OrderingBenchmark b;
  b.problems = problems;
  b.rowmajor_sweeps = comparison.rowmajor_sweeps;
  b.spreading_sweeps = comparison.spreading_sweeps;
  b.ratio = comparison.ratio();
  b.max_field_difference = comparison.max_field_difference;
  return b;
}

OrderingBenchmark benchmark_orderings(const ScenarioConfig& config, int replans) {
  std::vector<SorProblem> problems;
  RunHooks hooks;
  hooks.sor_problems = &problems;
  hooks.max_recorded_problems = replans;
  hooks.stop_when_recorded = true;
  run(config, hooks);
  return summarize(count_sweeps_comparison(problems, config.ugv.sor), static_cast<int>(problems.size()));
}

}  // namespace colex
