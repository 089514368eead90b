#include "colex/uav_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace colex {

Primitive Primitive::propagate(const UavState& from, const Eigen::Vector2d& accel, double duration) {
  Primitive p;
  p.accel = accel;
  p.duration = duration;
  p.start = from;
  p.end = p.at(duration);
  return p;
}

UavState Primitive::at(double t) const {
  return {start.position + start.velocity * t + 0.5 * accel * t * t, start.velocity + accel * t};
}

BezierSegment<double> Primitive::segment(int degree) const {
  Eigen::Matrix<double, 2, 3> coeffs;
  coeffs.col(0) = start.position;
  coeffs.col(1) = start.velocity * duration;
  coeffs.col(2) = 0.5 * accel * duration * duration;
  return {power_to_bernstein(coeffs, degree), duration};
}

std::vector<Eigen::Vector2d> make_accel_set(double a_max) {
  std::vector<Eigen::Vector2d> set;
  for (int ix = -1; ix <= 1; ++ix) {
    for (int iy = -1; iy <= 1; ++iy) {
      Eigen::Vector2d a(ix, iy);
      if (ix != 0 && iy != 0) a.normalize();
      set.push_back(a_max * a);
    }
  }
  return set;
}

std::vector<Primitive> PathTree::path_to(int leaf) const {
  std::vector<Primitive> path;
  for (int n = leaf; n >= 0; n = nodes[n].parent) path.push_back(nodes[n].primitive);
  std::reverse(path.begin(), path.end());
  return path;
}

PathTree expand_tree(const UavState& state, const OccupancyGrid& grid, const TreeParams& params) {
  if (params.accel_set.empty()) throw std::invalid_argument("acceleration set must not be empty");
  if (!(params.tau > 0.0) || params.depth < 1) throw std::invalid_argument("tree needs tau > 0 and depth >= 1");
  PathTree tree;
  tree.root = state;
  const Eigen::Vector2d lo = grid.origin(), hi = grid.upper_corner();
  const double speed_limit = params.v_max * (1.0 + 1e-12);

  auto admissible = [&](const Primitive& p) {
    if (p.end.velocity.norm() > speed_limit) return false;
    if (p.at(0.5 * p.duration).velocity.norm() > speed_limit) return false;
    const Eigen::Vector2d& e = p.end.position;
    if (!(e.x() >= lo.x() && e.y() >= lo.y() && e.x() < hi.x() && e.y() < hi.y())) return false;
    if (!params.no_fly.empty()) {
      const auto cell = grid.world_to_cell(e);
      if (!cell || params.no_fly[grid.index(*cell)]) return false;
    }
    return true;
  };

  std::vector<int> frontier_nodes{-1};
  for (int level = 1; level <= params.depth; ++level) {
    std::vector<int> next;
    for (int parent : frontier_nodes) {
      const UavState& from = parent < 0 ? state : tree.nodes[parent].primitive.end;
      for (const Eigen::Vector2d& a : params.accel_set) {
        Primitive p = Primitive::propagate(from, a, params.tau);
        if (!admissible(p)) continue;
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({std::move(p), parent, level, {}});
        if (parent >= 0) tree.nodes[parent].children.push_back(id);
        next.push_back(id);
      }
    }
    frontier_nodes = std::move(next);
  }
  for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i)
    if (tree.nodes[i].children.empty()) tree.leaves.push_back(i);
  return tree;
}

std::vector<Eigen::Vector2d> sweep_samples(const Primitive& p, double sample_dt) {
  std::vector<Eigen::Vector2d> pts;
  const int steps = static_cast<int>(std::floor(p.duration / sample_dt + 1e-9));
  for (int k = 0; k <= steps; ++k) pts.push_back(p.at(k * sample_dt).position);
  if (p.duration - steps * sample_dt > 1e-9) pts.push_back(p.end.position);
  return pts;
}

namespace {

double effort(const Primitive& p, const GainParams& params) {
  return p.duration + params.rho * p.accel.squaredNorm() * p.duration;
}

double weight(FrontierLabel label, const GainParams& params) {
  switch (label) {
    case FrontierLabel::A: return params.w_a;
    case FrontierLabel::B: return params.w_b;
    case FrontierLabel::None: return 0.0;
  }
  return 0.0;
}

bool better(const PathScore& a, int a_leaf, const PathScore& b, int b_leaf) {
  if (a.ratio != b.ratio) return a.ratio > b.ratio;
  if (a.cost != b.cost) return a.cost < b.cost;
  return a_leaf < b_leaf;
}

}  // namespace

PathScore score(std::span<const Primitive> path, const FrontierSet& frontiers, const OccupancyGrid& grid,
                const CameraFootprint& footprint, const GainParams& params) {
  const std::vector<FrontierLabel> labels = label_frontiers(frontiers, grid.size());
  std::vector<char> covered(grid.size(), 0);
  PathScore s;
  for (const Primitive& p : path) {
    s.cost += effort(p, params);
    for (const Eigen::Vector2d& pos : sweep_samples(p, params.sample_dt)) {
      for_each_footprint_cell(grid, pos, footprint, [&](CellIndex i) {
        if (covered[i]) return;
        covered[i] = 1;
        s.gain += weight(labels[i], params);
      });
    }
  }
  s.ratio = s.cost > 0.0 ? s.gain / s.cost : 0.0;
  return s;
}

Selection select_best(const PathTree& tree, const FrontierSet& frontiers, const OccupancyGrid& grid,
                      const CameraFootprint& footprint, const GainParams& params) {
  if (tree.empty()) throw std::invalid_argument("select_best needs a non-empty tree");
  const std::vector<FrontierLabel> labels = label_frontiers(frontiers, grid.size());
  // Depth-first walk with per-cell coverage counts: a cell's weight is
  // gained when its count leaves zero and given back when it returns.
  std::vector<std::uint16_t> count(grid.size(), 0);
  Selection best;
  PathScore best_score{0.0, 0.0, -1.0};

  struct Frame {
    int node;
    bool entered;
    double gain_added;
  };
  std::vector<Frame> stack;
  for (int i = static_cast<int>(tree.nodes.size()) - 1; i >= 0; --i)
    if (tree.nodes[i].parent < 0) stack.push_back({i, false, 0.0});

  double gain = 0.0, cost = 0.0;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const TreeNode& node = tree.nodes[f.node];
    if (f.entered) {
      for (const Eigen::Vector2d& pos : sweep_samples(node.primitive, params.sample_dt))
        for_each_footprint_cell(grid, pos, footprint, [&](CellIndex i) { --count[i]; });
      gain -= f.gain_added;
      cost -= effort(node.primitive, params);
      stack.pop_back();
      continue;
    }
    f.entered = true;
    double added = 0.0;
    for (const Eigen::Vector2d& pos : sweep_samples(node.primitive, params.sample_dt)) {
      for_each_footprint_cell(grid, pos, footprint, [&](CellIndex i) {
        if (count[i]++ == 0) added += weight(labels[i], params);
      });
    }
    f.gain_added = added;
    gain += added;
    cost += effort(node.primitive, params);
    if (node.children.empty()) {
      const PathScore s{gain, cost, cost > 0.0 ? gain / cost : 0.0};
      if (best.leaf < 0 || better(s, f.node, best_score, best.leaf)) {
        best_score = s;
        best.leaf = f.node;
      }
    }
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.push_back({*it, false, 0.0});
  }

  best.score = best_score;
  best.path = tree.path_to(best.leaf);
  best.status = best_score.ratio >= params.g_min ? Selection::Status::Selected : Selection::Status::InsufficientGain;
  return best;
}

std::optional<Eigen::Vector2d> select_global_goal(const FrontierSet& frontiers, const OccupancyGrid& grid,
                                                  const Eigen::Vector2d& position, const GainParams& params) {
  if (frontiers.frontier_a.empty() && frontiers.frontier_b.empty()) return std::nullopt;
  const bool use_b = !frontiers.frontier_b.empty();
  const auto clusters = cluster_8connected(use_b ? frontiers.frontier_b : frontiers.frontier_a, grid);
  const double w = use_b ? params.w_b : params.w_a;

  double best_score = -std::numeric_limits<double>::infinity();
  Eigen::Vector2d best_centroid = position;
  for (const auto& cluster : clusters) {
    const Eigen::Vector2d c = centroid(cluster, grid);
    const double distance = std::max((c - position).norm(), grid.resolution());
    const double s = w * static_cast<double>(cluster.size()) / distance;
    if (s > best_score) {
      best_score = s;
      best_centroid = c;
    }
  }
  const Eigen::Vector2d rel = (best_centroid - grid.origin()) / grid.resolution();
  const int x = std::clamp(static_cast<int>(std::floor(rel.x())), 0, grid.width() - 1);
  const int y = std::clamp(static_cast<int>(std::floor(rel.y())), 0, grid.height() - 1);
  return grid.cell_to_world(Cell{x, y});
}

}  // namespace colex
