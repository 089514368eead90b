#include "colex/frontier.hpp"
#include "colex/uav_planner.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <functional>

using namespace colex;

namespace {

UavState state(double x, double y, double vx = 0, double vy = 0) { return {{x, y}, {vx, vy}}; }

// Per-cell point-in-rectangle test over every 0.1 s sample of the path.
double brute_gain(std::span<const Primitive> path, const FrontierSet& fs, const OccupancyGrid& g,
                  const CameraFootprint& fp, const GainParams& params) {
  double gain = 0.0;
  auto covered = [&](CellIndex i) {
    const Eigen::Vector2d c = g.cell_to_world(i);
    for (const Primitive& p : path) {
      for (double t = 0.0;; t += params.sample_dt) {
        const double tt = std::min(t, p.duration);
        const Eigen::Vector2d d = (c - p.at(tt).position).cwiseAbs();
        if (d.x() <= fp.side_x / 2 && d.y() <= fp.side_y / 2) return true;
        if (tt >= p.duration) break;
      }
    }
    return false;
  };
  for (CellIndex i : fs.frontier_a)
    if (covered(i)) gain += params.w_a;
  for (CellIndex i : fs.frontier_b)
    if (covered(i)) gain += params.w_b;
  return gain;
}

}  // namespace

TEST_CASE("acceleration set") {
  const auto set = make_accel_set(1.0);
  REQUIRE(set.size() == 9);
  int zero = 0;
  for (const auto& a : set) {
    if (a.norm() == 0.0) ++zero;
    else CHECK(a.norm() == doctest::Approx(1.0));
  }
  CHECK(zero == 1);
}

TEST_CASE("tree expansion at rest and at full speed") {
  const OccupancyGrid g(200, 200, 0.1);
  TreeParams p;
  p.depth = 1;
  const PathTree rest = expand_tree(state(10, 10), g, p);
  CHECK(rest.nodes.size() == 9);
  CHECK(rest.leaves.size() == 9);

  const PathTree fast = expand_tree(state(10, 10, 1.4, 0), g, p);
  CHECK_FALSE(fast.empty());
  for (const TreeNode& n : fast.nodes) CHECK(n.primitive.accel.x() <= 0.0);
  CHECK(fast.nodes.size() == 4);

  p.depth = 3;
  CHECK(expand_tree(state(10, 10), g, p).leaves.size() <= 729);
  p.v_max = 100.0;
  const PathTree full = expand_tree(state(10, 10), g, p);
  CHECK(full.nodes.size() == 9 + 81 + 729);
  CHECK(full.leaves.size() == 729);
}

TEST_CASE("tree expansion respects grid bounds and the no-fly mask") {
  const OccupancyGrid g(20, 20, 0.1);
  TreeParams p;
  p.depth = 2;
  CHECK(expand_tree(state(0.05, 0.05, -1.4, -1.4 * 0), g, p).nodes.size() < 81 + 9);
  // Moving fast out of a tiny grid: nothing survives.
  const OccupancyGrid tiny(3, 3, 0.1);
  p.depth = 1;
  CHECK(expand_tree(state(0.15, 0.15, 1.4, 0), tiny, p).empty());

  TreeParams masked;
  masked.depth = 1;
  masked.no_fly.assign(g.size(), 1);
  CHECK(expand_tree(state(1.0, 1.0), g, masked).empty());
  CHECK_THROWS_AS(expand_tree(state(1, 1), g, TreeParams{{}, 1.0, 1, 1.4, {}}), std::invalid_argument);
}

TEST_CASE("pruning is sound and complete") {
  const OccupancyGrid g(60, 40, 0.1);
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const double speed = rng.uniform(0, 1.4), heading = rng.uniform(0, 6.283);
    const UavState s = state(rng.uniform(0.5, 5.5), rng.uniform(0.5, 3.5), speed * std::cos(heading),
                             speed * std::sin(heading));
    TreeParams p;
    const PathTree tree = expand_tree(s, g, p);
    for (const TreeNode& n : tree.nodes) {
      CHECK(n.primitive.end.velocity.norm() <= p.v_max + 1e-9);
      CHECK(n.primitive.at(0.5 * n.primitive.duration).velocity.norm() <= p.v_max + 1e-9);
      CHECK(g.world_to_cell(n.primitive.end.position).has_value());
    }
    // Brute enumeration of admissible prefixes.
    std::size_t count = 0;
    std::function<void(const UavState&, int)> walk = [&](const UavState& from, int depth) {
      if (depth == p.depth) return;
      for (const Eigen::Vector2d& a : p.accel_set) {
        const Primitive prim = Primitive::propagate(from, a, p.tau);
        if (prim.end.velocity.norm() > p.v_max * (1 + 1e-12)) continue;
        if (prim.at(0.5 * p.tau).velocity.norm() > p.v_max * (1 + 1e-12)) continue;
        if (!g.world_to_cell(prim.end.position)) continue;
        ++count;
        walk(prim.end, depth + 1);
      }
    };
    walk(s, 0);
    CHECK(tree.nodes.size() == count);
  }
}

TEST_CASE("primitives follow constant-acceleration kinematics exactly") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const UavState s = state(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Eigen::Vector2d a(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double tau = rng.uniform(0.2, 2.0);
    const Primitive p = Primitive::propagate(s, a, tau);
    CHECK((p.end.position - (s.position + s.velocity * tau + 0.5 * a * tau * tau)).norm() <= 1e-14);
    CHECK((p.end.velocity - (s.velocity + a * tau)).norm() <= 1e-15);
    const BezierSegment<double> seg = p.segment();
    for (double t : {0.0, 0.3 * tau, tau}) {
      const auto k = seg.evaluate(t);
      CHECK((k.pos - p.at(t).position).norm() < 1e-12);
      CHECK((k.vel - p.at(t).velocity).norm() < 1e-12);
      CHECK((k.acc - a).norm() < 1e-11);
    }
  }
}

TEST_CASE("score counts each covered frontier cell once with its weight") {
  OccupancyGrid g(100, 100, 0.1);
  FrontierSet fs;
  for (int x = 40; x < 50; ++x) fs.frontier_a.push_back(g.index(x, 50));
  for (int x = 40; x < 45; ++x) fs.frontier_b.push_back(g.index(x, 52));
  std::sort(fs.frontier_a.begin(), fs.frontier_a.end());
  const Primitive hover = Primitive::propagate(state(4.5, 5.1), Eigen::Vector2d::Zero(), 1.0);
  const GainParams params;
  const std::vector<Primitive> path{hover, Primitive::propagate(hover.end, Eigen::Vector2d::Zero(), 1.0)};
  const PathScore s = score(path, fs, g, CameraFootprint{}, params);
  CHECK(s.gain == 25.0);
  CHECK(s.cost == doctest::Approx(2.0));
  CHECK(s.ratio == doctest::Approx(12.5));

  const Primitive far = Primitive::propagate(state(9.5, 9.5), Eigen::Vector2d(-1, 0), 1.0);
  const PathScore none = score(std::vector<Primitive>{far}, fs, g, CameraFootprint{}, params);
  CHECK(none.gain == 0.0);
  CHECK(none.ratio == 0.0);
  CHECK(none.cost == doctest::Approx(1.1));
}

TEST_CASE("score matches the brute-force sweep oracle") {
  Rng rng(21);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const OccupancyGrid g = oracle::random_explored_belief(80, 60, seed);
    const FrontierSet fs = extract_frontiers(g);
    TreeParams p;
    const PathTree tree = expand_tree(state(rng.uniform(2, 6), rng.uniform(2, 4)), g, p);
    REQUIRE_FALSE(tree.empty());
    const GainParams params;
    for (int k = 0; k < 10; ++k) {
      const int leaf = tree.leaves[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(tree.leaves.size()) - 1))];
      const auto path = tree.path_to(leaf);
      CHECK(score(path, fs, g, CameraFootprint{}, params).gain == brute_gain(path, fs, g, CameraFootprint{}, params));
    }
  }
}

TEST_CASE("select_best equals an exhaustive leaf scan") {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const OccupancyGrid g = oracle::random_explored_belief(80, 60, seed + 100);
    const FrontierSet fs = extract_frontiers(g);
    const UavState s = state(rng.uniform(2, 6), rng.uniform(2, 4), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    const PathTree tree = expand_tree(s, g, TreeParams{});
    REQUIRE_FALSE(tree.empty());
    GainParams params;
    params.g_min = 5.0;
    const Selection sel = select_best(tree, fs, g, CameraFootprint{}, params);

    int best = -1;
    PathScore bs;
    for (int leaf : tree.leaves) {
      const PathScore sc = score(tree.path_to(leaf), fs, g, CameraFootprint{}, params);
      const bool better = best < 0 || sc.ratio > bs.ratio || (sc.ratio == bs.ratio && sc.cost < bs.cost);
      if (better) {
        best = leaf;
        bs = sc;
      }
    }
    CAPTURE(seed);
    CHECK(sel.leaf == best);
    CHECK(sel.score.gain == bs.gain);
    CHECK(sel.score.ratio == doctest::Approx(bs.ratio));
    CHECK(sel.path.size() == tree.path_to(best).size());
    CHECK((sel.status == Selection::Status::Selected) == (bs.ratio >= params.g_min));
  }
}

TEST_CASE("select_best with a single lucrative leaf and with no gain") {
  const OccupancyGrid g(200, 200, 0.1);
  TreeParams p;
  p.depth = 1;
  const PathTree tree = expand_tree(state(10.05, 10.05), g, p);
  const GainParams params;
  CHECK(select_best(tree, FrontierSet{}, g, CameraFootprint{}, params).status ==
        Selection::Status::InsufficientGain);

  // A frontier patch only reachable by the +x primitive (ends 0.5 m east).
  FrontierSet fs;
  for (int y = 95; y <= 105; ++y) fs.frontier_b.push_back(g.index(111, y));
  std::sort(fs.frontier_b.begin(), fs.frontier_b.end());
  const Selection sel = select_best(tree, fs, g, CameraFootprint{}, params);
  REQUIRE(sel.status == Selection::Status::Selected);
  CHECK(sel.path.front().accel.x() > 0.0);
  CHECK_THROWS_AS(select_best(PathTree{}, fs, g, CameraFootprint{}, params), std::invalid_argument);
}

TEST_CASE("global goal selection") {
  const OccupancyGrid g(300, 300, 0.1);
  const GainParams params;
  const Eigen::Vector2d pos(15.05, 15.05);
  CHECK_FALSE(select_global_goal(FrontierSet{}, g, pos, params));

  // Size 10 cluster 5 m away against size 100 cluster 10 m away.
  FrontierSet fs;
  for (int k = 0; k < 10; ++k) fs.frontier_b.push_back(g.index(200, 146 + k));
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) fs.frontier_b.push_back(g.index(245 + x, 145 + y));
  std::sort(fs.frontier_b.begin(), fs.frontier_b.end());
  const auto goal = select_global_goal(fs, g, pos, params);
  REQUIRE(goal);
  CHECK(goal->x() > 24.0);
  CHECK(std::abs(goal->y() - 15.0) <= 0.1);
  const auto cell = g.world_to_cell(*goal);
  REQUIRE(cell);
  CHECK((g.cell_to_world(*cell) - *goal).norm() < 1e-12);

  // Frontier-A fallback with a single line.
  FrontierSet only_a;
  for (int k = 0; k < 20; ++k) only_a.frontier_a.push_back(g.index(50 + k, 80));
  const auto a_goal = select_global_goal(only_a, g, pos, params);
  REQUIRE(a_goal);
  CHECK((*a_goal - centroid(only_a.frontier_a, g)).norm() <= 0.0500001 * std::sqrt(2.0));
}
