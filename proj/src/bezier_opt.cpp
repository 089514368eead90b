#include "colex/ugv_trajectory.hpp"

#include "colex/error.hpp"
#include "colex/qp.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <numbers>

namespace colex {

namespace {

// Gram matrix of the degree-m Bernstein basis on [0, 1].
Eigen::MatrixXd bernstein_gram(int m) {
  Eigen::MatrixXd g(m + 1, m + 1);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j)
      g(i, j) = binomial<double>(m, i) * binomial<double>(m, j) / ((2 * m + 1) * binomial<double>(2 * m, i + j));
  return g;
}

// x' H x == integral over [0, T] of the squared second time derivative of a
// scalar Bezier curve with control points x.
Eigen::MatrixXd acceleration_hessian(int degree, double duration) {
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(degree - 1, degree + 1);
  for (int k = 0; k + 2 <= degree; ++k) {
    d2(k, k) = 1.0;
    d2(k, k + 1) = -2.0;
    d2(k, k + 2) = 1.0;
  }
  const double scale = std::pow(degree * (degree - 1.0), 2) / std::pow(duration, 3);
  return scale * d2.transpose() * bernstein_gram(degree - 2) * d2;
}

struct Families {
  bool box = true;
  bool velocity = true;
  bool acceleration = true;
};

struct Layout {
  int segments;
  int degree;
  int var(int seg, int axis, int k) const { return (2 * seg + axis) * (degree + 1) + k; }
  int size() const { return 2 * segments * (degree + 1); }
};

QuadraticProgram build_program(const Corridor& corridor, const KinematicState<double>& start,
                               const KinematicState<double>& end, std::span<const double> durations,
                               const BezierOptions& opt, const Families& families) {
  const Layout L{static_cast<int>(corridor.boxes.size()), opt.degree};
  const int d = opt.degree;
  const int n = L.size();
  QuadraticProgram qp;
  qp.Q = Eigen::MatrixXd::Zero(n, n);
  qp.c = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < L.segments; ++i) {
    const Eigen::MatrixXd h = 2.0 * acceleration_hessian(d, durations[i]);
    for (int a = 0; a < 2; ++a) qp.Q.block(L.var(i, a, 0), L.var(i, a, 0), d + 1, d + 1) = h;
  }

  // Equalities: end states, then C2 junctions.
  const int rows = 2 * (6 + 3 * (L.segments - 1));
  qp.A = Eigen::MatrixXd::Zero(rows, n);
  qp.b = Eigen::VectorXd::Zero(rows);
  int r = 0;
  const double vel_scale = 1.0 / d, acc_scale = 1.0 / (d * (d - 1.0));
  const int last = L.segments - 1;
  const double t0 = durations[0], tn = durations[last];
  for (int a = 0; a < 2; ++a) {
    qp.A(r, L.var(0, a, 0)) = 1.0;
    qp.b(r++) = start.pos[a];
    qp.A(r, L.var(0, a, 1)) = 1.0;
    qp.A(r, L.var(0, a, 0)) = -1.0;
    qp.b(r++) = start.vel[a] * t0 * vel_scale;
    qp.A(r, L.var(0, a, 2)) = 1.0;
    qp.A(r, L.var(0, a, 1)) = -2.0;
    qp.A(r, L.var(0, a, 0)) = 1.0;
    qp.b(r++) = start.acc[a] * t0 * t0 * acc_scale;

    qp.A(r, L.var(last, a, d)) = 1.0;
    qp.b(r++) = end.pos[a];
    qp.A(r, L.var(last, a, d)) = 1.0;
    qp.A(r, L.var(last, a, d - 1)) = -1.0;
    qp.b(r++) = end.vel[a] * tn * vel_scale;
    qp.A(r, L.var(last, a, d)) = 1.0;
    qp.A(r, L.var(last, a, d - 1)) = -2.0;
    qp.A(r, L.var(last, a, d - 2)) = 1.0;
    qp.b(r++) = end.acc[a] * tn * tn * acc_scale;

    for (int i = 0; i + 1 < L.segments; ++i) {
      const double ratio = durations[i] / durations[i + 1];
      qp.A(r, L.var(i, a, d)) = 1.0;
      qp.A(r++, L.var(i + 1, a, 0)) = -1.0;

      qp.A(r, L.var(i, a, d)) = 1.0;
      qp.A(r, L.var(i, a, d - 1)) = -1.0;
      qp.A(r, L.var(i + 1, a, 1)) = -ratio;
      qp.A(r++, L.var(i + 1, a, 0)) = ratio;

      const double r2 = ratio * ratio;
      qp.A(r, L.var(i, a, d)) = 1.0;
      qp.A(r, L.var(i, a, d - 1)) = -2.0;
      qp.A(r, L.var(i, a, d - 2)) = 1.0;
      qp.A(r, L.var(i + 1, a, 2)) = -r2;
      qp.A(r, L.var(i + 1, a, 1)) = 2.0 * r2;
      qp.A(r++, L.var(i + 1, a, 0)) = -r2;
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> bounds;
  int row = 0;
  auto add = [&](int col, double value) {
    if (std::abs(value) > 1e-15) triplets.emplace_back(row, col, value);
  };

  if (families.box) {
    for (int i = 0; i < L.segments; ++i) {
      Eigen::Vector2d lo = corridor.boxes[i].min().array() + opt.box_margin;
      Eigen::Vector2d hi = corridor.boxes[i].max().array() - opt.box_margin;
      if (i == 0) {
        lo = lo.cwiseMin(start.pos);
        hi = hi.cwiseMax(start.pos);
      }
      if (i == last) {
        lo = lo.cwiseMin(end.pos);
        hi = hi.cwiseMax(end.pos);
      }
      for (int a = 0; a < 2; ++a) {
        for (int k = 0; k <= d; ++k) {
          add(L.var(i, a, k), 1.0);
          bounds.push_back(hi[a]);
          ++row;
          add(L.var(i, a, k), -1.0);
          bounds.push_back(-lo[a]);
          ++row;
        }
      }
    }
  }

  // Octagon inscribed in the disc of the given radius: faces at multiples of 45 degrees.
  const double face = std::cos(std::numbers::pi / 8.0);
  auto add_octagon = [&](int seg, int order, double limit) {
    const double dur = durations[seg];
    const double rhs = order == 1 ? limit * face * dur * vel_scale : limit * face * dur * dur * acc_scale;
    for (int k = 0; k + order <= d; ++k) {
      for (int j = 0; j < 8; ++j) {
        const double nx = std::cos(j * std::numbers::pi / 4.0), ny = std::sin(j * std::numbers::pi / 4.0);
        for (int a = 0; a < 2; ++a) {
          const double na = a == 0 ? nx : ny;
          if (order == 1) {
            add(L.var(seg, a, k + 1), na);
            add(L.var(seg, a, k), -na);
          } else {
            add(L.var(seg, a, k + 2), na);
            add(L.var(seg, a, k + 1), -2.0 * na);
            add(L.var(seg, a, k), na);
          }
        }
        bounds.push_back(rhs);
        ++row;
      }
    }
  };
  for (int i = 0; i < L.segments; ++i) {
    if (families.velocity) add_octagon(i, 1, opt.v_max);
    if (families.acceleration) add_octagon(i, 2, opt.a_max);
  }

  qp.G.resize(row, n);
  qp.G.setFromTriplets(triplets.begin(), triplets.end());
  qp.h = Eigen::Map<Eigen::VectorXd>(bounds.data(), static_cast<Eigen::Index>(bounds.size()));
  return qp;
}

bool solved(const QpResult& r) {
  return r.status == QpStatus::Solved && r.equality_residual < 1e-8 && r.inequality_violation < 1e-9;
}

}  // namespace

Trajectory optimize_bezier(const Corridor& corridor, const KinematicState<double>& start,
                           const KinematicState<double>& end, std::span<const double> durations,
                           const BezierOptions& options) {
  if (corridor.boxes.empty()) throw InvalidPathError("corridor has no boxes");
  if (durations.size() != corridor.boxes.size())
    throw std::invalid_argument("one duration per corridor box is required");
  if (options.degree < 5) throw std::invalid_argument("C2 junctions with free interior need degree >= 5");
  for (double t : durations)
    if (!(t > 0.0)) throw std::invalid_argument("segment durations must be positive");
  if (!corridor.boxes.front().contains(start.pos))
    throw InfeasibleError("corridor", "start position lies outside the first box");
  if (!corridor.boxes.back().contains(end.pos))
    throw InfeasibleError("corridor", "end position lies outside the last box");

  const QuadraticProgram qp = build_program(corridor, start, end, durations, options, {});
  const QpResult result = solve_qp(qp);
  if (!solved(result)) {
    // Add constraint families one at a time to name the first that breaks.
    const Families trials[] = {{true, false, false}, {true, true, false}};
    const char* names[] = {"corridor", "velocity"};
    for (int k = 0; k < 2; ++k) {
      if (!solved(solve_qp(build_program(corridor, start, end, durations, options, trials[k]))))
        throw InfeasibleError(names[k], std::string("trajectory QP infeasible: ") + names[k] + " constraints");
    }
    throw InfeasibleError("acceleration", "trajectory QP infeasible: acceleration constraints");
  }

  const Layout L{static_cast<int>(corridor.boxes.size()), options.degree};
  std::vector<BezierSegment<double>> segments;
  for (int i = 0; i < L.segments; ++i) {
    BezierSegment<double> seg;
    seg.duration = durations[i];
    seg.control.resize(2, options.degree + 1);
    for (int a = 0; a < 2; ++a)
      for (int k = 0; k <= options.degree; ++k) seg.control(a, k) = result.x[L.var(i, a, k)];
    segments.push_back(std::move(seg));
  }
  return Trajectory(std::move(segments));
}

double acceleration_cost(const Trajectory& traj) {
  double cost = 0.0;
  for (const auto& seg : traj.segments()) {
    if (seg.degree() < 2) continue;
    const Eigen::MatrixXd h = acceleration_hessian(seg.degree(), seg.duration);
    for (int a = 0; a < 2; ++a) {
      const Eigen::VectorXd x = seg.control.row(a).transpose();
      cost += x.dot(h * x);
    }
  }
  return cost;
}

Trajectory straight_seed(std::span<const Eigen::Vector2d> waypoints, std::span<const double> durations,
                         int degree) {
  if (waypoints.size() != durations.size() + 1) throw std::invalid_argument("need one duration per leg");
  std::vector<BezierSegment<double>> segments;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    BezierSegment<double> seg;
    seg.duration = durations[i];
    seg.control.resize(2, degree + 1);
    for (int k = 0; k <= degree; ++k) seg.control.col(k) = 2 * k <= degree ? waypoints[i] : waypoints[i + 1];
    segments.push_back(std::move(seg));
  }
  return Trajectory(std::move(segments));
}

}  // namespace colex
