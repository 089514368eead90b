#include "colex/error.hpp"
#include "colex/uav_planner.hpp"

#include <Eigen/LU>

#include <cmath>

namespace colex {

namespace {

// Row of d^k/dt^k [1, t, ..., t^5] evaluated at t.
Eigen::Matrix<double, 1, 6> derivative_row(int k, double t) {
  Eigen::Matrix<double, 1, 6> row = Eigen::Matrix<double, 1, 6>::Zero();
  for (int j = k; j < 6; ++j) {
    double factor = 1.0;
    for (int m = 0; m < k; ++m) factor *= (j - m);
    row(j) = factor * std::pow(t, j - k);
  }
  return row;
}

}  // namespace

std::vector<Eigen::Matrix<double, 2, 6>> min_jerk_coefficients(std::span<const Eigen::Vector2d> waypoints,
                                                                const KinematicState<double>& start,
                                                                const KinematicState<double>& end,
                                                                std::span<const double> durations) {
  if (waypoints.size() < 2) throw DegenerateInputError("min-jerk needs at least two waypoints");
  if (durations.size() + 1 != waypoints.size())
    throw DegenerateInputError("min-jerk needs one duration per waypoint gap");
  for (double t : durations)
    if (!(t > 0.0) || !std::isfinite(t)) throw DegenerateInputError("min-jerk segment durations must be positive");

  const int segs = static_cast<int>(durations.size());
  const int n = 6 * segs;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 2);
  int r = 0;
  for (int k = 0; k < 3; ++k) {
    m.block<1, 6>(r, 0) = derivative_row(k, 0.0);
    rhs.row(r++) = (k == 0 ? waypoints.front() : k == 1 ? start.vel : start.acc).transpose();
  }
  for (int i = 0; i + 1 < segs; ++i) {
    m.block<1, 6>(r, 6 * i) = derivative_row(0, durations[i]);
    rhs.row(r++) = waypoints[i + 1].transpose();
    m.block<1, 6>(r, 6 * (i + 1)) = derivative_row(0, 0.0);
    rhs.row(r++) = waypoints[i + 1].transpose();
    for (int k = 1; k <= 4; ++k) {
      m.block<1, 6>(r, 6 * i) = derivative_row(k, durations[i]);
      m.block<1, 6>(r, 6 * (i + 1)) = -derivative_row(k, 0.0);
      ++r;
    }
  }
  const double t_end = durations.back();
  for (int k = 0; k < 3; ++k) {
    m.block<1, 6>(r, 6 * (segs - 1)) = derivative_row(k, t_end);
    rhs.row(r++) = (k == 0 ? waypoints.back() : k == 1 ? end.vel : end.acc).transpose();
  }

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) throw DegenerateInputError("min-jerk boundary system is singular");
  const Eigen::MatrixXd sol = lu.solve(rhs);

  std::vector<Eigen::Matrix<double, 2, 6>> coeffs(segs);
  for (int i = 0; i < segs; ++i) coeffs[i] = sol.middleRows(6 * i, 6).transpose();
  return coeffs;
}

Trajectory min_jerk(std::span<const Eigen::Vector2d> waypoints, const KinematicState<double>& start,
                    const KinematicState<double>& end, std::span<const double> durations) {
  const auto coeffs = min_jerk_coefficients(waypoints, start, end, durations);
  std::vector<BezierSegment<double>> segments;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    // Rescale t^j to s^j with s = t / T before changing basis.
    Eigen::Matrix<double, 2, 6> in_s = coeffs[i];
    double scale = 1.0;
    for (int j = 0; j < 6; ++j, scale *= durations[i]) in_s.col(j) *= scale;
    segments.push_back({power_to_bernstein(in_s, 5), durations[i]});
  }
  return Trajectory(std::move(segments));
}

double jerk_cost(const Trajectory& traj) {
  double cost = 0.0;
  for (const auto& seg : traj.segments()) {
    if (seg.degree() < 3) continue;
    // Jerk of a degree-n Bezier is a degree n-3 polynomial; integrate its
    // square exactly in the monomial basis.
    const ControlPoints<double> jerk = hodograph(hodograph(hodograph(seg.control)));
    const ControlPoints<double> poly = bernstein_to_power(jerk);
    double unit = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (Eigen::Index i = 0; i < poly.cols(); ++i)
        for (Eigen::Index j = 0; j < poly.cols(); ++j)
          unit += poly(a, i) * poly(a, j) / static_cast<double>(i + j + 1);
    }
    // d/dt = (1/T) d/ds and dt = T ds.
    cost += unit / std::pow(seg.duration, 5);
  }
  return cost;
}

}  // namespace colex
