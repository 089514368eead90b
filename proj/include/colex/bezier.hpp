#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace colex {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using ControlPoints = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

// Binomial coefficient as a floating value; exact for the small degrees used here.
template <typename Scalar>
Scalar binomial(int n, int k) {
  if (k < 0 || k > n) return Scalar(0);
  Scalar r(1);
  for (int i = 1; i <= k; ++i) r = r * Scalar(n - k + i) / Scalar(i);
  return r;
}

// Point on the curve at normalized parameter s in [0, 1].
template <typename Derived>
Vector2<typename Derived::Scalar> de_casteljau(const Eigen::MatrixBase<Derived>& control,
                                                typename Derived::Scalar s) {
  using Scalar = typename Derived::Scalar;
  ControlPoints<Scalar> work = control;
  for (Eigen::Index r = work.cols() - 1; r > 0; --r)
    for (Eigen::Index k = 0; k < r; ++k) work.col(k) = (Scalar(1) - s) * work.col(k) + s * work.col(k + 1);
  return work.col(0);
}

// Control points of d/ds of the curve (degree drops by one).
template <typename Derived>
ControlPoints<typename Derived::Scalar> hodograph(const Eigen::MatrixBase<Derived>& control) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = control.cols() - 1;
  if (n < 1) return ControlPoints<Scalar>::Zero(2, 1);
  ControlPoints<Scalar> out(2, n);
  for (Eigen::Index k = 0; k < n; ++k) out.col(k) = Scalar(n) * (control.col(k + 1) - control.col(k));
  return out;
}

// Bernstein control points of sum_j coeffs.col(j) * s^j, degree `degree`
// (>= coeffs.cols() - 1).
template <typename Derived>
ControlPoints<typename Derived::Scalar> power_to_bernstein(const Eigen::MatrixBase<Derived>& coeffs, int degree) {
  using Scalar = typename Derived::Scalar;
  ControlPoints<Scalar> out = ControlPoints<Scalar>::Zero(2, degree + 1);
  for (int k = 0; k <= degree; ++k)
    for (int j = 0; j <= std::min<int>(k, static_cast<int>(coeffs.cols()) - 1); ++j)
      out.col(k) += binomial<Scalar>(k, j) / binomial<Scalar>(degree, j) * coeffs.col(j);
  return out;
}

// Inverse of power_to_bernstein: monomial coefficients in s.
template <typename Derived>
ControlPoints<typename Derived::Scalar> bernstein_to_power(const Eigen::MatrixBase<Derived>& control) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(control.cols()) - 1;
  ControlPoints<Scalar> out = ControlPoints<Scalar>::Zero(2, n + 1);
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= j; ++k) {
      const Scalar sign = ((j - k) % 2 == 0) ? Scalar(1) : Scalar(-1);
      out.col(j) += sign * binomial<Scalar>(n, j) * binomial<Scalar>(j, k) * control.col(k);
    }
  }
  return out;
}

template <typename Scalar>
struct KinematicState {
  Vector2<Scalar> pos = Vector2<Scalar>::Zero();
  Vector2<Scalar> vel = Vector2<Scalar>::Zero();
  Vector2<Scalar> acc = Vector2<Scalar>::Zero();
};

template <typename Scalar>
struct TrajectorySample : KinematicState<Scalar> {
  bool clamped = false;
};

// One polynomial piece in Bernstein form over local time [0, duration].
template <typename Scalar>
struct BezierSegment {
  ControlPoints<Scalar> control;
  Scalar duration = Scalar(1);

  int degree() const { return static_cast<int>(control.cols()) - 1; }

  // Position, velocity and acceleration at local time t.
  KinematicState<Scalar> evaluate(Scalar t) const {
    const Scalar s = t / duration;
    KinematicState<Scalar> out;
    out.pos = de_casteljau(control, s);
    if (degree() >= 1) {
      const ControlPoints<Scalar> d1 = hodograph(control);
      out.vel = de_casteljau(d1, s) / duration;
      if (degree() >= 2) out.acc = de_casteljau(hodograph(d1), s) / (duration * duration);
    }
    return out;
  }

  // Control points of the velocity / acceleration curves in time units.
  ControlPoints<Scalar> velocity_control() const { return hodograph(control) / duration; }
  ControlPoints<Scalar> acceleration_control() const {
    return hodograph(hodograph(control)) / (duration * duration);
  }
};

template <typename Scalar>
class PiecewiseTrajectory {
 public:
  PiecewiseTrajectory() = default;
  explicit PiecewiseTrajectory(std::vector<BezierSegment<Scalar>> segments) : segments_(std::move(segments)) {
    for (const auto& seg : segments_)
      if (!(seg.duration > Scalar(0))) throw std::invalid_argument("segment duration must be positive");
  }

  const std::vector<BezierSegment<Scalar>>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }

  Scalar total_duration() const {
    Scalar total(0);
    for (const auto& seg : segments_) total += seg.duration;
    return total;
  }

  // Times outside [0, total_duration] are clamped and flagged.
  TrajectorySample<Scalar> sample(Scalar t) const {
    if (segments_.empty()) throw std::logic_error("sampling an empty trajectory");
    TrajectorySample<Scalar> out;
    const Scalar total = total_duration();
    if (t < Scalar(0) || t > total) {
      out.clamped = true;
      t = std::clamp(t, Scalar(0), total);
    }
    std::size_t i = 0;
    Scalar start(0);
    while (i + 1 < segments_.size() && t > start + segments_[i].duration) {
      start += segments_[i].duration;
      ++i;
    }
    const KinematicState<Scalar> state =
        segments_[i].evaluate(std::clamp(t - start, Scalar(0), segments_[i].duration));
    out.pos = state.pos;
    out.vel = state.vel;
    out.acc = state.acc;
    return out;
  }

 private:
  std::vector<BezierSegment<Scalar>> segments_;
};

using Trajectory = PiecewiseTrajectory<double>;

struct JunctionMismatch {
  double pos = 0.0;
  double vel = 0.0;
  double acc = 0.0;
};

// Largest discontinuity in position/velocity/acceleration across junctions.
template <typename Scalar>
JunctionMismatch junction_mismatch(const PiecewiseTrajectory<Scalar>& traj) {
  JunctionMismatch m;
  const auto& segs = traj.segments();
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    const auto a = segs[i].evaluate(segs[i].duration);
    const auto b = segs[i + 1].evaluate(Scalar(0));
    m.pos = std::max<double>(m.pos, (a.pos - b.pos).norm());
    m.vel = std::max<double>(m.vel, (a.vel - b.vel).norm());
    m.acc = std::max<double>(m.acc, (a.acc - b.acc).norm());
  }
  return m;
}

// CSV rows `t,x,y,vx,vy,ax,ay` sampled at `rate_hz`, always including the end time.
inline std::string trajectory_to_csv(const Trajectory& traj, double rate_hz = 100.0) {
  std::string out = "t,x,y,vx,vy,ax,ay\n";
  if (traj.empty()) return out;
  const double total = traj.total_duration();
  const long steps = static_cast<long>(total * rate_hz + 1e-9);
  char buf[256];
  for (long k = 0; k <= steps + 1; ++k) {
    double t = static_cast<double>(k) / rate_hz;
    if (k == steps + 1) {
      if (total - static_cast<double>(steps) / rate_hz < 1e-12) break;
      t = total;
    }
    const auto s = traj.sample(t);
    std::snprintf(buf, sizeof buf, "%.6f,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", t, s.pos.x(), s.pos.y(), s.vel.x(),
                  s.vel.y(), s.acc.x(), s.acc.y());
    out += buf;
  }
  return out;
}

}  // namespace colex
