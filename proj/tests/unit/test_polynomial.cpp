#include "colex/bezier.hpp"
#include "colex/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace colex;

namespace {

ControlPoints<double> random_control(Rng& rng, int degree) {
  ControlPoints<double> c(2, degree + 1);
  for (int k = 0; k <= degree; ++k) c.col(k) << rng.uniform(-3, 3), rng.uniform(-3, 3);
  return c;
}

// Direct Bernstein sum, independent of de Casteljau.
Eigen::Vector2d bernstein_sum(const ControlPoints<double>& c, double s) {
  const int n = static_cast<int>(c.cols()) - 1;
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  for (int k = 0; k <= n; ++k) p += binomial<double>(n, k) * std::pow(s, k) * std::pow(1 - s, n - k) * c.col(k);
  return p;
}

}  // namespace

TEST_CASE("binomial coefficients") {
  CHECK(binomial<double>(5, 0) == 1.0);
  CHECK(binomial<double>(5, 2) == 10.0);
  CHECK(binomial<double>(6, 3) == 20.0);
  CHECK(binomial<double>(4, 5) == 0.0);
}

TEST_CASE("de Casteljau equals the Bernstein sum and hits the end points") {
  Rng rng(1);
  for (int degree = 1; degree <= 7; ++degree) {
    const ControlPoints<double> c = random_control(rng, degree);
    CHECK((de_casteljau(c, 0.0) - c.col(0)).norm() == 0.0);
    CHECK((de_casteljau(c, 1.0) - c.col(degree)).norm() < 1e-12);
    for (double s : {0.1, 0.37, 0.5, 0.93}) CHECK((de_casteljau(c, s) - bernstein_sum(c, s)).norm() < 1e-12);
  }
}

TEST_CASE("power and Bernstein bases convert both ways") {
  Rng rng(2);
  for (int degree = 1; degree <= 7; ++degree) {
    const ControlPoints<double> c = random_control(rng, degree);
    const ControlPoints<double> p = bernstein_to_power(c);
    for (double s : {0.0, 0.25, 0.8, 1.0}) {
      Eigen::Vector2d v = Eigen::Vector2d::Zero();
      for (int j = 0; j <= degree; ++j) v += std::pow(s, j) * p.col(j);
      CHECK((v - de_casteljau(c, s)).norm() < 1e-10);
    }
    CHECK((power_to_bernstein(p, degree) - c).norm() < 1e-10);
  }
  // Degree elevation: a cubic in power form written as a quintic.
  ControlPoints<double> cubic(2, 4);
  cubic << 1, 2, 0, -1, 0, 1, 1, 3;
  const ControlPoints<double> elevated = power_to_bernstein(cubic, 5);
  for (double s : {0.0, 0.3, 1.0}) {
    const Eigen::Vector2d direct = cubic.col(0) + s * cubic.col(1) + s * s * cubic.col(2) + s * s * s * cubic.col(3);
    CHECK((de_casteljau(elevated, s) - direct).norm() < 1e-12);
  }
}

TEST_CASE("hodograph matches finite differences") {
  Rng rng(3);
  const ControlPoints<double> c = random_control(rng, 5);
  const ControlPoints<double> d = hodograph(c);
  const double h = 1e-6;
  for (double s : {0.2, 0.5, 0.7}) {
    const Eigen::Vector2d fd = (de_casteljau(c, s + h) - de_casteljau(c, s - h)) / (2 * h);
    CHECK((fd - de_casteljau(d, s)).norm() < 1e-6);
  }
}

TEST_CASE("segment derivatives scale with duration") {
  Rng rng(4);
  BezierSegment<double> seg{random_control(rng, 5), 2.5};
  const double h = 1e-4;
  for (double t : {0.3, 1.2, 2.2}) {
    const auto s = seg.evaluate(t);
    const auto lo = seg.evaluate(t - h), hi = seg.evaluate(t + h);
    CHECK(((hi.pos - lo.pos) / (2 * h) - s.vel).norm() < 1e-4);
    CHECK(((hi.vel - lo.vel) / (2 * h) - s.acc).norm() < 1e-4);
  }
  CHECK((seg.evaluate(0).vel - seg.velocity_control().col(0)).norm() < 1e-12);
  CHECK((seg.evaluate(2.5).acc - seg.acceleration_control().col(3)).norm() < 1e-9);
}

TEST_CASE("piecewise sampling clamps and flags") {
  Rng rng(5);
  ControlPoints<double> a = random_control(rng, 5), b = random_control(rng, 5);
  b.col(0) = a.col(5);
  const Trajectory traj({{a, 1.0}, {b, 2.0}});
  CHECK(traj.total_duration() == 3.0);
  const auto start = traj.sample(0.0);
  CHECK_FALSE(start.clamped);
  CHECK((start.pos - a.col(0)).norm() == 0.0);
  const auto end = traj.sample(3.0);
  CHECK((end.pos - b.col(5)).norm() < 1e-12);
  const auto before = traj.sample(-1.0);
  CHECK(before.clamped);
  CHECK((before.pos - a.col(0)).norm() == 0.0);
  const auto after = traj.sample(4.0);
  CHECK(after.clamped);
  CHECK((after.pos - b.col(5)).norm() < 1e-12);
  CHECK((traj.sample(1.5).pos - de_casteljau(b, 0.25)).norm() < 1e-12);
  CHECK(junction_mismatch(traj).pos < 1e-12);
  CHECK_THROWS_AS(Trajectory({{a, 0.0}}), std::invalid_argument);
  CHECK_THROWS(Trajectory().sample(0.0));
}

TEST_CASE("segments work in extended precision") {
  ControlPoints<long double> c(2, 3);
  c << 0, 1, 2, 0, 0, 0;
  const BezierSegment<long double> seg{c, 2.0L};
  const auto s = seg.evaluate(1.0L);
  CHECK(static_cast<double>(s.pos.x()) == doctest::Approx(1.0));
  CHECK(static_cast<double>(s.vel.x()) == doctest::Approx(1.0));
}

TEST_CASE("trajectory csv export") {
  ControlPoints<double> c = ControlPoints<double>::Zero(2, 6);
  for (int k = 0; k < 6; ++k) c(0, k) = k / 5.0;
  const Trajectory traj({{c, 1.0}});
  const std::string csv = trajectory_to_csv(traj);
  CHECK(csv.rfind("t,x,y,vx,vy,ax,ay\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 101);
  CHECK(csv.find("1.000000,1,0,") != std::string::npos);
  CHECK(trajectory_to_csv(Trajectory()) == "t,x,y,vx,vy,ax,ay\n");
  const std::string coarse = trajectory_to_csv(traj, 10);
  CHECK(std::count(coarse.begin(), coarse.end(), '\n') == 12);
}
