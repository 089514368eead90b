#include "colex/qp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace colex {

namespace {

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

// Largest alpha in (0, 1] keeping v + alpha * dv >= 0.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  return alpha;
}

}  // namespace

QpResult solve_qp(const QuadraticProgram& qp, const QpOptions& options) {
  const Eigen::Index n = qp.Q.rows();
  const Eigen::Index p = qp.A.rows();
  const Eigen::Index m = qp.G.rows();
  const Eigen::MatrixXd At = qp.A.transpose();
  const Eigen::SparseMatrix<double, Eigen::ColMajor> Gt = qp.G.transpose();

  QpResult result;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd z = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd s = Eigen::VectorXd::Ones(m);

  Eigen::MatrixXd K(n + p, n + p);
  const double reg = 1e-13;

  // Start from the equality-constrained minimizer with a unit barrier.
  {
    K.setZero();
    K.topLeftCorner(n, n) = qp.Q;
    if (m > 0) K.topLeftCorner(n, n) += Eigen::MatrixXd(Gt * qp.G);
    K.topLeftCorner(n, n).diagonal().array() += 1e-9;
    K.topRightCorner(n, p) = At;
    K.bottomLeftCorner(p, n) = qp.A;
    K.bottomRightCorner(p, p).diagonal().setConstant(-reg);
    Eigen::VectorXd rhs(n + p);
    rhs.head(n) = -qp.c + (m > 0 ? Eigen::VectorXd(Gt * qp.h) : Eigen::VectorXd::Zero(n));
    rhs.tail(p) = qp.b;
    const Eigen::VectorXd sol = K.partialPivLu().solve(rhs);
    x = sol.head(n);
    if (m > 0) {
      const Eigen::VectorXd slack = qp.h - qp.G * x;
      s = slack.cwiseMax(1.0);
      z.setOnes();
    }
  }

  const double b_scale = 1.0 + inf_norm(qp.b);
  const double h_scale = 1.0 + inf_norm(qp.h);
  const double c_scale = 1.0 + inf_norm(qp.c);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter;
    const Eigen::VectorXd Gx = m > 0 ? Eigen::VectorXd(qp.G * x) : Eigen::VectorXd();
    const Eigen::VectorXd rd = qp.Q * x + qp.c + At * y + (m > 0 ? Eigen::VectorXd(Gt * z) : Eigen::VectorXd::Zero(n));
    const Eigen::VectorXd rp = qp.A * x - qp.b;
    const Eigen::VectorXd ri = m > 0 ? Eigen::VectorXd(Gx + s - qp.h) : Eigen::VectorXd();
    const double mu = m > 0 ? s.dot(z) / static_cast<double>(m) : 0.0;

    if (!rd.allFinite() || !rp.allFinite() || !std::isfinite(mu)) break;
    if (inf_norm(rp) <= options.feasibility_tolerance * b_scale &&
        inf_norm(ri) <= options.feasibility_tolerance * h_scale &&
        inf_norm(rd) <= options.optimality_tolerance * c_scale && mu <= options.gap_tolerance) {
      result.status = QpStatus::Solved;
      break;
    }

    const Eigen::VectorXd w = m > 0 ? Eigen::VectorXd(z.cwiseQuotient(s)) : Eigen::VectorXd();
    K.setZero();
    K.topLeftCorner(n, n) = qp.Q;
    if (m > 0) {
      // G' W G accumulated row by row; rows of G are short.
      for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator a(qp.G, r); a; ++a)
          for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator b(qp.G, r); b; ++b)
            K(a.col(), b.col()) += w[r] * a.value() * b.value();
      }
    }
    K.topLeftCorner(n, n).diagonal().array() += reg;
    K.topRightCorner(n, p) = At;
    K.bottomLeftCorner(p, n) = qp.A;
    K.bottomRightCorner(p, p).diagonal().setConstant(-reg);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);

    // Newton direction for complementarity target rc.
    auto direction = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dx, Eigen::VectorXd& dy, Eigen::VectorXd& dz,
                         Eigen::VectorXd& ds) {
      Eigen::VectorXd rhs(n + p);
      rhs.head(n) = -rd;
      if (m > 0) {
        const Eigen::VectorXd t = (rc + z.cwiseProduct(ri)).cwiseQuotient(s);
        rhs.head(n) -= Gt * t;
      }
      rhs.tail(p) = -rp;
      const Eigen::VectorXd sol = lu.solve(rhs);
      dx = sol.head(n);
      dy = sol.tail(p);
      if (m > 0) {
        const Eigen::VectorXd Gdx = qp.G * dx;
        ds = -ri - Gdx;
        dz = (rc - z.cwiseProduct(ds)).cwiseQuotient(s);
      }
    };

    Eigen::VectorXd dx, dy, dz, ds;
    if (m == 0) {
      direction(Eigen::VectorXd(), dx, dy, dz, ds);
      x += dx;
      y += dy;
      continue;
    }

    direction(-s.cwiseProduct(z), dx, dy, dz, ds);
    const double alpha_aff = std::min(max_step(s, ds), max_step(z, dz));
    const double mu_aff = (s + alpha_aff * ds).dot(z + alpha_aff * dz) / static_cast<double>(m);
    const double sigma = std::pow(mu_aff / mu, 3);

    Eigen::VectorXd rc = -s.cwiseProduct(z) - ds.cwiseProduct(dz);
    rc.array() += sigma * mu;
    direction(rc, dx, dy, dz, ds);
    const double alpha = std::min(1.0, 0.99 * std::min(max_step(s, ds), max_step(z, dz)));
    x += alpha * dx;
    y += alpha * dy;
    z += alpha * dz;
    s += alpha * ds;
  }

  result.x = x;
  result.objective = 0.5 * x.dot(qp.Q * x) + qp.c.dot(x);
  result.equality_residual = inf_norm(qp.A * x - qp.b);
  if (m > 0) result.inequality_violation = std::max(0.0, (qp.G * x - qp.h).maxCoeff());
  if (!x.allFinite()) result.status = QpStatus::NotConverged;
  return result;
}

}  // namespace colex
