#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace colex {

// minimize   1/2 x'Qx + c'x
// subject to A x  = b
//            G x <= h
struct QuadraticProgram {
  Eigen::MatrixXd Q;
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::SparseMatrix<double, Eigen::RowMajor> G;
  Eigen::VectorXd h;
};

struct QpOptions {
  int max_iterations = 80;
  double feasibility_tolerance = 1e-10;
  double optimality_tolerance = 1e-10;
  double gap_tolerance = 1e-11;
};

enum class QpStatus { Solved, NotConverged };

struct QpResult {
  QpStatus status = QpStatus::NotConverged;
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
  double equality_residual = 0.0;    // max |Ax - b|
  double inequality_violation = 0.0;  // max (Gx - h)_+
};

// Primal-dual interior point with Mehrotra predictor-corrector steps. Q must
// be positive semidefinite and A of full row rank. A problem with no
// feasible point ends as NotConverged.
QpResult solve_qp(const QuadraticProgram& qp, const QpOptions& options = {});

}  // namespace colex
