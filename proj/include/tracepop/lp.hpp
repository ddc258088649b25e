#pragma once

#include <Eigen/Core>

namespace tracepop {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

struct LpOptions {
  double pivot_tol = 1e-10;
  double feas_tol = 1e-9;
  double cost_tol = 1e-9;
  int refactor_every = 200;
  int bland_after = 100;  // consecutive degenerate pivots before Bland pricing
  int max_iter = -1;      // < 0: derived from the problem size
};

struct LpResult {
  LpStatus status = LpStatus::NumericalFailure;
  double objective = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd dual;           // row multipliers at the final basis
  Eigen::VectorXd reduced_costs;  // c - A^T dual
  double primal_residual = 0.0;   // ||Ax - b||_inf, recomputed
  double comp_slack_residual = 0.0;
  int iterations = 0;
};

// Two-phase revised simplex for min c'x s.t. Ax = b, x >= 0, dense A with an
// explicitly maintained basis inverse.
LpResult solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c, const LpOptions& options = {});

}  // namespace tracepop
