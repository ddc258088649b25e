#include "tracepop/lp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

namespace tracepop {

namespace {

struct SimplexWorkspace {
  Eigen::MatrixXd A;  // m x (n + m), artificials appended
  Eigen::VectorXd b;  // >= 0 after row flips
  Eigen::MatrixXd binv;
  Eigen::VectorXd xb;
  std::vector<int> basis;       // column per row
  std::vector<char> in_basis;   // per column
  int m = 0;
  int n = 0;  // structural columns
  int pivots_since_refactor = 0;
  bool refactor() {
    Eigen::MatrixXd basis_mat(m, m);
    for (int r = 0; r < m; ++r) basis_mat.col(r) = A.col(basis[r]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_mat);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(m, m);
    binv = lu.solve(identity);
    if (!binv.allFinite()) return false;
    xb = binv * b;
    pivots_since_refactor = 0;
    return true;
  }
};

// One simplex phase over the given cost; prices structural columns only
// (artificials may leave the basis but never re-enter).
LpStatus run_phase(SimplexWorkspace& w, const Eigen::VectorXd& cost, const LpOptions& opt,
                   int price_limit, int max_iter, int& iterations) {
  const int m = w.m;
  int degenerate_streak = 0;
  while (true) {
    if (iterations >= max_iter) return LpStatus::IterationLimit;
    ++iterations;

    Eigen::VectorXd cb(m);
    for (int r = 0; r < m; ++r) cb[r] = cost[w.basis[r]];
    const Eigen::VectorXd pi = w.binv.transpose() * cb;

    const bool bland = degenerate_streak >= opt.bland_after;
    int enter = -1;
    double best = -opt.cost_tol;
    for (int j = 0; j < price_limit; ++j) {
      if (w.in_basis[j]) continue;
      const double d = cost[j] - pi.dot(w.A.col(j));
      if (d < best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter < 0) return LpStatus::Optimal;

    const Eigen::VectorXd dir = w.binv * w.A.col(enter);
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      if (dir[r] <= opt.pivot_tol) continue;
      const double ratio = std::max(w.xb[r], 0.0) / dir[r];
      if (ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 && (leave < 0 || w.basis[r] < w.basis[leave]))) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave < 0) return LpStatus::Unbounded;

    degenerate_streak = best_ratio < 1e-12 ? degenerate_streak + 1 : 0;

    w.in_basis[w.basis[leave]] = 0;
    w.in_basis[enter] = 1;
    w.basis[leave] = enter;

    const double pivot = dir[leave];
    w.xb -= best_ratio * dir;
    w.xb[leave] = best_ratio;

    Eigen::RowVectorXd pivot_row = w.binv.row(leave) / pivot;
    for (int r = 0; r < m; ++r) {
      if (r == leave) continue;
      w.binv.row(r) -= dir[r] * pivot_row;
    }
    w.binv.row(leave) = pivot_row;

    if (++w.pivots_since_refactor >= opt.refactor_every) {
      if (!w.refactor()) return LpStatus::NumericalFailure;
    }
  }
}

}  // namespace

LpResult solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c, const LpOptions& options) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  LpResult result;
  result.x = Eigen::VectorXd::Zero(n);
  result.dual = Eigen::VectorXd::Zero(m);
  result.reduced_costs = c;

  if (m == 0) {
    for (int j = 0; j < n; ++j) {
      if (c[j] < -options.cost_tol) {
        result.status = LpStatus::Unbounded;
        return result;
      }
    }
    result.status = LpStatus::Optimal;
    return result;
  }

  SimplexWorkspace w;
  w.m = m;
  w.n = n;
  w.A.resize(m, n + m);
  w.A.leftCols(n) = A;
  w.A.rightCols(m) = Eigen::MatrixXd::Identity(m, m);
  w.b = b;
  for (int r = 0; r < m; ++r) {
    if (w.b[r] < 0) {
      w.b[r] = -w.b[r];
      w.A.row(r) = -w.A.row(r);
    }
  }
  w.basis.resize(m);
  w.in_basis.assign(n + m, 0);
  for (int r = 0; r < m; ++r) {
    w.basis[r] = n + r;
    w.in_basis[n + r] = 1;
  }
  w.binv = Eigen::MatrixXd::Identity(m, m);
  w.xb = w.b;

  const int max_iter =
      options.max_iter > 0 ? options.max_iter : 20000 + 50 * (m + n);
  int iterations = 0;

  // Phase 1: minimize the artificial sum.
  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m);
  phase1_cost.tail(m).setOnes();
  LpStatus status = run_phase(w, phase1_cost, options, n, max_iter, iterations);
  result.iterations = iterations;
  if (status == LpStatus::IterationLimit || status == LpStatus::NumericalFailure) {
    result.status = status;
    return result;
  }
  double artificial_sum = 0.0;
  for (int r = 0; r < m; ++r) {
    if (w.basis[r] >= n) artificial_sum += std::max(w.xb[r], 0.0);
  }
  if (artificial_sum > options.feas_tol) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Degenerate basic artificials: swap in any structural column with a
  // usable pivot element; rows with none are redundant and keep their
  // zero-valued artificial.
  for (int r = 0; r < m; ++r) {
    if (w.basis[r] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (w.in_basis[j]) continue;
      const double elem = w.binv.row(r).dot(w.A.col(j));
      if (std::abs(elem) <= 1e-8) continue;
      w.in_basis[w.basis[r]] = 0;
      w.in_basis[j] = 1;
      w.basis[r] = j;
      if (!w.refactor()) {
        result.status = LpStatus::NumericalFailure;
        return result;
      }
      break;
    }
  }

  // Phase 2 over the true cost; artificial columns keep zero cost but are
  // never priced for entry.
  Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(n + m);
  phase2_cost.head(n) = c;
  status = run_phase(w, phase2_cost, options, n, max_iter, iterations);
  result.iterations = iterations;
  if (status != LpStatus::Optimal) {
    result.status = status;
    return result;
  }
  if (!w.refactor()) {
    result.status = LpStatus::NumericalFailure;
    return result;
  }

  for (int r = 0; r < m; ++r) {
    if (w.basis[r] < n) result.x[w.basis[r]] = std::max(w.xb[r], 0.0);
  }
  Eigen::VectorXd cb(m);
  for (int r = 0; r < m; ++r) cb[r] = phase2_cost[w.basis[r]];
  Eigen::VectorXd pi = w.binv.transpose() * cb;
  // Undo the phase-0 row flips so the duals refer to the caller's rows.
  for (int r = 0; r < m; ++r) {
    if (b[r] < 0) pi[r] = -pi[r];
  }
  result.dual = pi;
  result.reduced_costs = c - A.transpose() * pi;
  result.objective = c.dot(result.x);
  result.primal_residual = (A * result.x - b).lpNorm<Eigen::Infinity>();
  result.comp_slack_residual = 0.0;
  for (int j = 0; j < n; ++j) {
    result.comp_slack_residual =
        std::max(result.comp_slack_residual, std::abs(result.x[j] * result.reduced_costs[j]));
  }
  result.status = LpStatus::Optimal;
  return result;
}

}  // namespace tracepop
