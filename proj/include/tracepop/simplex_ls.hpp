#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace tracepop {

// Euclidean projection onto the unit simplex, exact (sort based).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

// min 1/2 xi' Q xi + c' xi over a product of unit simplexes; groups are
// (offset, count) segments of xi.  Accelerated projected gradient with the
// fixed-point residual driven to <= 1e-8.
Eigen::VectorXd simplex_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                           const std::vector<std::pair<int, int>>& groups);

// min 1/2 || b - sum_j xi_j d_j ||^2 over the unit simplex.
Eigen::VectorXd simplex_ls(const std::vector<Eigen::VectorXd>& d, const Eigen::VectorXd& b);

// Same with one simplex per (offset, count) group of columns.
Eigen::VectorXd simplex_ls_grouped(const std::vector<Eigen::VectorXd>& d,
                                   const Eigen::VectorXd& b,
                                   const std::vector<std::pair<int, int>>& groups);

}  // namespace tracepop
