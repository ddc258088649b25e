#pragma once

#include <functional>

#include <Eigen/Core>

#include "tracepop/sdp.hpp"

namespace tracepop {

// Symmetric linear action w -> Mw supplied by the caller.
struct SymOperator {
  int dim = 0;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> apply;
};

struct EigResult {
  double value = 0.0;
  Eigen::VectorXd vector;
  bool converged = false;
  int applies = 0;
};

// Smallest eigenpair by Lanczos with full reorthogonalization and restarts;
// residual guarantee ||Mu - lambda u|| <= tol (1 + |lambda|) on converged
// returns.  Sign fixed: largest-magnitude entry positive.
EigResult smallest_eig(const SymOperator& op, double tol, int max_applies,
                       const Eigen::VectorXd* warm_start = nullptr,
                       unsigned long long seed = 7);

struct ClusterResult {
  Eigen::VectorXd values;   // ascending, all within the cluster window
  Eigen::MatrixXd vectors;  // orthonormal columns matching values
  bool converged = false;
};

// Eigenvalues within 1e-6 (1 + |lambda_min|) of lambda_min with their
// eigenvectors, at most max_r of them; block Lanczos with block size 4.
ClusterResult smallest_eig_cluster(const SymOperator& op, double tol, int max_applies, int max_r,
                                   unsigned long long seed = 7);

// sqrt(lambda_max(A A^T)) for the constraint map of the SDP, power-iteration
// estimate within relative tol; no inflation applied here.
double operator_norm(const StandardSdp& sdp, double tol);

}  // namespace tracepop
