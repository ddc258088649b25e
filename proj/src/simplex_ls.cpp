#include "tracepop/simplex_ls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace tracepop {

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double tau = 0.0;
  int rho = 0;
  for (int i = 0; i < n; ++i) {
    running += sorted[i];
    const double candidate = (running - 1.0) / (i + 1);
    if (sorted[i] - candidate > 0.0) {
      rho = i + 1;
      tau = candidate;
    }
  }
  (void)rho;
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = std::max(v[i] - tau, 0.0);
  return out;
}

namespace {

Eigen::VectorXd project_groups(const Eigen::VectorXd& v,
                               const std::vector<std::pair<int, int>>& groups) {
  Eigen::VectorXd out = v;
  for (const auto& [offset, count] : groups) {
    out.segment(offset, count) = project_simplex(v.segment(offset, count));
  }
  return out;
}

}  // namespace

Eigen::VectorXd simplex_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                           const std::vector<std::pair<int, int>>& groups) {
  const int n = static_cast<int>(c.size());
  if (n == 0) return Eigen::VectorXd();
  if (groups.empty()) throw std::invalid_argument("simplex_qp needs at least one group");

  double lip = 1.0;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
    if (es.info() == Eigen::Success && es.eigenvalues().size() > 0) {
      lip = std::max(es.eigenvalues().maxCoeff(), 1e-12);
    }
  }
  const double step = 1.0 / lip;

  // Uniform start on each simplex.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (const auto& [offset, count] : groups) {
    x.segment(offset, count).setConstant(1.0 / count);
  }
  Eigen::VectorXd z = x;
  double momentum = 1.0;

  for (int iter = 0; iter < 20000; ++iter) {
    const Eigen::VectorXd grad_z = Q * z + c;
    const Eigen::VectorXd x_next = project_groups(z - step * grad_z, groups);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    z = x_next + ((momentum - 1.0) / t_next) * (x_next - x);
    x = x_next;
    momentum = t_next;

    if (iter % 10 == 9) {
      const Eigen::VectorXd grad = Q * x + c;
      const double kkt = (x - project_groups(x - grad, groups)).lpNorm<Eigen::Infinity>();
      if (kkt <= 1e-9) break;
    }
  }
  // Final polish of the fixed point.
  const Eigen::VectorXd grad = Q * x + c;
  Eigen::VectorXd out = project_groups(x - step * grad, groups);
  for (int i = 0; i < n; ++i) {
    if (out[i] < 0.0) out[i] = 0.0;
  }
  return out;
}

Eigen::VectorXd simplex_ls(const std::vector<Eigen::VectorXd>& d, const Eigen::VectorXd& b) {
  return simplex_ls_grouped(d, b, {{0, static_cast<int>(d.size())}});
}

Eigen::VectorXd simplex_ls_grouped(const std::vector<Eigen::VectorXd>& d,
                                   const Eigen::VectorXd& b,
                                   const std::vector<std::pair<int, int>>& groups) {
  const int r = static_cast<int>(d.size());
  if (r == 0) throw std::invalid_argument("simplex_ls needs at least one column");
  Eigen::MatrixXd gram(r, r);
  Eigen::VectorXd lin(r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j <= i; ++j) {
      gram(i, j) = d[i].dot(d[j]);
      gram(j, i) = gram(i, j);
    }
    lin[i] = -d[i].dot(b);
  }
  return simplex_qp(gram, lin, groups);
}

}  // namespace tracepop
