#include "tracepop/eigs.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace tracepop {

namespace {

Eigen::VectorXd seeded_unit_vector(int dim, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
  const double norm = v.norm();
  return norm > 0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Unit(dim, 0);
}

void fix_sign(Eigen::VectorXd& u) {
  int arg = 0;
  double best = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > best) {
      best = std::abs(u[i]);
      arg = i;
    }
  }
  if (u[arg] < 0) u = -u;
}

EigResult dense_smallest(const SymOperator& op) {
  Eigen::MatrixXd M(op.dim, op.dim);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(op.dim);
  Eigen::VectorXd col(op.dim);
  for (int i = 0; i < op.dim; ++i) {
    e[i] = 1.0;
    op.apply(e, col);
    M.col(i) = col;
    e[i] = 0.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
  EigResult out;
  out.value = es.eigenvalues()[0];
  out.vector = es.eigenvectors().col(0);
  out.converged = true;
  out.applies = op.dim;
  fix_sign(out.vector);
  return out;
}

void reorthogonalize(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& V) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Eigen::VectorXd& v : V) w -= v.dot(w) * v;
  }
}

}  // namespace

EigResult smallest_eig(const SymOperator& op, double tol, int max_applies,
                       const Eigen::VectorXd* warm_start, unsigned long long seed) {
  EigResult out;
  if (op.dim <= 0) return out;
  if (op.dim <= 2) return dense_smallest(op);

  Eigen::VectorXd v;
  if (warm_start && warm_start->size() == op.dim && warm_start->norm() > 1e-12) {
    v = *warm_start / warm_start->norm();
  } else {
    v = seeded_unit_vector(op.dim, seed);
  }

  const int krylov_cap = std::min(op.dim, 60);
  Eigen::VectorXd w(op.dim);
  int applies = 0;
  double best_theta = 0.0;
  Eigen::VectorXd best_u;

  while (applies < max_applies) {
    std::vector<Eigen::VectorXd> V;
    V.push_back(v);
    std::vector<double> alpha;
    std::vector<double> beta;

    for (int j = 0; j < krylov_cap && applies < max_applies; ++j) {
      op.apply(V[j], w);
      ++applies;
      const double a = V[j].dot(w);
      alpha.push_back(a);
      w -= a * V[j];
      if (j > 0) w -= beta[j - 1] * V[j - 1];
      reorthogonalize(w, V);
      const double bnorm = w.norm();

      const bool check = j < 10 || j % 5 == 4 || j == krylov_cap - 1 || bnorm < 1e-14;
      if (check) {
        const int m = j + 1;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) T(i, i) = alpha[i];
        for (int i = 0; i + 1 < m; ++i) {
          T(i, i + 1) = beta[i];
          T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const double theta = es.eigenvalues()[0];
        const Eigen::VectorXd s = es.eigenvectors().col(0);
        const double resid_est = std::abs(bnorm * s[m - 1]);
        best_theta = theta;
        best_u = Eigen::VectorXd::Zero(op.dim);
        for (int i = 0; i < m; ++i) best_u += s[i] * V[i];
        best_u.normalize();
        if (resid_est <= tol * (1.0 + std::abs(theta)) || bnorm < 1e-14) {
          op.apply(best_u, w);
          ++applies;
          const double rayleigh = best_u.dot(w);
          const double resid = (w - rayleigh * best_u).norm();
          if (resid <= tol * (1.0 + std::abs(rayleigh)) || bnorm < 1e-14) {
            out.value = rayleigh;
            out.vector = best_u;
            out.converged = true;
            out.applies = applies;
            fix_sign(out.vector);
            return out;
          }
        }
      }
      if (bnorm < 1e-14) break;
      V.push_back(w / bnorm);
      beta.push_back(bnorm);
    }
    v = best_u.size() == op.dim ? best_u : seeded_unit_vector(op.dim, seed + applies);
  }

  out.value = best_theta;
  out.vector = best_u.size() == op.dim ? best_u : v;
  out.converged = false;
  out.applies = applies;
  fix_sign(out.vector);
  return out;
}

ClusterResult smallest_eig_cluster(const SymOperator& op, double tol, int max_applies, int max_r,
                                   unsigned long long seed) {
  ClusterResult out;
  if (op.dim <= 0) return out;

  if (op.dim <= 8) {
    Eigen::MatrixXd M(op.dim, op.dim);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(op.dim);
    Eigen::VectorXd col(op.dim);
    for (int i = 0; i < op.dim; ++i) {
      e[i] = 1.0;
      op.apply(e, col);
      M.col(i) = col;
      e[i] = 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    const double lo = es.eigenvalues()[0];
    const double window = 1e-6 * (1.0 + std::abs(lo));
    int r = 0;
    while (r < op.dim && r < max_r && es.eigenvalues()[r] <= lo + window) ++r;
    out.values = es.eigenvalues().head(r);
    out.vectors = es.eigenvectors().leftCols(r);
    out.converged = true;
    return out;
  }

  const int block = std::min(4, op.dim);
  const int subspace_cap = std::min(op.dim, std::max(60, 6 * block));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<Eigen::VectorXd> V;
  std::vector<Eigen::VectorXd> MV;
  int applies = 0;

  const auto push_orthonormal = [&](Eigen::VectorXd cand) -> bool {
    reorthogonalize(cand, V);
    const double norm = cand.norm();
    if (norm < 1e-10) return false;
    V.push_back(cand / norm);
    return true;
  };

  for (int i = 0; i < block; ++i) {
    Eigen::VectorXd cand(op.dim);
    for (int t = 0; t < op.dim; ++t) cand[t] = gauss(rng);
    push_orthonormal(cand);
  }

  Eigen::VectorXd w(op.dim);
  while (static_cast<int>(V.size()) < subspace_cap && applies < max_applies) {
    while (MV.size() < V.size()) {
      op.apply(V[MV.size()], w);
      ++applies;
      MV.push_back(w);
    }
    const int m = static_cast<int>(V.size());
    Eigen::MatrixXd H(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j <= i; ++j) {
        H(i, j) = V[i].dot(MV[j]);
        H(j, i) = H(i, j);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const double lo = es.eigenvalues()[0];

    // Residual of the lowest Ritz pair decides convergence of the sweep.
    Eigen::VectorXd u = Eigen::VectorXd::Zero(op.dim);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(op.dim);
    for (int i = 0; i < m; ++i) {
      u += es.eigenvectors()(i, 0) * V[i];
      mu += es.eigenvectors()(i, 0) * MV[i];
    }
    const double resid = (mu - lo * u).norm();
    if (resid <= tol * (1.0 + std::abs(lo)) || static_cast<int>(V.size()) + block > subspace_cap) {
      const double window = 1e-6 * (1.0 + std::abs(lo));
      std::vector<int> picks;
      for (int i = 0; i < m && static_cast<int>(picks.size()) < max_r; ++i) {
        if (es.eigenvalues()[i] <= lo + window) picks.push_back(i);
      }
      out.values.resize(static_cast<Eigen::Index>(picks.size()));
      out.vectors.resize(op.dim, static_cast<Eigen::Index>(picks.size()));
      for (std::size_t c = 0; c < picks.size(); ++c) {
        Eigen::VectorXd vec = Eigen::VectorXd::Zero(op.dim);
        for (int i = 0; i < m; ++i) vec += es.eigenvectors()(i, picks[c]) * V[i];
        vec.normalize();
        fix_sign(vec);
        out.values[static_cast<Eigen::Index>(c)] = es.eigenvalues()[picks[c]];
        out.vectors.col(static_cast<Eigen::Index>(c)) = vec;
      }
      out.converged = resid <= tol * (1.0 + std::abs(lo));
      if (out.converged || static_cast<int>(V.size()) + block > subspace_cap) return out;
    }

    // Expand with the next block: images of the trailing block vectors.
    const int start = m - block;
    bool grew = false;
    for (int i = std::max(start, 0); i < m; ++i) {
      if (push_orthonormal(MV[i])) grew = true;
      if (static_cast<int>(V.size()) >= subspace_cap) break;
    }
    if (!grew) {
      Eigen::VectorXd cand(op.dim);
      for (int t = 0; t < op.dim; ++t) cand[t] = gauss(rng);
      if (!push_orthonormal(cand)) break;
    }
  }

  // Fall back to whatever the current subspace gives.
  if (!V.empty()) {
    while (MV.size() < V.size() && applies < max_applies) {
      op.apply(V[MV.size()], w);
      ++applies;
      MV.push_back(w);
    }
    const int m = static_cast<int>(MV.size());
    Eigen::MatrixXd H(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j <= i; ++j) {
        H(i, j) = V[i].dot(MV[j]);
        H(j, i) = H(i, j);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const double lo = es.eigenvalues()[0];
    const double window = 1e-6 * (1.0 + std::abs(lo));
    std::vector<int> picks;
    for (int i = 0; i < m && static_cast<int>(picks.size()) < max_r; ++i) {
      if (es.eigenvalues()[i] <= lo + window) picks.push_back(i);
    }
    out.values.resize(static_cast<Eigen::Index>(picks.size()));
    out.vectors.resize(op.dim, static_cast<Eigen::Index>(picks.size()));
    for (std::size_t c = 0; c < picks.size(); ++c) {
      Eigen::VectorXd vec = Eigen::VectorXd::Zero(op.dim);
      for (int i = 0; i < m; ++i) vec += es.eigenvectors()(i, picks[c]) * V[i];
      vec.normalize();
      fix_sign(vec);
      out.values[static_cast<Eigen::Index>(c)] = es.eigenvalues()[picks[c]];
      out.vectors.col(static_cast<Eigen::Index>(c)) = vec;
    }
  }
  return out;
}

double operator_norm(const StandardSdp& sdp, double tol) {
  const int zeta = sdp.zeta();
  if (zeta == 0) return 0.0;
  Eigen::VectorXd v = seeded_unit_vector(zeta, 31);
  double lambda = 0.0;
  BlockDense scratch = zero_blocks(sdp);
  for (int iter = 0; iter < 5000; ++iter) {
    for (Eigen::MatrixXd& blockmat : scratch) blockmat.setZero();
    add_scaled_adjoint(sdp, v, scratch);
    Eigen::VectorXd gv = apply_constraints(sdp, scratch);
    const double next = v.dot(gv);
    const double gn = gv.norm();
    if (gn <= 0.0) return 0.0;
    v = gv / gn;
    if (iter > 0 && std::abs(next - lambda) <= tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace tracepop
