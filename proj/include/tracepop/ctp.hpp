#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tracepop/lp.hpp"
#include "tracepop/pop.hpp"

namespace tracepop {

// Verification LP for the constant-trace property at order k: feasible points
// are exactly the identities
//   xi = v_k' G0 v_k + sum_i g_i v' G_i v + sum_j h_j v' u_j
// with all G diagonals >= 1 and xi, u_j free.  Stored in standard equality
// form over nonnegative variables (xi and u split, G shifted by 1).
struct CtpLp {
  int k = 0;
  int nvars = 0;                 // local variable count
  std::vector<int> vars;         // global variable per local index
  std::vector<int> g_indices;    // constraint indices covered by this LP
  std::vector<int> h_indices;

  std::vector<Exponent> row_monomials;  // local exponents, graded-lex
  std::vector<int> group_sizes;         // basis sizes: moment block, then per g
  std::vector<int> u_sizes;             // basis sizes per equality multiplier

  Eigen::MatrixXd A;  // standard form: A x = b, x >= 0
  Eigen::VectorXd b;
  Eigen::VectorXd c;

  // raw layout: xi, all G diagonals, all u coefficients
  int num_raw_variables() const;
  int num_rows() const { return static_cast<int>(row_monomials.size()); }
};

struct CtpLpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  double xi = 0.0;
  std::vector<Eigen::VectorXd> g_diagonals;    // moment block first, then per g
  std::vector<Eigen::VectorXd> eq_multipliers; // per h
  int iterations = 0;
};

CtpLp build_ctp_lp(const PopInstance& pop, int k);
CtpLp build_ctp_lp_clique(const PopInstance& pop, int k, int j);

CtpLpSolution solve_lp(const CtpLp& lp);

// One group of a constant-trace certificate: the trace value together with
// the diagonal of P over the moment block and each localizing block, plus
// the equality multipliers needed to replay the defining identity.
struct CtpCertGroup {
  double a = 0.0;
  std::vector<Eigen::VectorXd> p_diagonals;
  std::vector<Eigen::VectorXd> eq_multipliers;
};

struct CtpCertificate {
  int k = 0;
  std::vector<CtpCertGroup> groups;  // one group dense, one per clique otherwise
};

// Dense and per-clique extraction: a = xi*, P = sqrt of the G diagonals.
// Throws std::runtime_error when a diagonal falls below 1 - 1e-9.
CtpCertificate certificate_from_lp(const PopInstance& pop, int k,
                                   const CtpLpSolution& solution);
CtpCertificate certificate_from_lp_groups(const PopInstance& pop, int k,
                                          const std::vector<CtpLpSolution>& solutions);

// Structural certificate for ball/annulus-type constraint sets and for
// equal-degree families with a constant budget plus an enclosing ball.
// Returns nullopt when neither shape matches; never solves an LP.
std::optional<CtpCertificate> closed_form_certificate(const PopInstance& pop, int k);

struct VerifyReport {
  bool identity_ok = false;
  double identity_residual = 0.0;
  bool sampling_ok = false;
  double worst_sample_residual = 0.0;
  int samples_checked = 0;
  std::string message;  // names the violated monomial or sample on failure

  bool ok() const { return identity_ok && sampling_ok; }
};

// Check 1: replay the defining identity coefficient-wise (tol 1e-9).
// Check 2: Dirac moments of `trials` random points on V(h) must give
// |trace(P D(y) P) - a| <= 1e-8 (1 + |a|).  `hint` seeds the equality
// projection and is the fallback sample when projection stalls.
VerifyReport verify_certificate(const PopInstance& pop, int k, const CtpCertificate& cert,
                                int trials, std::optional<Eigen::VectorXd> hint = std::nullopt,
                                unsigned long long seed = 12345);

// Gauss-Newton projection onto V(h) in place; true when the equality
// residual reaches 1e-9 or there are no equalities.
bool project_onto_variety(const PopInstance& pop, Eigen::VectorXd& z);

std::string certificate_to_string(const CtpCertificate& cert);
CtpCertificate parse_certificate(const std::string& text);

}  // namespace tracepop
