#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tracepop/basis.hpp"

namespace tracepop {

// Sparse multivariate polynomial; terms keyed by exponent in graded-lex
// order, zero coefficients never stored.
class Polynomial {
 public:
  using TermMap = std::map<Exponent, double, GradedLexLess>;

  explicit Polynomial(int n);
  static Polynomial constant(int n, double c);
  static Polynomial variable(int n, int j);  // x_{j+1} for 0-based j

  int vars() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  double coeff(const Exponent& alpha) const;
  void add_term(const Exponent& alpha, double c);

 private:
  int n_;
  TermMap terms_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial sub(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, double c);
Polynomial pow_int(const Polynomial& p, int e);

double eval(const Polynomial& p, const Eigen::VectorXd& point);
double l1_norm(const Polynomial& p);
int degree(const Polynomial& p);  // zero polynomial has degree 0
int half_ceil_degree(const Polynomial& p);

Polynomial derivative(const Polynomial& p, int var);

// Largest absolute coefficient difference; infinite-norm distance on term maps.
double max_coeff_dist(const Polynomial& p, const Polynomial& q);

// Variables with a nonzero exponent somewhere in p, ascending.
std::vector<int> support_vars(const Polynomial& p);

// Reindex p into new_n variables via old-index -> new-index; every supported
// variable must be mapped (map value >= 0).
Polynomial remap_vars(const Polynomial& p, const std::vector<int>& var_map, int new_n);

// (1 + sum_t w_t x_t^2)^k expanded exactly; weights may be zero.
Polynomial expand_shifted_square_norm(const std::vector<double>& w, int k);

// sum_{j=0}^{k-1} (R+1)^j (1 + sum_t w_t x_t^2)^{k-1-j}.
Polynomial expand_shifted_square_series(const std::vector<double>& w, double R, int k);

// (1 + ||u o x||^2)^k for positive integer weights u (the squares w = u^2).
Polynomial expand_one_plus_weighted_norm_pow(const std::vector<int>& u, int k);

// Lambda_{k-1} for the same weighting; constant 1 when k = 1.
Polynomial expand_lambda_series(const std::vector<int>& u, double R, int k);

}  // namespace tracepop
