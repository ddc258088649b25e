#include "tracepop/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tracepop {

namespace {

void check_same_vars(const Polynomial& p, const Polynomial& q) {
  if (p.vars() != q.vars()) {
    throw std::invalid_argument("polynomial arity mismatch: " +
                                std::to_string(p.vars()) + " vs " +
                                std::to_string(q.vars()));
  }
}

}  // namespace

Polynomial::Polynomial(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("Polynomial: negative variable count");
}

Polynomial Polynomial::constant(int n, double c) {
  Polynomial p(n);
  p.add_term(Exponent(n, 0), c);
  return p;
}

Polynomial Polynomial::variable(int n, int j) {
  if (j < 0 || j >= n) throw std::invalid_argument("Polynomial::variable: index out of range");
  Polynomial p(n);
  Exponent e(n, 0);
  e[j] = 1;
  p.add_term(e, 1.0);
  return p;
}

double Polynomial::coeff(const Exponent& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Exponent& alpha, double c) {
  if (static_cast<int>(alpha.size()) != n_) {
    throw std::invalid_argument("add_term: exponent length mismatch");
  }
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial add(const Polynomial& p, const Polynomial& q) {
  check_same_vars(p, q);
  Polynomial r = p;
  for (const auto& [a, c] : q.terms()) r.add_term(a, c);
  return r;
}

Polynomial sub(const Polynomial& p, const Polynomial& q) {
  check_same_vars(p, q);
  Polynomial r = p;
  for (const auto& [a, c] : q.terms()) r.add_term(a, -c);
  return r;
}

Polynomial mul(const Polynomial& p, const Polynomial& q) {
  check_same_vars(p, q);
  Polynomial r(p.vars());
  Exponent sum(p.vars());
  for (const auto& [a, ca] : p.terms()) {
    for (const auto& [b, cb] : q.terms()) {
      for (int t = 0; t < p.vars(); ++t) sum[t] = a[t] + b[t];
      r.add_term(sum, ca * cb);
    }
  }
  return r;
}

Polynomial mul(const Polynomial& p, double c) {
  Polynomial r(p.vars());
  if (c == 0.0) return r;
  for (const auto& [a, ca] : p.terms()) r.add_term(a, ca * c);
  return r;
}

Polynomial pow_int(const Polynomial& p, int e) {
  if (e < 0) throw std::invalid_argument("pow_int: negative exponent");
  Polynomial r = Polynomial::constant(p.vars(), 1.0);
  for (int i = 0; i < e; ++i) r = mul(r, p);
  return r;
}

double eval(const Polynomial& p, const Eigen::VectorXd& point) {
  if (point.size() != p.vars()) throw std::invalid_argument("eval: point length mismatch");
  double s = 0.0;
  for (const auto& [a, c] : p.terms()) {
    double m = c;
    for (int t = 0; t < p.vars(); ++t) {
      for (int e = 0; e < a[t]; ++e) m *= point[t];
    }
    s += m;
  }
  return s;
}

double l1_norm(const Polynomial& p) {
  double s = 0.0;
  for (const auto& [a, c] : p.terms()) s += std::abs(c);
  return s;
}

int degree(const Polynomial& p) {
  if (p.is_zero()) return 0;
  // Map is graded-lex ordered, so the last term has maximal degree.
  return total_degree(std::prev(p.terms().end())->first);
}

int half_ceil_degree(const Polynomial& p) { return (degree(p) + 1) / 2; }

Polynomial derivative(const Polynomial& p, int var) {
  if (var < 0 || var >= p.vars()) throw std::invalid_argument("derivative: index out of range");
  Polynomial r(p.vars());
  for (const auto& [a, c] : p.terms()) {
    if (a[var] == 0) continue;
    Exponent b = a;
    b[var] -= 1;
    r.add_term(b, c * a[var]);
  }
  return r;
}

double max_coeff_dist(const Polynomial& p, const Polynomial& q) {
  check_same_vars(p, q);
  double m = 0.0;
  for (const auto& [a, c] : p.terms()) m = std::max(m, std::abs(c - q.coeff(a)));
  for (const auto& [a, c] : q.terms()) m = std::max(m, std::abs(c - p.coeff(a)));
  return m;
}

std::vector<int> support_vars(const Polynomial& p) {
  std::vector<char> seen(p.vars(), 0);
  for (const auto& [a, c] : p.terms()) {
    (void)c;
    for (int t = 0; t < p.vars(); ++t) {
      if (a[t] > 0) seen[t] = 1;
    }
  }
  std::vector<int> out;
  for (int t = 0; t < p.vars(); ++t) {
    if (seen[t]) out.push_back(t);
  }
  return out;
}

Polynomial remap_vars(const Polynomial& p, const std::vector<int>& var_map, int new_n) {
  if (static_cast<int>(var_map.size()) != p.vars()) {
    throw std::invalid_argument("remap_vars: map length mismatch");
  }
  Polynomial r(new_n);
  Exponent b(new_n);
  for (const auto& [a, c] : p.terms()) {
    std::fill(b.begin(), b.end(), 0);
    for (int t = 0; t < p.vars(); ++t) {
      if (a[t] == 0) continue;
      const int img = var_map[t];
      if (img < 0 || img >= new_n) {
        throw std::invalid_argument("remap_vars: supported variable not mapped");
      }
      b[img] += a[t];
    }
    r.add_term(b, c);
  }
  return r;
}

Polynomial expand_shifted_square_norm(const std::vector<double>& w, int k) {
  const int n = static_cast<int>(w.size());
  if (n < 1) throw std::invalid_argument("expand_shifted_square_norm: need a variable");
  if (k < 0) throw std::invalid_argument("expand_shifted_square_norm: negative power");
  Polynomial r(n);
  // Coefficient of x^{2a} is C(k,|a|) * |a|!/prod_t a_t! * prod_t w_t^{a_t}.
  for (const Exponent& a : build_basis(n, k)) {
    const int d = total_degree(a);
    double c = 1.0;
    int used = 0;
    for (int t = 0; t < n; ++t) {
      for (int e = 1; e <= a[t]; ++e) {
        c *= w[t] * static_cast<double>(used + e) / static_cast<double>(e);
      }
      used += a[t];
    }
    for (int e = 1; e <= d; ++e) c *= static_cast<double>(k - e + 1) / static_cast<double>(e);
    if (c == 0.0) continue;
    Exponent twice(n);
    for (int t = 0; t < n; ++t) twice[t] = 2 * a[t];
    r.add_term(twice, c);
  }
  return r;
}

Polynomial expand_shifted_square_series(const std::vector<double>& w, double R, int k) {
  const int n = static_cast<int>(w.size());
  if (k < 1) throw std::invalid_argument("expand_shifted_square_series: need k >= 1");
  Polynomial r(n);
  double shift_pow = 1.0;
  for (int j = 0; j <= k - 1; ++j) {
    r = add(r, mul(expand_shifted_square_norm(w, k - 1 - j), shift_pow));
    shift_pow *= R + 1.0;
  }
  return r;
}

namespace {

std::vector<double> squared_weights(const std::vector<int>& u) {
  std::vector<double> w(u.size());
  for (std::size_t t = 0; t < u.size(); ++t) {
    if (u[t] < 1) throw std::invalid_argument("weights must be positive integers");
    w[t] = static_cast<double>(u[t]) * static_cast<double>(u[t]);
  }
  return w;
}

}  // namespace

Polynomial expand_one_plus_weighted_norm_pow(const std::vector<int>& u, int k) {
  if (k < 1) throw std::invalid_argument("expand_one_plus_weighted_norm_pow: need k >= 1");
  return expand_shifted_square_norm(squared_weights(u), k);
}

Polynomial expand_lambda_series(const std::vector<int>& u, double R, int k) {
  if (R <= 0.0) throw std::invalid_argument("expand_lambda_series: need R > 0");
  if (k < 1) throw std::invalid_argument("expand_lambda_series: need k >= 1");
  return expand_shifted_square_series(squared_weights(u), R, k);
}

}  // namespace tracepop
