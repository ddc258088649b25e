#include "tracepop/ctp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace tracepop {

namespace {

Exponent add_exp(const Exponent& a, const Exponent& b) {
  Exponent out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) out[t] = a[t] + b[t];
  return out;
}

Exponent double_exp(const Exponent& a) {
  Exponent out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) out[t] = 2 * a[t];
  return out;
}

std::string monomial_name(const Exponent& alpha) {
  std::string out;
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    if (alpha[t] == 0) continue;
    if (!out.empty()) out += "*";
    out += "x" + std::to_string(t + 1);
    if (alpha[t] > 1) out += "^" + std::to_string(alpha[t]);
  }
  return out.empty() ? "1" : out;
}

GroupView dense_view(const PopInstance& pop) {
  GroupView view;
  view.vars.resize(pop.n);
  for (int v = 0; v < pop.n; ++v) view.vars[v] = v;
  view.g_indices.resize(pop.g.size());
  for (std::size_t i = 0; i < pop.g.size(); ++i) view.g_indices[i] = static_cast<int>(i);
  view.h_indices.resize(pop.h.size());
  for (std::size_t j = 0; j < pop.h.size(); ++j) view.h_indices[j] = static_cast<int>(j);
  return view;
}

CtpLp build_over(const PopInstance& pop, int k, const GroupView& view) {
  if (k < kmin(pop)) {
    throw std::invalid_argument("relaxation order " + std::to_string(k) +
                                " is below the minimum order " + std::to_string(kmin(pop)));
  }
  CtpLp lp;
  lp.k = k;
  lp.vars = view.vars;
  lp.nvars = static_cast<int>(view.vars.size());
  lp.g_indices = view.g_indices;
  lp.h_indices = view.h_indices;
  const int nv = lp.nvars;

  std::vector<Polynomial> multipliers;  // group 0 is the moment block
  multipliers.push_back(Polynomial::constant(nv, 1.0));
  for (int i : view.g_indices) multipliers.push_back(localize(pop.g[i], view, pop.n));
  std::vector<Polynomial> eqs;
  for (int j : view.h_indices) eqs.push_back(localize(pop.h[j], view, pop.n));

  std::vector<std::vector<Exponent>> group_bases;
  for (std::size_t i = 0; i < multipliers.size(); ++i) {
    const int d = i == 0 ? k : k - half_ceil_degree(multipliers[i]);
    group_bases.push_back(build_basis(nv, d));
    lp.group_sizes.push_back(static_cast<int>(group_bases.back().size()));
  }
  std::vector<std::vector<Exponent>> u_bases;
  for (const Polynomial& hj : eqs) {
    const int d = 2 * (k - half_ceil_degree(hj));
    u_bases.push_back(build_basis(nv, d));
    lp.u_sizes.push_back(static_cast<int>(u_bases.back().size()));
  }

  // Row monomials: union of all support products plus the constant.
  std::map<Exponent, int, GradedLexLess> rows;
  rows.emplace(Exponent(nv, 0), 0);
  for (std::size_t i = 0; i < multipliers.size(); ++i) {
    for (const Exponent& beta : group_bases[i]) {
      const Exponent twice = double_exp(beta);
      for (const auto& [gamma, cg] : multipliers[i].terms()) {
        (void)cg;
        rows.emplace(add_exp(gamma, twice), 0);
      }
    }
  }
  for (std::size_t j = 0; j < eqs.size(); ++j) {
    for (const Exponent& beta : u_bases[j]) {
      for (const auto& [gamma, cg] : eqs[j].terms()) {
        (void)cg;
        rows.emplace(add_exp(gamma, beta), 0);
      }
    }
  }
  int idx = 0;
  for (auto& [mono, position] : rows) {
    position = idx++;
    lp.row_monomials.push_back(mono);
  }

  int total_g = 0;
  for (int s : lp.group_sizes) total_g += s;
  int total_u = 0;
  for (int s : lp.u_sizes) total_u += s;
  const int m = static_cast<int>(lp.row_monomials.size());
  const int cols = 2 + total_g + 2 * total_u;

  lp.A = Eigen::MatrixXd::Zero(m, cols);
  lp.b = Eigen::VectorXd::Zero(m);
  lp.c = Eigen::VectorXd::Zero(cols);
  lp.c[0] = 1.0;
  lp.c[1] = -1.0;
  const int const_row = rows.at(Exponent(nv, 0));
  lp.A(const_row, 0) = -1.0;
  lp.A(const_row, 1) = 1.0;

  // G diagonals enter as 1 + w with w >= 0; the unit shift lands in b.
  int col = 2;
  for (std::size_t i = 0; i < multipliers.size(); ++i) {
    for (const Exponent& beta : group_bases[i]) {
      const Exponent twice = double_exp(beta);
      for (const auto& [gamma, cg] : multipliers[i].terms()) {
        const int row = rows.at(add_exp(gamma, twice));
        lp.A(row, col) += cg;
        lp.b[row] -= cg;
      }
      ++col;
    }
  }
  for (std::size_t j = 0; j < eqs.size(); ++j) {
    const int plus0 = col;
    const int minus0 = col + lp.u_sizes[j];
    for (std::size_t bidx = 0; bidx < u_bases[j].size(); ++bidx) {
      for (const auto& [gamma, cg] : eqs[j].terms()) {
        const int row = rows.at(add_exp(gamma, u_bases[j][bidx]));
        lp.A(row, plus0 + static_cast<int>(bidx)) += cg;
        lp.A(row, minus0 + static_cast<int>(bidx)) -= cg;
      }
    }
    col = minus0 + lp.u_sizes[j];
  }
  return lp;
}

CtpCertGroup group_from_solution(const CtpLpSolution& solution) {
  if (solution.status != LpStatus::Optimal) {
    throw std::runtime_error("certificate extraction requires an optimal LP solution");
  }
  CtpCertGroup group;
  group.a = solution.xi;
  for (const Eigen::VectorXd& diag : solution.g_diagonals) {
    Eigen::VectorXd p(diag.size());
    for (int t = 0; t < diag.size(); ++t) {
      if (diag[t] < 1.0 - 1e-9) {
        throw std::runtime_error("invalid LP solution: G diagonal entry " + std::to_string(t) +
                                 " = " + std::to_string(diag[t]) + " is below 1");
      }
      p[t] = std::sqrt(std::max(diag[t], 0.0));
    }
    group.p_diagonals.push_back(std::move(p));
  }
  group.eq_multipliers = solution.eq_multipliers;
  return group;
}

// s * (||x(T)||^2 - c) with unit coefficients on the squares.
struct BallShape {
  bool upper = false;  // c - ||x(T)||^2 >= 0
  std::vector<int> support;
  double level = 0.0;  // c
};

std::optional<BallShape> parse_ball_shape(const Polynomial& g) {
  BallShape shape;
  double sign = 0.0;
  double c0 = 0.0;
  for (const auto& [alpha, coeff] : g.terms()) {
    const int deg = total_degree(alpha);
    if (deg == 0) {
      c0 = coeff;
      continue;
    }
    if (deg != 2) return std::nullopt;
    int var = -1;
    for (std::size_t t = 0; t < alpha.size(); ++t) {
      if (alpha[t] == 2 && var < 0) {
        var = static_cast<int>(t);
      } else if (alpha[t] != 0) {
        return std::nullopt;  // cross term
      }
    }
    if (std::abs(std::abs(coeff) - 1.0) > 1e-12) return std::nullopt;
    if (sign == 0.0) {
      sign = coeff > 0 ? 1.0 : -1.0;
    } else if ((coeff > 0 ? 1.0 : -1.0) != sign) {
      return std::nullopt;
    }
    shape.support.push_back(var);
  }
  if (shape.support.empty() || sign == 0.0) return std::nullopt;
  std::sort(shape.support.begin(), shape.support.end());
  shape.upper = sign < 0;
  shape.level = shape.upper ? c0 : -c0;
  if (shape.level <= 0.0) return std::nullopt;
  return shape;
}

Eigen::VectorXd diagonal_from_expansion(const Polynomial& expansion,
                                        const std::vector<Exponent>& basis, double scale) {
  Eigen::VectorXd diag(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t t = 0; t < basis.size(); ++t) {
    diag[static_cast<Eigen::Index>(t)] = scale * expansion.coeff(double_exp(basis[t]));
  }
  return diag;
}

// Ball/annulus construction: every inequality is an upper ball or a lower
// level paired with an upper on the same support, supports cover all group
// variables, and the weighted ball identity supplies the diagonals.
std::optional<CtpCertGroup> closed_form_ball_annulus(const std::vector<Polynomial>& gs, int nv,
                                                     int k, const std::vector<int>& u_sizes) {
  struct PairInfo {
    int upper = -1;
    int lower = -1;
    double upper_level = 0.0;
    double lower_level = 0.0;
  };
  std::map<std::vector<int>, PairInfo> by_support;
  std::vector<BallShape> shapes;
  for (const Polynomial& gi : gs) {
    auto shape = parse_ball_shape(gi);
    if (!shape) return std::nullopt;
    PairInfo& info = by_support[shape->support];
    const int idx = static_cast<int>(shapes.size());
    if (shape->upper) {
      if (info.upper >= 0) return std::nullopt;
      info.upper = idx;
      info.upper_level = shape->level;
    } else {
      if (info.lower >= 0) return std::nullopt;
      info.lower = idx;
      info.lower_level = shape->level;
    }
    shapes.push_back(*shape);
  }

  std::vector<double> weights(nv, 0.0);
  double R = 0.0;
  std::vector<double> delta(gs.size(), 0.0);
  for (const auto& [support, info] : by_support) {
    if (info.upper < 0) return std::nullopt;  // unbounded direction
    if (info.lower >= 0) {
      const double lo = info.lower_level;
      const double hi = info.upper_level;
      if (hi <= lo) return std::nullopt;
      delta[info.lower] = lo / (hi - lo);
      delta[info.upper] = hi / (hi - lo);
      R += lo + hi;
    } else {
      delta[info.upper] = 1.0;
      R += info.upper_level;
    }
    for (int v : support) weights[v] += 1.0;
  }
  for (double w : weights) {
    if (w < 1.0) return std::nullopt;  // uncovered variable
  }

  const Polynomial theta = expand_shifted_square_norm(weights, k);
  const Polynomial lambda = expand_shifted_square_series(weights, R, k);
  CtpCertGroup group;
  group.a = std::pow(R + 1.0, k);
  Eigen::VectorXd moment = diagonal_from_expansion(theta, build_basis(nv, k), 1.0);
  group.p_diagonals.push_back(moment.cwiseSqrt());
  const std::vector<Exponent> loc_basis = build_basis(nv, k - 1);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    Eigen::VectorXd diag = diagonal_from_expansion(lambda, loc_basis, delta[i]);
    group.p_diagonals.push_back(diag.cwiseSqrt());
  }
  for (int s : u_sizes) group.eq_multipliers.push_back(Eigen::VectorXd::Zero(s));
  return group;
}

// Equal-degree construction: one enclosing ball over all group variables,
// the remaining inequalities share a half-degree u and sum to a constant L.
std::optional<CtpCertGroup> closed_form_equidegree(const std::vector<Polynomial>& gs, int nv,
                                                   int k, const std::vector<int>& u_sizes) {
  int ball_index = -1;
  double R = 0.0;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    auto shape = parse_ball_shape(gs[i]);
    if (!shape || !shape->upper) continue;
    if (static_cast<int>(shape->support.size()) != nv) continue;
    ball_index = static_cast<int>(i);
    R = shape->level;
    break;
  }
  if (ball_index < 0 || gs.size() < 2) return std::nullopt;

  int u = -1;
  Polynomial total(nv);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (static_cast<int>(i) == ball_index) continue;
    const int ui = half_ceil_degree(gs[i]);
    if (u < 0) u = ui;
    if (ui != u) return std::nullopt;
    total = add(total, gs[i]);
  }
  if (u < 1 || u > k) return std::nullopt;
  const double L = total.coeff(Exponent(nv, 0));
  if (L <= 0.0) return std::nullopt;
  if (max_coeff_dist(total, Polynomial::constant(nv, L)) > 1e-9) return std::nullopt;

  const std::vector<double> ones(nv, 1.0);
  const Polynomial theta_k = expand_shifted_square_norm(ones, k);
  const Polynomial theta_ku = expand_shifted_square_norm(ones, k - u);
  const Polynomial lambda = expand_shifted_square_series(ones, R, k);

  CtpCertGroup group;
  group.a = std::pow(R + 1.0, k);
  const std::vector<Exponent> moment_basis = build_basis(nv, k);
  Eigen::VectorXd moment(static_cast<Eigen::Index>(moment_basis.size()));
  for (std::size_t t = 0; t < moment_basis.size(); ++t) {
    const Exponent twice = double_exp(moment_basis[t]);
    moment[static_cast<Eigen::Index>(t)] =
        theta_k.coeff(twice) - (L / (L + 1.0)) * theta_ku.coeff(twice);
  }
  group.p_diagonals.push_back(moment.cwiseSqrt());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (static_cast<int>(i) == ball_index) {
      group.p_diagonals.push_back(
          diagonal_from_expansion(lambda, build_basis(nv, k - 1), 1.0).cwiseSqrt());
    } else {
      group.p_diagonals.push_back(
          diagonal_from_expansion(theta_ku, build_basis(nv, k - u), 1.0 / (L + 1.0))
              .cwiseSqrt());
    }
  }
  for (int s : u_sizes) group.eq_multipliers.push_back(Eigen::VectorXd::Zero(s));
  return group;
}

// The identity residual of one certificate group: should be the zero
// polynomial in the group's local variables.
Polynomial group_identity_residual(const PopInstance& pop, int k, const GroupView& view,
                                   const CtpCertGroup& group) {
  const int nv = static_cast<int>(view.vars.size());
  Polynomial residual = Polynomial::constant(nv, -group.a);
  std::vector<Polynomial> multipliers;
  multipliers.push_back(Polynomial::constant(nv, 1.0));
  for (int i : view.g_indices) multipliers.push_back(localize(pop.g[i], view, pop.n));
  for (std::size_t i = 0; i < multipliers.size(); ++i) {
    const int d = i == 0 ? k : k - half_ceil_degree(multipliers[i]);
    const std::vector<Exponent> basis = build_basis(nv, d);
    Polynomial block(nv);
    const Eigen::VectorXd& p = group.p_diagonals[i];
    for (std::size_t t = 0; t < basis.size(); ++t) {
      const double gdiag = p[static_cast<Eigen::Index>(t)] * p[static_cast<Eigen::Index>(t)];
      if (gdiag != 0.0) block.add_term(double_exp(basis[t]), gdiag);
    }
    residual = add(residual, mul(multipliers[i], block));
  }
  for (std::size_t j = 0; j < view.h_indices.size(); ++j) {
    const Polynomial hj = localize(pop.h[view.h_indices[j]], view, pop.n);
    const std::vector<Exponent> basis = build_basis(nv, 2 * (k - half_ceil_degree(hj)));
    Polynomial mult(nv);
    const Eigen::VectorXd& u = group.eq_multipliers[j];
    for (std::size_t t = 0; t < basis.size(); ++t) {
      if (u[static_cast<Eigen::Index>(t)] != 0.0) {
        mult.add_term(basis[t], u[static_cast<Eigen::Index>(t)]);
      }
    }
    residual = add(residual, mul(hj, mult));
  }
  return residual;
}

// trace(P D(y) P) for the Dirac moments of a point equals this polynomial
// evaluated there; the equality multipliers drop out on V(h).
Polynomial group_trace_polynomial(const PopInstance& pop, int k, const GroupView& view,
                                  const CtpCertGroup& group) {
  const int nv = static_cast<int>(view.vars.size());
  Polynomial trace(nv);
  std::vector<Polynomial> multipliers;
  multipliers.push_back(Polynomial::constant(nv, 1.0));
  for (int i : view.g_indices) multipliers.push_back(localize(pop.g[i], view, pop.n));
  for (std::size_t i = 0; i < multipliers.size(); ++i) {
    const int d = i == 0 ? k : k - half_ceil_degree(multipliers[i]);
    const std::vector<Exponent> basis = build_basis(nv, d);
    Polynomial block(nv);
    const Eigen::VectorXd& p = group.p_diagonals[i];
    for (std::size_t t = 0; t < basis.size(); ++t) {
      const double gdiag = p[static_cast<Eigen::Index>(t)] * p[static_cast<Eigen::Index>(t)];
      if (gdiag != 0.0) block.add_term(double_exp(basis[t]), gdiag);
    }
    trace = add(trace, mul(multipliers[i], block));
  }
  return trace;
}

}  // namespace

bool project_onto_variety(const PopInstance& pop, Eigen::VectorXd& z) {
  const int l = pop.num_eq();
  if (l == 0) return true;
  const int n = pop.n;
  std::vector<std::vector<Polynomial>> jac(l);
  for (int j = 0; j < l; ++j) {
    jac[j].reserve(n);
    for (int v = 0; v < n; ++v) jac[j].push_back(derivative(pop.h[j], v));
  }
  for (int iter = 0; iter < 80; ++iter) {
    Eigen::VectorXd r(l);
    for (int j = 0; j < l; ++j) r[j] = eval(pop.h[j], z);
    if (r.lpNorm<Eigen::Infinity>() <= 1e-11) return true;
    Eigen::MatrixXd J(l, n);
    for (int j = 0; j < l; ++j) {
      for (int v = 0; v < n; ++v) J(j, v) = eval(jac[j][v], z);
    }
    Eigen::VectorXd step;
    if (l <= n) {
      Eigen::MatrixXd gram = J * J.transpose();
      gram.diagonal().array() += 1e-12;
      step = J.transpose() * gram.ldlt().solve(r);
    } else {
      Eigen::MatrixXd gram = J.transpose() * J;
      gram.diagonal().array() += 1e-10;
      step = gram.ldlt().solve(J.transpose() * r);
    }
    if (!step.allFinite()) return false;
    z -= step;
  }
  Eigen::VectorXd r(l);
  for (int j = 0; j < l; ++j) r[j] = eval(pop.h[j], z);
  return r.lpNorm<Eigen::Infinity>() <= 1e-9;
}

int CtpLp::num_raw_variables() const {
  int total = 1;
  for (int s : group_sizes) total += s;
  for (int s : u_sizes) total += s;
  return total;
}

CtpLp build_ctp_lp(const PopInstance& pop, int k) {
  return build_over(pop, k, dense_view(pop));
}

CtpLp build_ctp_lp_clique(const PopInstance& pop, int k, int j) {
  if (!pop.cliques) {
    throw std::invalid_argument("per-clique LP requires a clique structure");
  }
  if (j < 0 || j >= pop.cliques->num_cliques()) {
    throw std::invalid_argument("clique index out of range");
  }
  const std::vector<GroupView> views = group_views(pop);
  return build_over(pop, k, views[j]);
}

CtpLpSolution solve_lp(const CtpLp& lp) {
  CtpLpSolution sol;
  const LpResult res = solve_standard_lp(lp.A, lp.b, lp.c, LpOptions{});
  sol.status = res.status;
  sol.iterations = res.iterations;
  if (res.status != LpStatus::Optimal) return sol;

  sol.xi = res.x[0] - res.x[1];
  int col = 2;
  for (int s : lp.group_sizes) {
    Eigen::VectorXd diag(s);
    for (int t = 0; t < s; ++t) diag[t] = 1.0 + res.x[col + t];
    sol.g_diagonals.push_back(std::move(diag));
    col += s;
  }
  for (int s : lp.u_sizes) {
    Eigen::VectorXd u(s);
    for (int t = 0; t < s; ++t) u[t] = res.x[col + t] - res.x[col + s + t];
    sol.eq_multipliers.push_back(std::move(u));
    col += 2 * s;
  }
  return sol;
}

CtpCertificate certificate_from_lp(const PopInstance& pop, int k,
                                   const CtpLpSolution& solution) {
  (void)pop;
  CtpCertificate cert;
  cert.k = k;
  cert.groups.push_back(group_from_solution(solution));
  return cert;
}

CtpCertificate certificate_from_lp_groups(const PopInstance& pop, int k,
                                          const std::vector<CtpLpSolution>& solutions) {
  if (!pop.cliques || pop.cliques->num_cliques() != static_cast<int>(solutions.size())) {
    throw std::invalid_argument("per-clique certificate needs one LP solution per clique");
  }
  CtpCertificate cert;
  cert.k = k;
  for (const CtpLpSolution& sol : solutions) cert.groups.push_back(group_from_solution(sol));
  return cert;
}

std::optional<CtpCertificate> closed_form_certificate(const PopInstance& pop, int k) {
  if (k < kmin(pop)) return std::nullopt;
  CtpCertificate cert;
  cert.k = k;
  for (const GroupView& view : group_views(pop)) {
    const int nv = static_cast<int>(view.vars.size());
    std::vector<Polynomial> gs;
    for (int i : view.g_indices) gs.push_back(localize(pop.g[i], view, pop.n));
    std::vector<int> u_sizes;
    for (int j : view.h_indices) {
      const int d = 2 * (k - half_ceil_degree(pop.h[j]));
      u_sizes.push_back(static_cast<int>(basis_size(nv, d)));
    }
    if (gs.empty()) return std::nullopt;
    auto group = closed_form_ball_annulus(gs, nv, k, u_sizes);
    if (!group) group = closed_form_equidegree(gs, nv, k, u_sizes);
    if (!group) return std::nullopt;
    cert.groups.push_back(std::move(*group));
  }
  return cert;
}

VerifyReport verify_certificate(const PopInstance& pop, int k, const CtpCertificate& cert,
                                int trials, std::optional<Eigen::VectorXd> hint,
                                unsigned long long seed) {
  VerifyReport report;
  const std::vector<GroupView> views = group_views(pop);
  if (cert.k != k || cert.groups.size() != views.size()) {
    report.message = "certificate layout does not match the instance";
    return report;
  }
  for (std::size_t gi = 0; gi < views.size(); ++gi) {
    if (cert.groups[gi].p_diagonals.size() != views[gi].g_indices.size() + 1 ||
        cert.groups[gi].eq_multipliers.size() != views[gi].h_indices.size()) {
      report.message = "certificate block count mismatch in group " + std::to_string(gi);
      return report;
    }
  }

  // Check 1: the defining identity, coefficient by coefficient.
  report.identity_ok = true;
  for (std::size_t gi = 0; gi < views.size(); ++gi) {
    const Polynomial residual = group_identity_residual(pop, k, views[gi], cert.groups[gi]);
    for (const auto& [alpha, coeff] : residual.terms()) {
      const double mag = std::abs(coeff);
      if (mag > report.identity_residual) report.identity_residual = mag;
      if (mag > 1e-9 && report.identity_ok) {
        report.identity_ok = false;
        report.message = "identity violated at monomial " + monomial_name(alpha) +
                         " in group " + std::to_string(gi) + " (residual " +
                         std::to_string(coeff) + ")";
      }
    }
  }
  if (!report.identity_ok) return report;

  // Check 2: Dirac moments of points on V(h).
  std::vector<Polynomial> trace_polys;
  for (std::size_t gi = 0; gi < views.size(); ++gi) {
    trace_polys.push_back(group_trace_polynomial(pop, k, views[gi], cert.groups[gi]));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  report.sampling_ok = true;
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXd z(pop.n);
    if (hint) {
      for (int v = 0; v < pop.n; ++v) z[v] = (*hint)[v] + 0.25 * gauss(rng);
    } else {
      const double scale = 1.0 / std::sqrt(static_cast<double>(std::max(pop.n, 1)));
      for (int v = 0; v < pop.n; ++v) z[v] = scale * gauss(rng);
    }
    if (!project_onto_variety(pop, z)) {
      if (!hint) {
        report.sampling_ok = false;
        report.message = "projection onto V(h) failed at sample " + std::to_string(trial);
        return report;
      }
      z = *hint;
    }
    ++report.samples_checked;
    for (std::size_t gi = 0; gi < views.size(); ++gi) {
      Eigen::VectorXd z_loc(static_cast<Eigen::Index>(views[gi].vars.size()));
      for (std::size_t t = 0; t < views[gi].vars.size(); ++t) {
        z_loc[static_cast<Eigen::Index>(t)] = z[views[gi].vars[t]];
      }
      const double a = cert.groups[gi].a;
      const double residual = std::abs(eval(trace_polys[gi], z_loc) - a);
      if (residual > report.worst_sample_residual) report.worst_sample_residual = residual;
      if (residual > 1e-8 * (1.0 + std::abs(a))) {
        report.sampling_ok = false;
        report.message = "trace mismatch at sample " + std::to_string(trial) + " in group " +
                         std::to_string(gi) + " (residual " + std::to_string(residual) + ")";
        return report;
      }
    }
  }
  return report;
}

std::string certificate_to_string(const CtpCertificate& cert) {
  std::ostringstream out;
  char buffer[64];
  const auto fmt = [&buffer](double v) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return std::string(buffer);
  };
  out << "certificate k=" << cert.k << " groups=" << cert.groups.size() << "\n";
  for (std::size_t gi = 0; gi < cert.groups.size(); ++gi) {
    const CtpCertGroup& group = cert.groups[gi];
    out << "group " << gi << " a=" << fmt(group.a) << " blocks=" << group.p_diagonals.size()
        << " eqs=" << group.eq_multipliers.size() << "\n";
    for (std::size_t bi = 0; bi < group.p_diagonals.size(); ++bi) {
      out << "p " << bi << ":";
      const Eigen::VectorXd& p = group.p_diagonals[bi];
      for (int t = 0; t < p.size(); ++t) out << " " << fmt(p[t]);
      out << "\n";
    }
    for (std::size_t ei = 0; ei < group.eq_multipliers.size(); ++ei) {
      out << "u " << ei << ":";
      const Eigen::VectorXd& u = group.eq_multipliers[ei];
      for (int t = 0; t < u.size(); ++t) out << " " << fmt(u[t]);
      out << "\n";
    }
  }
  return out.str();
}

CtpCertificate parse_certificate(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CtpCertificate cert;
  int expected_groups = 0;
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "certificate k=%d groups=%d", &cert.k, &expected_groups) != 2) {
    throw std::runtime_error("certificate parse: bad header line");
  }
  for (int gi = 0; gi < expected_groups; ++gi) {
    if (!std::getline(in, line)) throw std::runtime_error("certificate parse: missing group");
    int idx = 0;
    double a = 0.0;
    int blocks = 0;
    int eqs = 0;
    if (std::sscanf(line.c_str(), "group %d a=%lf blocks=%d eqs=%d", &idx, &a, &blocks, &eqs) !=
        4) {
      throw std::runtime_error("certificate parse: bad group line");
    }
    CtpCertGroup group;
    group.a = a;
    const auto read_vector = [&in, &line](const char* tag, int expect_idx) {
      if (!std::getline(in, line)) throw std::runtime_error("certificate parse: missing vector");
      std::istringstream row(line);
      std::string kind;
      int vi = 0;
      char colon = 0;
      row >> kind >> vi >> std::noskipws >> colon >> std::skipws;
      if (kind != tag || vi != expect_idx) {
        throw std::runtime_error("certificate parse: unexpected line '" + line + "'");
      }
      std::vector<double> values;
      double v = 0.0;
      while (row >> v) values.push_back(v);
      Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
      for (std::size_t t = 0; t < values.size(); ++t) out[static_cast<Eigen::Index>(t)] = values[t];
      return out;
    };
    for (int bi = 0; bi < blocks; ++bi) group.p_diagonals.push_back(read_vector("p", bi));
    for (int ei = 0; ei < eqs; ++ei) group.eq_multipliers.push_back(read_vector("u", ei));
    cert.groups.push_back(std::move(group));
  }
  return cert;
}

}  // namespace tracepop
