#include "tracepop/generators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace tracepop {

namespace {

using Rng = std::mt19937_64;

double unit_symmetric(Rng& rng) {
  return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
}

double unit_interval(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

Polynomial norm_square(int n, const std::vector<int>& vars) {
  Polynomial p(n);
  for (int t : vars) {
    Exponent e(n, 0);
    e[t] = 2;
    p.add_term(e, 1.0);
  }
  return p;
}

std::vector<int> all_vars(int n) {
  std::vector<int> v(n);
  for (int t = 0; t < n; ++t) v[t] = t;
  return v;
}

// Dense quadratic on the given variables; TS mode keeps only total-degree-2
// terms. The constant is drawn too unless ts; callers overwrite it for
// equality constraints.
Polynomial random_quadratic(int n, const std::vector<int>& vars, bool ts, bool with_constant,
                            Rng& rng) {
  Polynomial p(n);
  const int nv = static_cast<int>(vars.size());
  for (const Exponent& local : build_basis(nv, 2)) {
    const int d = total_degree(local);
    if (ts && d != 2) continue;
    if (!with_constant && d == 0) continue;
    const double c = unit_symmetric(rng);
    Exponent global(n, 0);
    for (int t = 0; t < nv; ++t) global[vars[t]] = local[t];
    p.add_term(global, c);
  }
  return p;
}

// Random equalities vanishing at the planted point: coefficients drawn for
// every nonconstant monomial, constant set to -sum c_a * a^alpha.
std::vector<Polynomial> random_equalities(int n, const std::vector<int>& vars, int count, bool ts,
                                          const Eigen::VectorXd& planted, Rng& rng) {
  std::vector<Polynomial> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    Polynomial h = random_quadratic(n, vars, ts, false, rng);
    h.add_term(Exponent(n, 0), -eval(h, planted));
    out.push_back(std::move(h));
  }
  return out;
}

Eigen::VectorXd uniform_ball_point(int n, double r_min_pow_n, Rng& rng) {
  Eigen::VectorXd dir(n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < n; ++t) dir[t] = gauss(rng);
  const double norm = dir.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(n);
  // Radius CDF proportional to r^n between the shell bounds.
  const double radius =
      std::pow(r_min_pow_n + unit_interval(rng) * (1.0 - r_min_pow_n), 1.0 / n);
  return dir * (radius / norm);
}

int default_l(const std::string& family, int n) {
  if (family == "ball" || family == "annulus" || family == "ball-ts") return (n + 3) / 4;
  if (family == "box" || family == "simplex" || family == "box-ts") return (n + 6) / 7;
  return 143;
}

GeneratedPop generate_dense(const GeneratorSpec& spec, Rng& rng) {
  const std::string& fam = spec.family;
  const bool ts = fam == "ball-ts" || fam == "box-ts";
  const int n = spec.n;
  const int l = spec.l >= 0 ? spec.l : default_l(fam, n);

  GeneratedPop out;
  out.pop.n = n;
  out.pop.f = random_quadratic(n, all_vars(n), ts, !ts, rng);

  if (fam == "ball" || fam == "ball-ts") {
    out.planted = uniform_ball_point(n, 0.0, rng);
    out.pop.g.push_back(sub(Polynomial::constant(n, 1.0), norm_square(n, all_vars(n))));
  } else if (fam == "annulus") {
    out.planted = uniform_ball_point(n, std::pow(0.5, n / 2.0), rng);
    out.pop.g.push_back(sub(norm_square(n, all_vars(n)), Polynomial::constant(n, 0.5)));
    out.pop.g.push_back(sub(Polynomial::constant(n, 1.0), norm_square(n, all_vars(n))));
  } else if (fam == "box" || fam == "box-ts") {
    const double half = 1.0 / std::sqrt(static_cast<double>(n));
    out.planted = Eigen::VectorXd(n);
    for (int t = 0; t < n; ++t) out.planted[t] = half * unit_symmetric(rng);
    for (int t = 0; t < n; ++t) {
      Exponent e(n, 0);
      e[t] = 2;
      Polynomial gt = Polynomial::constant(n, 1.0 / n);
      gt.add_term(e, -1.0);
      out.pop.g.push_back(std::move(gt));
    }
  } else if (fam == "simplex") {
    // Uniform on {x >= 0, sum x <= 1} via normalized exponential spacings.
    Eigen::VectorXd e(n + 1);
    for (int t = 0; t <= n; ++t) e[t] = -std::log(unit_interval(rng));
    out.planted = e.head(n) / e.sum();
    for (int t = 0; t < n; ++t) out.pop.g.push_back(Polynomial::variable(n, t));
    Polynomial lin_sum(n);
    for (int t = 0; t < n; ++t) {
      Exponent a(n, 0);
      a[t] = 1;
      lin_sum.add_term(a, 1.0);
    }
    out.pop.g.push_back(sub(Polynomial::constant(n, 1.0), lin_sum));
    out.pop.g.push_back(sub(Polynomial::constant(n, 1.0), norm_square(n, all_vars(n))));
  } else {
    throw std::invalid_argument("generate: unknown family " + fam);
  }

  auto hs = random_equalities(n, all_vars(n), l, ts, out.planted, rng);
  out.pop.h = std::move(hs);
  return out;
}

GeneratedPop generate_sparse(const GeneratorSpec& spec, Rng& rng) {
  const std::string& fam = spec.family;
  const bool ts = fam == "csts-ball" || fam == "csts-box";
  const bool box = fam == "cs-box" || fam == "csts-box";
  const int n = spec.n;
  const int u = spec.u;
  const int l = spec.l >= 0 ? spec.l : default_l(fam, n);

  const auto cliques = chain_clique_layout(n, u);
  const int p = static_cast<int>(cliques.size());

  GeneratedPop out;
  out.pop.n = n;
  out.pop.f = Polynomial(n);
  for (const auto& clique : cliques) {
    out.pop.f = add(out.pop.f, random_quadratic(n, clique, ts, !ts, rng));
  }

  std::size_t max_clique = 0;
  for (const auto& clique : cliques) max_clique = std::max(max_clique, clique.size());
  const double half = box ? 1.0 / std::sqrt(static_cast<double>(u))
                          : 1.0 / std::sqrt(static_cast<double>(max_clique));
  out.planted = Eigen::VectorXd(n);
  for (int t = 0; t < n; ++t) out.planted[t] = half * unit_symmetric(rng);

  CliqueStructure cs;
  cs.cliques = cliques;
  cs.ineq_assignment.resize(p);
  cs.eq_assignment.resize(p);

  if (box) {
    // One box constraint per (clique, variable) pair: boundary variables are
    // repeated so each clique's constraints cover all of its variables.
    for (int j = 0; j < p; ++j) {
      for (int t : cliques[j]) {
        Exponent e(n, 0);
        e[t] = 2;
        Polynomial gt = Polynomial::constant(n, 1.0 / u);
        gt.add_term(e, -1.0);
        cs.ineq_assignment[j].push_back(static_cast<int>(out.pop.g.size()));
        out.pop.g.push_back(std::move(gt));
      }
    }
  } else {
    for (int j = 0; j < p; ++j) {
      cs.ineq_assignment[j].push_back(static_cast<int>(out.pop.g.size()));
      out.pop.g.push_back(sub(Polynomial::constant(n, 1.0), norm_square(n, cliques[j])));
    }
  }

  const int r = p > 0 ? l / p : 0;
  int next = 0;
  for (int j = 0; j < p; ++j) {
    const int count = (j + 1 < p) ? r : l - next;
    auto hs = random_equalities(n, cliques[j], count, ts, out.planted, rng);
    for (auto& hpoly : hs) {
      cs.eq_assignment[j].push_back(static_cast<int>(out.pop.h.size()));
      out.pop.h.push_back(std::move(hpoly));
    }
    next += count;
  }

  out.pop.cliques = std::move(cs);
  return out;
}

}  // namespace

bool is_cs_family(const std::string& family) {
  return family == "cs-ball" || family == "cs-box" || family == "csts-ball" ||
         family == "csts-box";
}

std::vector<std::vector<int>> chain_clique_layout(int n, int u) {
  if (u < 2 || u >= n) throw std::invalid_argument("clique width must satisfy 2 <= u < n");
  int p = n / u + 1;
  if (u * (p - 1) >= n) p -= 1;  // exact division would leave a contained tail
  std::vector<std::vector<int>> cliques(p);
  for (int t = 0; t < u; ++t) cliques[0].push_back(t);
  for (int j = 1; j < p; ++j) {
    const int lo = u * j - 1;
    const int hi = (j + 1 < p) ? u * (j + 1) - 1 : n - 1;
    for (int t = lo; t <= hi; ++t) cliques[j].push_back(t);
  }
  return cliques;
}

GeneratedPop generate(const GeneratorSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate: need n >= 1");
  if (spec.l >= 0 && spec.l > 100000) throw std::invalid_argument("generate: l too large");
  Rng rng(spec.seed);
  GeneratedPop out;
  if (is_cs_family(spec.family)) {
    out = generate_sparse(spec, rng);
  } else {
    if (spec.u != 0) throw std::invalid_argument("generate: clique width only applies to sparse families");
    out = generate_dense(spec, rng);
  }
  check_pop(out.pop);
  return out;
}

}  // namespace tracepop
