#include "tracepop/pop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tracepop {

namespace {

void check_assignment(const std::vector<std::vector<int>>& assignment,
                      const std::vector<std::vector<int>>& cliques,
                      const std::vector<Polynomial>& polys, const char* what) {
  std::vector<int> hits(polys.size(), 0);
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    for (int i : assignment[j]) {
      if (i < 0 || i >= static_cast<int>(polys.size())) {
        throw std::invalid_argument(std::string(what) + " assignment index out of range");
      }
      hits[i] += 1;
      for (int v : support_vars(polys[i])) {
        if (!std::binary_search(cliques[j].begin(), cliques[j].end(), v)) {
          throw std::invalid_argument(std::string(what) + " constraint " + std::to_string(i) +
                                      " not supported in clique " + std::to_string(j));
        }
      }
    }
  }
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i] != 1) {
      throw std::invalid_argument(std::string(what) + " assignment is not a partition at index " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

void check_pop(const PopInstance& pop) {
  if (pop.n < 1) throw std::invalid_argument("pop: need at least one variable");
  if (pop.f.vars() != pop.n) throw std::invalid_argument("pop: objective arity mismatch");
  for (const Polynomial& p : pop.g) {
    if (p.vars() != pop.n) throw std::invalid_argument("pop: inequality arity mismatch");
  }
  for (const Polynomial& p : pop.h) {
    if (p.vars() != pop.n) throw std::invalid_argument("pop: equality arity mismatch");
  }
  if (!pop.cliques) return;

  const CliqueStructure& cs = *pop.cliques;
  if (cs.cliques.empty()) throw std::invalid_argument("pop: empty clique list");
  if (static_cast<int>(cs.ineq_assignment.size()) != cs.num_cliques() ||
      static_cast<int>(cs.eq_assignment.size()) != cs.num_cliques()) {
    throw std::invalid_argument("pop: assignment length mismatch");
  }
  std::vector<char> covered(pop.n, 0);
  for (const auto& clique : cs.cliques) {
    if (clique.empty()) throw std::invalid_argument("pop: empty clique");
    if (!std::is_sorted(clique.begin(), clique.end())) {
      throw std::invalid_argument("pop: clique not sorted");
    }
    for (int v : clique) {
      if (v < 0 || v >= pop.n) throw std::invalid_argument("pop: clique variable out of range");
      covered[v] = 1;
    }
  }
  for (int v = 0; v < pop.n; ++v) {
    if (!covered[v]) {
      throw std::invalid_argument("pop: variable " + std::to_string(v + 1) +
                                  " not covered by any clique");
    }
  }
  check_assignment(cs.ineq_assignment, cs.cliques, pop.g, "inequality");
  check_assignment(cs.eq_assignment, cs.cliques, pop.h, "equality");
}

int kmin(const PopInstance& pop) {
  int k = std::max(1, half_ceil_degree(pop.f));
  for (const Polynomial& p : pop.g) k = std::max(k, half_ceil_degree(p));
  for (const Polynomial& p : pop.h) k = std::max(k, half_ceil_degree(p));
  return k;
}

FeasibilityReport validate(const PopInstance& pop, const Eigen::VectorXd& point, double tol) {
  if (point.size() != pop.n) throw std::invalid_argument("validate: point length mismatch");
  FeasibilityReport report;
  report.tol = tol;
  report.feasible = true;
  for (const Polynomial& p : pop.g) {
    const double v = eval(p, point);
    report.g_values.push_back(v);
    if (v < -tol) report.feasible = false;
  }
  for (const Polynomial& p : pop.h) {
    const double v = eval(p, point);
    report.h_values.push_back(v);
    if (std::abs(v) > tol) report.feasible = false;
  }
  return report;
}

PopInstance reformulate_equivalent_degree(const PopInstance& pop, double R) {
  check_pop(pop);
  if (R <= 0.0) throw std::invalid_argument("reformulate: need R > 0");

  Polynomial norm_sq(pop.n);
  for (int t = 0; t < pop.n; ++t) {
    Exponent e(pop.n, 0);
    e[t] = 2;
    norm_sq.add_term(e, 1.0);
  }
  Polynomial ball = sub(Polynomial::constant(pop.n, R), norm_sq);

  PopInstance out;
  out.n = pop.n;
  out.f = pop.f;
  out.h = pop.h;

  if (pop.g.empty()) {
    out.g.push_back(ball);
    return out;
  }

  int u = 1;
  double norm_sum = 0.0;
  for (const Polynomial& gi : pop.g) {
    u = std::max(u, half_ceil_degree(gi));
    norm_sum += l1_norm(gi);
  }
  const Polynomial shift = add(Polynomial::constant(pop.n, 1.0), norm_sq);

  Polynomial total(pop.n);
  for (const Polynomial& gi : pop.g) {
    const Polynomial lifted = mul(gi, pow_int(shift, u - half_ceil_degree(gi)));
    out.g.push_back(lifted);
    total = add(total, lifted);
  }
  const double L = std::pow(R + 1.0, u) * norm_sum;
  out.g.push_back(sub(Polynomial::constant(pop.n, L), total));
  out.g.push_back(ball);
  return out;
}

std::vector<GroupView> group_views(const PopInstance& pop) {
  std::vector<GroupView> views;
  if (!pop.cliques) {
    GroupView view;
    view.vars.resize(pop.n);
    for (int v = 0; v < pop.n; ++v) view.vars[v] = v;
    view.g_indices.resize(pop.g.size());
    for (std::size_t i = 0; i < pop.g.size(); ++i) view.g_indices[i] = static_cast<int>(i);
    view.h_indices.resize(pop.h.size());
    for (std::size_t j = 0; j < pop.h.size(); ++j) view.h_indices[j] = static_cast<int>(j);
    views.push_back(std::move(view));
    return views;
  }
  const CliqueStructure& cs = *pop.cliques;
  for (int j = 0; j < cs.num_cliques(); ++j) {
    GroupView view;
    view.vars = cs.cliques[j];
    view.g_indices = cs.ineq_assignment[j];
    view.h_indices = cs.eq_assignment[j];
    views.push_back(std::move(view));
  }
  return views;
}

Polynomial localize(const Polynomial& p, const GroupView& view, int global_n) {
  std::vector<int> var_map(global_n, -1);
  for (std::size_t t = 0; t < view.vars.size(); ++t) var_map[view.vars[t]] = static_cast<int>(t);
  return remap_vars(p, var_map, static_cast<int>(view.vars.size()));
}

}  // namespace tracepop
