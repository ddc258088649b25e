#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tracepop/polynomial.hpp"

namespace tracepop {

// Variable cliques I_j with the induced constraint split: ineq_assignment[j]
// and eq_assignment[j] partition the inequality/equality index sets, and
// every assigned constraint is supported inside its clique.
struct CliqueStructure {
  std::vector<std::vector<int>> cliques;
  std::vector<std::vector<int>> ineq_assignment;
  std::vector<std::vector<int>> eq_assignment;

  int num_cliques() const { return static_cast<int>(cliques.size()); }
};

struct PopInstance {
  int n = 0;
  Polynomial f{0};
  std::vector<Polynomial> g;
  std::vector<Polynomial> h;
  std::optional<CliqueStructure> cliques;

  int num_ineq() const { return static_cast<int>(g.size()); }
  int num_eq() const { return static_cast<int>(h.size()); }
};

// Throws std::invalid_argument on arity mismatches or an assignment that
// breaks the CliqueStructure invariants.
void check_pop(const PopInstance& pop);

// Minimal relaxation order max over half-ceil degrees, clamped to >= 1.
int kmin(const PopInstance& pop);

struct FeasibilityReport {
  std::vector<double> g_values;
  std::vector<double> h_values;
  bool feasible = false;
  double tol = 0.0;
};

FeasibilityReport validate(const PopInstance& pop, const Eigen::VectorXd& point,
                           double tol = 1e-8);

// Equivalent-degree rewrite: each g_i is multiplied by (1+||x||^2)^{u-ceil_i},
// then the budget constraint L - sum and the ball R - ||x||^2 are appended.
// Preserves the feasible set whenever S(g) lies inside the radius-sqrt(R) ball.
PopInstance reformulate_equivalent_degree(const PopInstance& pop, double R);

// One certification/assembly group: the whole instance when no clique
// structure is present, otherwise one view per clique.
struct GroupView {
  std::vector<int> vars;       // global variable ids, ascending
  std::vector<int> g_indices;  // inequality indices handled by this group
  std::vector<int> h_indices;
};

std::vector<GroupView> group_views(const PopInstance& pop);

// Remap a global polynomial into the group's local variables; the support
// must lie inside view.vars.
Polynomial localize(const Polynomial& p, const GroupView& view, int global_n);

}  // namespace tracepop
