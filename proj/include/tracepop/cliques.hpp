#pragma once

#include <string>
#include <vector>

#include "tracepop/pop.hpp"

namespace tracepop {

// Variable co-occurrence graph: an edge joins two variables appearing in the
// same objective monomial or in the same constraint.
struct CspGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // sorted neighbor lists, no self-loops
};

CspGraph csp_graph(const PopInstance& pop);

struct ChordalResult {
  std::vector<std::vector<int>> cliques;        // maximal, running-intersection order
  std::vector<int> elimination_order;           // perfect elimination order of the extension
  std::vector<std::vector<int>> extension_adj;  // chordal extension adjacency
};

// Greedy minimum-degree elimination (ties by smallest vertex index), clique
// absorption, then a max-overlap ordering satisfying the running-intersection
// property.
ChordalResult chordal_cliques(const CspGraph& graph);

// First clique (by index) containing each constraint's variables; throws
// std::invalid_argument naming any constraint that fits no clique.
CliqueStructure assign_constraints(const PopInstance& pop,
                                   const std::vector<std::vector<int>>& cliques);

// One warning per clique that has no exact ball constraint c - ||x(I_j)||^2
// among its assigned inequalities; empty when all cliques carry one.
std::vector<std::string> structure_warnings(const PopInstance& pop, const CliqueStructure& cs);

// Text listing of clique, inequality, and equality set sizes.
std::string clique_report(const CliqueStructure& cs);

}  // namespace tracepop
