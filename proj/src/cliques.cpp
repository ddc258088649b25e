#include "tracepop/cliques.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tracepop {

namespace {

void connect_all(std::vector<std::set<int>>& adj, const std::vector<int>& vars) {
  for (std::size_t a = 0; a < vars.size(); ++a) {
    for (std::size_t b = a + 1; b < vars.size(); ++b) {
      adj[vars[a]].insert(vars[b]);
      adj[vars[b]].insert(vars[a]);
    }
  }
}

}  // namespace

CspGraph csp_graph(const PopInstance& pop) {
  check_pop(pop);
  std::vector<std::set<int>> adj(pop.n);
  for (const auto& [alpha, c] : pop.f.terms()) {
    (void)c;
    std::vector<int> vars;
    for (int t = 0; t < pop.n; ++t) {
      if (alpha[t] > 0) vars.push_back(t);
    }
    connect_all(adj, vars);
  }
  for (const Polynomial& p : pop.g) connect_all(adj, support_vars(p));
  for (const Polynomial& p : pop.h) connect_all(adj, support_vars(p));

  CspGraph graph;
  graph.n = pop.n;
  graph.adj.resize(pop.n);
  for (int v = 0; v < pop.n; ++v) graph.adj[v].assign(adj[v].begin(), adj[v].end());
  return graph;
}

ChordalResult chordal_cliques(const CspGraph& graph) {
  const int n = graph.n;
  std::vector<std::set<int>> work(n);
  for (int v = 0; v < n; ++v) work[v].insert(graph.adj[v].begin(), graph.adj[v].end());
  std::vector<std::set<int>> extension = work;

  ChordalResult result;
  std::vector<char> eliminated(n, 0);
  std::vector<std::vector<int>> candidates;

  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      if (best < 0 || work[v].size() < work[best].size()) best = v;
    }
    result.elimination_order.push_back(best);
    eliminated[best] = 1;

    std::vector<int> clique;
    clique.push_back(best);
    for (int w : work[best]) clique.push_back(w);
    std::sort(clique.begin(), clique.end());
    candidates.push_back(clique);

    // Fill: the remaining neighborhood becomes a clique in the extension.
    std::vector<int> nbrs(work[best].begin(), work[best].end());
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        if (work[nbrs[a]].insert(nbrs[b]).second) {
          work[nbrs[b]].insert(nbrs[a]);
          extension[nbrs[a]].insert(nbrs[b]);
          extension[nbrs[b]].insert(nbrs[a]);
        }
      }
    }
    for (int w : nbrs) work[w].erase(best);
  }

  result.extension_adj.resize(n);
  for (int v = 0; v < n; ++v) {
    result.extension_adj[v].assign(extension[v].begin(), extension[v].end());
  }

  // Keep maximal candidates only, preserving discovery order for ties.
  std::vector<std::vector<int>> maximal;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool contained = false;
    for (std::size_t j = 0; j < candidates.size() && !contained; ++j) {
      if (i == j) continue;
      if (candidates[i].size() > candidates[j].size()) continue;
      if (candidates[i].size() == candidates[j].size() && i < j) continue;
      contained = std::includes(candidates[j].begin(), candidates[j].end(),
                                candidates[i].begin(), candidates[i].end());
    }
    if (!contained) maximal.push_back(candidates[i]);
  }

  // Running-intersection order: start from the largest clique, then greedily
  // take the clique with the largest overlap with the covered variable set.
  const int p = static_cast<int>(maximal.size());
  std::vector<char> used(p, 0);
  std::set<int> covered;
  for (int round = 0; round < p; ++round) {
    int best = -1;
    std::size_t best_score = 0;
    for (int i = 0; i < p; ++i) {
      if (used[i]) continue;
      std::size_t score;
      if (round == 0) {
        score = maximal[i].size();
      } else {
        score = 0;
        for (int v : maximal[i]) score += covered.count(v);
      }
      if (best < 0 || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    used[best] = 1;
    covered.insert(maximal[best].begin(), maximal[best].end());
    result.cliques.push_back(maximal[best]);
  }
  return result;
}

CliqueStructure assign_constraints(const PopInstance& pop,
                                   const std::vector<std::vector<int>>& cliques) {
  CliqueStructure cs;
  cs.cliques = cliques;
  cs.ineq_assignment.resize(cliques.size());
  cs.eq_assignment.resize(cliques.size());

  auto place = [&](const Polynomial& poly, int index, const char* what) -> int {
    const std::vector<int> vars = support_vars(poly);
    for (std::size_t j = 0; j < cliques.size(); ++j) {
      bool inside = true;
      for (int v : vars) {
        if (!std::binary_search(cliques[j].begin(), cliques[j].end(), v)) {
          inside = false;
          break;
        }
      }
      if (inside) return static_cast<int>(j);
    }
    throw std::invalid_argument(std::string(what) + " constraint " + std::to_string(index + 1) +
                                " fits no clique");
  };

  for (int i = 0; i < pop.num_ineq(); ++i) {
    cs.ineq_assignment[place(pop.g[i], i, "inequality")].push_back(i);
  }
  for (int i = 0; i < pop.num_eq(); ++i) {
    cs.eq_assignment[place(pop.h[i], i, "equality")].push_back(i);
  }
  return cs;
}

std::vector<std::string> structure_warnings(const PopInstance& pop, const CliqueStructure& cs) {
  std::vector<std::string> warnings;
  for (int j = 0; j < cs.num_cliques(); ++j) {
    bool has_ball = false;
    for (int i : cs.ineq_assignment[j]) {
      const Polynomial& gi = pop.g[i];
      const double c0 = gi.coeff(Exponent(pop.n, 0));
      if (c0 <= 0.0) continue;
      if (static_cast<int>(gi.terms().size()) != 1 + static_cast<int>(cs.cliques[j].size())) {
        continue;
      }
      bool ball = true;
      for (int v : cs.cliques[j]) {
        Exponent e(pop.n, 0);
        e[v] = 2;
        if (gi.coeff(e) != -1.0) {
          ball = false;
          break;
        }
      }
      if (ball) {
        has_ball = true;
        break;
      }
    }
    if (!has_ball) {
      warnings.push_back("clique " + std::to_string(j + 1) +
                         " has no ball constraint over its variables");
    }
  }
  return warnings;
}

std::string clique_report(const CliqueStructure& cs) {
  std::ostringstream out;
  out << "cliques " << cs.num_cliques() << "\n";
  for (int j = 0; j < cs.num_cliques(); ++j) {
    out << "clique " << (j + 1) << " vars " << cs.cliques[j].size() << " ineq "
        << cs.ineq_assignment[j].size() << " eq " << cs.eq_assignment[j].size() << "\n";
  }
  return out.str();
}

}  // namespace tracepop
