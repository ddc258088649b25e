#include "tracepop/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "tracepop/eigs.hpp"

namespace tracepop {

namespace {

Exponent add_exp(const Exponent& a, const Exponent& b) {
  Exponent out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) out[t] = a[t] + b[t];
  return out;
}

// Accumulates one sparse symmetric matrix; entries keyed to the upper
// triangle so symmetric contributions merge.
class RowBuilder {
 public:
  void add(int block, int i, int j, double v) {
    if (i > j) std::swap(i, j);
    values_[std::make_tuple(block, i, j)] += v;
  }

  BlockSymMatrix finish() const {
    BlockSymMatrix out;
    out.entries.reserve(values_.size());
    for (const auto& [key, v] : values_) {
      if (v == 0.0) continue;
      out.entries.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v});
    }
    return out;
  }

  void clear() { values_.clear(); }

 private:
  std::map<std::tuple<int, int, int>, double> values_;
};

void add_pickup(RowBuilder& rb, int block, const MonomialBasis& basis, const Exponent& alpha,
                double coeff) {
  const auto [p, q] = representative_pair(alpha, basis);
  rb.add(block, p, q, p == q ? coeff : 0.5 * coeff);
}

struct GroupLayout {
  int base_block = 0;
  MonomialBasis moment;
  std::vector<MonomialBasis> loc;          // one per assigned inequality
  std::vector<Polynomial> g_local;
  std::vector<Polynomial> h_local;
  std::vector<std::vector<Exponent>> eq_bases;

  GroupLayout(const PopInstance& pop, int k, const GroupView& view, int base)
      : base_block(base), moment(static_cast<int>(view.vars.size()), k) {
    const int nv = static_cast<int>(view.vars.size());
    for (int i : view.g_indices) {
      g_local.push_back(localize(pop.g[i], view, pop.n));
      loc.emplace_back(nv, k - half_ceil_degree(g_local.back()));
    }
    for (int j : view.h_indices) {
      h_local.push_back(localize(pop.h[j], view, pop.n));
      eq_bases.push_back(build_basis(nv, 2 * (k - half_ceil_degree(h_local.back()))));
    }
  }
};

// Emits one group's B1 (moment structure), B2 (localizing links), B3
// (equality rows) and the y0 row, in that order.
void assemble_group_rows(const GroupLayout& layout, std::vector<BlockSymMatrix>& rows,
                         std::vector<double>& rhs) {
  RowBuilder rb;
  const MonomialBasis& mb = layout.moment;
  const int s = mb.size();
  const int moment_block = layout.base_block;

  for (int p = 0; p < s; ++p) {
    for (int q = p; q < s; ++q) {
      const Exponent alpha = add_exp(mb.monomial(p), mb.monomial(q));
      const auto rep = representative_pair(alpha, mb);
      if (rep.first == p && rep.second == q) continue;
      rb.clear();
      rb.add(moment_block, p, q, p == q ? 1.0 : 0.5);
      rb.add(moment_block, rep.first, rep.second, rep.first == rep.second ? -1.0 : -0.5);
      rows.push_back(rb.finish());
      rhs.push_back(0.0);
    }
  }

  for (std::size_t i = 0; i < layout.g_local.size(); ++i) {
    const MonomialBasis& lb = layout.loc[i];
    const int loc_block = layout.base_block + 1 + static_cast<int>(i);
    for (int p = 0; p < lb.size(); ++p) {
      for (int q = p; q < lb.size(); ++q) {
        const Exponent pq = add_exp(lb.monomial(p), lb.monomial(q));
        rb.clear();
        for (const auto& [gamma, coeff] : layout.g_local[i].terms()) {
          add_pickup(rb, moment_block, mb, add_exp(pq, gamma), coeff);
        }
        rb.add(loc_block, p, q, p == q ? -1.0 : -0.5);
        rows.push_back(rb.finish());
        rhs.push_back(0.0);
      }
    }
  }

  for (std::size_t j = 0; j < layout.h_local.size(); ++j) {
    for (const Exponent& beta : layout.eq_bases[j]) {
      rb.clear();
      for (const auto& [gamma, coeff] : layout.h_local[j].terms()) {
        add_pickup(rb, moment_block, mb, add_exp(beta, gamma), coeff);
      }
      rows.push_back(rb.finish());
      rhs.push_back(0.0);
    }
  }

  rb.clear();
  rb.add(moment_block, 0, 0, 1.0);
  rows.push_back(rb.finish());
  rhs.push_back(1.0);
}

void conjugate_by_p_inverse(BlockSymMatrix& A, const std::vector<Eigen::VectorXd>& p_by_block) {
  for (SymEntry& e : A.entries) {
    e.value /= p_by_block[e.block][e.row] * p_by_block[e.block][e.col];
  }
}

StandardSdp assemble(const PopInstance& pop, int k, const CtpCertificate& cert,
                     const std::vector<GroupView>& views) {
  if (cert.k != k || cert.groups.size() != views.size()) {
    throw std::invalid_argument("certificate does not match the instance layout");
  }
  StandardSdp sdp;
  std::vector<GroupLayout> layouts;
  std::vector<Eigen::VectorXd> p_by_block;
  for (std::size_t gi = 0; gi < views.size(); ++gi) {
    layouts.emplace_back(pop, k, views[gi], static_cast<int>(sdp.block_sizes.size()));
    const GroupLayout& layout = layouts.back();
    const CtpCertGroup& cgroup = cert.groups[gi];
    if (cgroup.p_diagonals.size() != layout.loc.size() + 1) {
      throw std::invalid_argument("certificate block count mismatch in group " +
                                  std::to_string(gi));
    }
    SdpGroup group;
    group.first_block = layout.base_block;
    group.num_blocks = 1 + static_cast<int>(layout.loc.size());
    group.trace_a = cgroup.a;
    group.original_trace = cgroup.a;
    sdp.groups.push_back(group);

    sdp.block_sizes.push_back(layout.moment.size());
    for (const MonomialBasis& lb : layout.loc) sdp.block_sizes.push_back(lb.size());
    if (cgroup.p_diagonals[0].size() != layout.moment.size()) {
      throw std::invalid_argument("certificate moment block size mismatch");
    }
    for (std::size_t i = 0; i < layout.loc.size(); ++i) {
      if (cgroup.p_diagonals[i + 1].size() != layout.loc[i].size()) {
        throw std::invalid_argument("certificate localizing block size mismatch");
      }
    }
    for (const Eigen::VectorXd& p : cgroup.p_diagonals) p_by_block.push_back(p);
  }

  std::vector<double> rhs;
  for (const GroupLayout& layout : layouts) {
    assemble_group_rows(layout, sdp.constraints, rhs);
  }

  // Overlap rows: one per non-representative clique of every moment index
  // supported in more than one clique.
  if (views.size() > 1) {
    std::map<Exponent, std::vector<int>, GradedLexLess> shared;
    for (std::size_t a = 0; a < views.size(); ++a) {
      for (std::size_t b = a + 1; b < views.size(); ++b) {
        std::vector<int> common;
        std::set_intersection(views[a].vars.begin(), views[a].vars.end(),
                              views[b].vars.begin(), views[b].vars.end(),
                              std::back_inserter(common));
        if (common.empty()) continue;
        for (const Exponent& local : build_basis(static_cast<int>(common.size()), 2 * k)) {
          if (total_degree(local) == 0) continue;
          Exponent global(pop.n, 0);
          for (std::size_t t = 0; t < common.size(); ++t) global[common[t]] = local[t];
          shared.emplace(std::move(global), std::vector<int>());
        }
      }
    }
    for (auto& [alpha, owners] : shared) {
      for (std::size_t gi = 0; gi < views.size(); ++gi) {
        bool inside = true;
        for (int v = 0; v < pop.n && inside; ++v) {
          if (alpha[v] != 0 &&
              !std::binary_search(views[gi].vars.begin(), views[gi].vars.end(), v)) {
            inside = false;
          }
        }
        if (inside) owners.push_back(static_cast<int>(gi));
      }
    }
    RowBuilder rb;
    for (const auto& [alpha, owners] : shared) {
      if (owners.size() < 2) continue;
      const int j0 = owners.front();
      const auto local_exp = [&alpha](const GroupView& view) {
        Exponent out(view.vars.size(), 0);
        for (std::size_t t = 0; t < view.vars.size(); ++t) out[t] = alpha[view.vars[t]];
        return out;
      };
      const Exponent base_local = local_exp(views[j0]);
      for (std::size_t oi = 1; oi < owners.size(); ++oi) {
        const int j = owners[oi];
        rb.clear();
        add_pickup(rb, layouts[j0].base_block, layouts[j0].moment, base_local, 1.0);
        add_pickup(rb, layouts[j].base_block, layouts[j].moment, local_exp(views[j]), -1.0);
        sdp.constraints.push_back(rb.finish());
        rhs.push_back(0.0);
      }
    }
  }

  // Objective: each monomial of f lands in the first clique containing it.
  RowBuilder cost;
  for (const auto& [alpha, coeff] : pop.f.terms()) {
    bool placed = false;
    for (std::size_t gi = 0; gi < views.size() && !placed; ++gi) {
      bool inside = true;
      for (int v = 0; v < pop.n && inside; ++v) {
        if (alpha[v] != 0 &&
            !std::binary_search(views[gi].vars.begin(), views[gi].vars.end(), v)) {
          inside = false;
        }
      }
      if (!inside) continue;
      Exponent local(views[gi].vars.size(), 0);
      for (std::size_t t = 0; t < views[gi].vars.size(); ++t) local[t] = alpha[views[gi].vars[t]];
      add_pickup(cost, layouts[gi].base_block, layouts[gi].moment, local, coeff);
      placed = true;
    }
    if (!placed) {
      throw std::invalid_argument("objective term not supported in any clique");
    }
  }
  sdp.C = cost.finish();

  conjugate_by_p_inverse(sdp.C, p_by_block);
  for (BlockSymMatrix& A : sdp.constraints) conjugate_by_p_inverse(A, p_by_block);

  sdp.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rhs.size()));
  for (std::size_t r = 0; r < rhs.size(); ++r) sdp.b[static_cast<Eigen::Index>(r)] = rhs[r];
  return sdp;
}

std::string format_value(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return std::string(buffer);
}

}  // namespace

BlockDense zero_blocks(const StandardSdp& sdp) {
  BlockDense X;
  X.reserve(sdp.block_sizes.size());
  for (int s : sdp.block_sizes) X.push_back(Eigen::MatrixXd::Zero(s, s));
  return X;
}

double sym_inner(const BlockSymMatrix& A, const BlockDense& X) {
  double total = 0.0;
  for (const SymEntry& e : A.entries) {
    const double x = X[e.block](e.row, e.col);
    total += e.row == e.col ? e.value * x : 2.0 * e.value * x;
  }
  return total;
}

double frob_norm(const BlockSymMatrix& A) {
  double total = 0.0;
  for (const SymEntry& e : A.entries) {
    total += e.row == e.col ? e.value * e.value : 2.0 * e.value * e.value;
  }
  return std::sqrt(total);
}

Eigen::VectorXd apply_constraints(const StandardSdp& sdp, const BlockDense& X) {
  Eigen::VectorXd out(sdp.zeta());
  for (int i = 0; i < sdp.zeta(); ++i) out[i] = sym_inner(sdp.constraints[i], X);
  return out;
}

void add_scaled_adjoint(const StandardSdp& sdp, const Eigen::VectorXd& v, BlockDense& acc) {
  for (int i = 0; i < sdp.zeta(); ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    for (const SymEntry& e : sdp.constraints[i].entries) {
      acc[e.block](e.row, e.col) += vi * e.value;
      if (e.row != e.col) acc[e.block](e.col, e.row) += vi * e.value;
    }
  }
}

BlockDense dense_blocks(const StandardSdp& sdp, const BlockSymMatrix& A) {
  BlockDense out = zero_blocks(sdp);
  for (const SymEntry& e : A.entries) {
    out[e.block](e.row, e.col) += e.value;
    if (e.row != e.col) out[e.block](e.col, e.row) += e.value;
  }
  return out;
}

std::pair<int, int> representative_pair(const Exponent& alpha, const MonomialBasis& basis) {
  const int k = basis.degree();
  const int deg = total_degree(alpha);
  int d = deg - k;
  if (d < 0) d = 0;
  Exponent mu(alpha.size(), 0);
  int left = d;
  for (std::size_t t = 0; t < alpha.size() && left > 0; ++t) {
    const int take = std::min(alpha[t], left);
    mu[t] = take;
    left -= take;
  }
  Exponent nu(alpha.size());
  for (std::size_t t = 0; t < alpha.size(); ++t) nu[t] = alpha[t] - mu[t];
  const int p = basis.position(mu);
  const int q = basis.position(nu);
  if (p < 0 || q < 0) {
    throw std::invalid_argument("moment index outside the basis range");
  }
  return {std::min(p, q), std::max(p, q)};
}

Exponent MomentIndexMap::owner(int i, int j) const {
  return add_exp(basis_.monomial(i), basis_.monomial(j));
}

bool MomentIndexMap::is_representative(int i, int j) const {
  if (i > j) std::swap(i, j);
  return representative(owner(i, j)) == std::make_pair(i, j);
}

std::uint64_t dense_zeta(const PopInstance& pop, int k) {
  const int n = pop.n;
  const std::uint64_t s_k = basis_size(n, k);
  std::uint64_t zeta = 1 + s_k * (s_k + 1) / 2 - basis_size(n, 2 * k);
  for (const Polynomial& gi : pop.g) {
    const std::uint64_t s = basis_size(n, k - half_ceil_degree(gi));
    zeta += s * (s + 1) / 2;
  }
  for (const Polynomial& hj : pop.h) {
    zeta += basis_size(n, 2 * (k - half_ceil_degree(hj)));
  }
  return zeta;
}

StandardSdp assemble_dense(const PopInstance& pop, int k, const CtpCertificate& cert) {
  PopInstance flat = pop;
  flat.cliques.reset();
  return assemble(flat, k, cert, group_views(flat));
}

StandardSdp assemble_cs(const PopInstance& pop, int k, const CtpCertificate& cert) {
  if (!pop.cliques) {
    throw std::invalid_argument("clique-structured assembly requires a clique structure");
  }
  return assemble(pop, k, cert, group_views(pop));
}

StandardSdp scale(const StandardSdp& sdp) {
  StandardSdp out = sdp;

  std::vector<double> block_factor(out.block_sizes.size(), 1.0);
  for (SdpGroup& group : out.groups) {
    for (int bofs = 0; bofs < group.num_blocks; ++bofs) {
      block_factor[group.first_block + bofs] = group.trace_a;
    }
    group.original_trace = group.trace_a;
    group.trace_a = 1.0;
  }
  for (SymEntry& e : out.C.entries) e.value *= block_factor[e.block];
  for (BlockSymMatrix& A : out.constraints) {
    for (SymEntry& e : A.entries) e.value *= block_factor[e.block];
  }

  const double sigma = frob_norm(out.C);
  if (sigma <= 0.0) {
    throw std::runtime_error("degenerate objective: cost matrix is zero");
  }
  for (SymEntry& e : out.C.entries) e.value /= sigma;
  out.value_multiplier = sdp.value_multiplier * sigma;

  for (int i = 0; i < out.zeta(); ++i) {
    const double norm = frob_norm(out.constraints[i]);
    if (norm <= 0.0) {
      throw std::runtime_error("assembly produced an empty constraint row " + std::to_string(i));
    }
    for (SymEntry& e : out.constraints[i].entries) e.value /= norm;
    out.b[i] /= norm;
  }

  const double estimate = operator_norm(out, 1e-6);
  const double inflated = 1.01 * estimate;
  if (inflated > 0.0) {
    for (BlockSymMatrix& A : out.constraints) {
      for (SymEntry& e : A.entries) e.value /= inflated;
    }
    out.b /= inflated;
  }
  out.op_norm_bound = 1.0;
  out.scaled = true;
  return out;
}

TraceProbeReport trace_probe(const PopInstance& pop, int k, const CtpCertificate& cert,
                             int trials, bool skip_conjugation,
                             std::optional<Eigen::VectorXd> hint, unsigned long long seed) {
  TraceProbeReport report;
  const std::vector<GroupView> views = group_views(pop);
  if (cert.groups.size() != views.size()) {
    report.message = "certificate group count mismatch";
    return report;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXd z(pop.n);
    if (hint) {
      for (int v = 0; v < pop.n; ++v) z[v] = (*hint)[v] + 0.25 * gauss(rng);
    } else {
      const double s = 1.0 / std::sqrt(static_cast<double>(std::max(pop.n, 1)));
      for (int v = 0; v < pop.n; ++v) z[v] = s * gauss(rng);
    }
    if (!project_onto_variety(pop, z)) {
      if (!hint) {
        report.message = "projection onto V(h) failed";
        report.trials = trials;
        return report;
      }
      z = *hint;
    }

    bool pass = true;
    for (std::size_t gi = 0; gi < views.size() && pass; ++gi) {
      const GroupView& view = views[gi];
      const int nv = static_cast<int>(view.vars.size());
      Eigen::VectorXd z_loc(nv);
      for (int t = 0; t < nv; ++t) z_loc[t] = z[view.vars[t]];

      const MonomialBasis mb(nv, k);
      Eigen::VectorXd v_mom(mb.size());
      for (int p = 0; p < mb.size(); ++p) {
        double value = 1.0;
        const Exponent& mono = mb.monomial(p);
        for (int t = 0; t < nv; ++t) {
          for (int e = 0; e < mono[t]; ++e) value *= z_loc[t];
        }
        v_mom[p] = value;
      }

      double trace = 0.0;
      {
        Eigen::VectorXd pv = v_mom;
        if (!skip_conjugation) pv = cert.groups[gi].p_diagonals[0].cwiseProduct(v_mom);
        trace += pv.squaredNorm();
      }
      for (std::size_t i = 0; i < view.g_indices.size(); ++i) {
        const Polynomial gl = localize(pop.g[view.g_indices[i]], view, pop.n);
        const MonomialBasis lb(nv, k - half_ceil_degree(gl));
        Eigen::VectorXd v_loc(lb.size());
        for (int p = 0; p < lb.size(); ++p) {
          double value = 1.0;
          const Exponent& mono = lb.monomial(p);
          for (int t = 0; t < nv; ++t) {
            for (int e = 0; e < mono[t]; ++e) value *= z_loc[t];
          }
          v_loc[p] = value;
        }
        Eigen::VectorXd pv = v_loc;
        if (!skip_conjugation) pv = cert.groups[gi].p_diagonals[i + 1].cwiseProduct(v_loc);
        trace += eval(gl, z_loc) * pv.squaredNorm();
      }
      const double deviation = std::abs(trace - cert.groups[gi].a);
      if (deviation > report.worst_deviation) {
        report.worst_deviation = deviation;
        report.offending_group = static_cast<int>(gi);
      }
      if (deviation > 1e-8) {
        pass = false;
        report.message = "trace deviates by " + std::to_string(deviation) + " in group " +
                         std::to_string(gi) + " at trial " + std::to_string(trial);
      }
    }
    ++report.trials;
    if (pass) ++report.passes;
  }
  return report;
}

std::string sdp_to_string(const StandardSdp& sdp) {
  std::ostringstream out;
  out << "sdp blocks=";
  for (std::size_t i = 0; i < sdp.block_sizes.size(); ++i) {
    if (i) out << ",";
    out << sdp.block_sizes[i];
  }
  out << " zeta=" << sdp.zeta()
      << " trace=" << format_value(sdp.groups.empty() ? 0.0 : sdp.groups[0].trace_a) << "\n";
  if (sdp.groups.size() > 1) {
    for (std::size_t j = 0; j < sdp.groups.size(); ++j) {
      out << "group " << j << " first=" << sdp.groups[j].first_block
          << " blocks=" << sdp.groups[j].num_blocks
          << " trace=" << format_value(sdp.groups[j].trace_a) << "\n";
    }
  }
  for (const SymEntry& e : sdp.C.entries) {
    out << "C " << e.block << " " << e.row << " " << e.col << " " << format_value(e.value)
        << "\n";
  }
  for (int i = 0; i < sdp.zeta(); ++i) {
    for (const SymEntry& e : sdp.constraints[i].entries) {
      out << "A " << i << " " << e.block << " " << e.row << " " << e.col << " "
          << format_value(e.value) << "\n";
    }
  }
  for (int i = 0; i < static_cast<int>(sdp.b.size()); ++i) {
    if (sdp.b[i] != 0.0) out << "b " << i << " " << format_value(sdp.b[i]) << "\n";
  }
  return out.str();
}

}  // namespace tracepop
