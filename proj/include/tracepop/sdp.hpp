#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tracepop/ctp.hpp"
#include "tracepop/pop.hpp"

namespace tracepop {

// Upper-triangle entry of one block of a block-diagonal symmetric matrix.
struct SymEntry {
  int block = 0;
  int row = 0;
  int col = 0;  // row <= col
  double value = 0.0;
};

struct BlockSymMatrix {
  std::vector<SymEntry> entries;  // sorted by (block, row, col), deduplicated
};

// Contiguous block range sharing one trace constant.
struct SdpGroup {
  int first_block = 0;
  int num_blocks = 0;
  double trace_a = 0.0;
  double original_trace = 0.0;  // before the trace fold in scale()
};

struct StandardSdp {
  std::vector<int> block_sizes;
  std::vector<SdpGroup> groups;
  BlockSymMatrix C;
  std::vector<BlockSymMatrix> constraints;
  Eigen::VectorXd b;
  bool scaled = false;
  double value_multiplier = 1.0;  // scaled objective -> original units
  double op_norm_bound = 0.0;     // upper bound on ||A|| when positive

  int zeta() const { return static_cast<int>(constraints.size()); }
  int num_blocks() const { return static_cast<int>(block_sizes.size()); }
};

using BlockDense = std::vector<Eigen::MatrixXd>;

BlockDense zero_blocks(const StandardSdp& sdp);

// <A, X> with the symmetry convention: diagonal entries once, off-diagonal
// stored entries twice.
double sym_inner(const BlockSymMatrix& A, const BlockDense& X);
double frob_norm(const BlockSymMatrix& A);

Eigen::VectorXd apply_constraints(const StandardSdp& sdp, const BlockDense& X);
void add_scaled_adjoint(const StandardSdp& sdp, const Eigen::VectorXd& v, BlockDense& acc);
BlockDense dense_blocks(const StandardSdp& sdp, const BlockSymMatrix& A);

// u' M_block u for the stored upper triangle of one block.
double sym_quad(const BlockSymMatrix& M, int block, const Eigen::VectorXd& u);

// <A_i, sum_b w_b u_b u_b'> per constraint, one pass over the entries;
// blocks with a null vector pointer contribute nothing.
Eigen::VectorXd apply_constraints_atoms(const StandardSdp& sdp,
                                        const std::vector<const Eigen::VectorXd*>& u_by_block,
                                        const std::vector<double>& weight_by_block);

// Representative entry of a moment index: the graded-lex-minimal pair
// (mu, nu) with mu + nu = alpha and both factors inside the basis.
std::pair<int, int> representative_pair(const Exponent& alpha, const MonomialBasis& basis);

// Owning moment index and representative flag for the upper-triangle
// entries of a moment block of order k.
class MomentIndexMap {
 public:
  MomentIndexMap(int nvars, int k) : basis_(nvars, k) {}

  const MonomialBasis& basis() const { return basis_; }
  Exponent owner(int i, int j) const;
  std::pair<int, int> representative(const Exponent& alpha) const {
    return representative_pair(alpha, basis_);
  }
  bool is_representative(int i, int j) const;

 private:
  MonomialBasis basis_;
};

// Constraint count of the dense assembly in closed form.
std::uint64_t dense_zeta(const PopInstance& pop, int k);

StandardSdp assemble_dense(const PopInstance& pop, int k, const CtpCertificate& cert);
StandardSdp assemble_cs(const PopInstance& pop, int k, const CtpCertificate& cert);

// Trace fold to a_j = 1, unit cost Frobenius norm, common constraint norms,
// operator norm pushed to 1 via a 1% inflated power-iteration estimate.
StandardSdp scale(const StandardSdp& sdp);

struct TraceProbeReport {
  int trials = 0;
  int passes = 0;
  double worst_deviation = 0.0;
  int offending_group = -1;
  std::string message;

  bool ok() const { return trials > 0 && passes == trials; }
};

// Builds explicit Dirac moment blocks at random points of V(h), conjugates
// by the certificate's P, and checks the per-group trace against a.
TraceProbeReport trace_probe(const PopInstance& pop, int k, const CtpCertificate& cert,
                             int trials, bool skip_conjugation = false,
                             std::optional<Eigen::VectorXd> hint = std::nullopt,
                             unsigned long long seed = 2024);

std::string sdp_to_string(const StandardSdp& sdp);

}  // namespace tracepop
