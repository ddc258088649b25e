#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace tracepop {

// Exponent vector of a monomial; size is the ambient variable count.
using Exponent = std::vector<int>;

int total_degree(const Exponent& a);

// Strict total order: lower total degree first; within a degree the
// lexicographically larger tuple comes first, so x1 precedes x2.
bool graded_lex_less(const Exponent& a, const Exponent& b);

struct GradedLexLess {
  bool operator()(const Exponent& a, const Exponent& b) const {
    return graded_lex_less(a, b);
  }
};

struct ExponentHash {
  std::size_t operator()(const Exponent& a) const noexcept;
};

// C(n + d, n); throws std::overflow_error instead of wrapping.
std::uint64_t basis_size(int n, int d);

std::vector<Exponent> build_basis(int n, int d);

// Monomials of degree <= d in n variables, stored in graded-lex order
// with O(1) position lookup.
class MonomialBasis {
 public:
  MonomialBasis(int n, int d);

  int vars() const { return n_; }
  int degree() const { return d_; }
  int size() const { return static_cast<int>(monomials_.size()); }
  const Exponent& monomial(int position) const { return monomials_[position]; }
  const std::vector<Exponent>& monomials() const { return monomials_; }

  // Position in graded-lex order; -1 if the monomial is outside the basis.
  int position(const Exponent& alpha) const;

 private:
  int n_;
  int d_;
  std::vector<Exponent> monomials_;
  std::unordered_map<Exponent, int, ExponentHash> index_;
};

}  // namespace tracepop
