#include "tracepop/basis.hpp"

#include <stdexcept>
#include <string>

namespace tracepop {

int total_degree(const Exponent& a) {
  int t = 0;
  for (int e : a) t += e;
  return t;
}

bool graded_lex_less(const Exponent& a, const Exponent& b) {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  return a > b;
}

std::size_t ExponentHash::operator()(const Exponent& a) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int e : a) {
    h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t basis_size(int n, int d) {
  if (n < 0 || d < 0) throw std::invalid_argument("basis_size: negative argument");
  std::uint64_t r = 1;
  // C(n+d, d) built incrementally; each intermediate value is itself a
  // binomial coefficient, so the division below is exact.
  for (int i = 1; i <= d; ++i) {
    std::uint64_t t;
    if (__builtin_mul_overflow(r, static_cast<std::uint64_t>(n + i), &t)) {
      throw std::overflow_error("basis_size: count exceeds 64 bits for n=" +
                                std::to_string(n) + " d=" + std::to_string(d));
    }
    r = t / static_cast<std::uint64_t>(i);
  }
  return r;
}

namespace {

void enumerate_degree(int n, int pos, int remaining, Exponent& cur,
                      std::vector<Exponent>& out) {
  if (pos == n - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  // Largest exponent first at each position yields graded-lex order directly.
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    enumerate_degree(n, pos + 1, remaining - e, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

std::vector<Exponent> build_basis(int n, int d) {
  if (n <= 0) throw std::invalid_argument("build_basis: need at least one variable");
  if (d < 0) throw std::invalid_argument("build_basis: negative degree");
  const std::uint64_t count = basis_size(n, d);
  if (count > (1u << 28)) {
    throw std::overflow_error("build_basis: basis with " + std::to_string(count) +
                              " monomials is too large to materialize");
  }
  std::vector<Exponent> out;
  out.reserve(count);
  Exponent cur(n, 0);
  for (int t = 0; t <= d; ++t) enumerate_degree(n, 0, t, cur, out);
  return out;
}

MonomialBasis::MonomialBasis(int n, int d)
    : n_(n), d_(d), monomials_(build_basis(n, d)) {
  index_.reserve(monomials_.size());
  for (int i = 0; i < static_cast<int>(monomials_.size()); ++i) {
    index_.emplace(monomials_[i], i);
  }
}

int MonomialBasis::position(const Exponent& alpha) const {
  auto it = index_.find(alpha);
  return it == index_.end() ? -1 : it->second;
}

}  // namespace tracepop
