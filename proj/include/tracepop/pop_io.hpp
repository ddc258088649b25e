#pragma once

#include <stdexcept>
#include <string>

#include "tracepop/pop.hpp"

namespace tracepop {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Terms in graded-lex order, coefficients at full round-trip precision,
// e.g. "2.5*x1^2*x3 + -1*x2". The zero polynomial prints as "0".
std::string poly_to_string(const Polynomial& p);

Polynomial parse_poly(const std::string& text, int n);

// Line format: `pop n=<int>`, `min <poly>`, then `st <poly> >= 0` or
// `st <poly> == 0` per constraint. Round-trips bit-exactly.
std::string pop_to_string(const PopInstance& pop);

PopInstance parse_pop(const std::string& text);

PopInstance load_pop(const std::string& path);
void save_pop(const PopInstance& pop, const std::string& path);

}  // namespace tracepop
