#include "tracepop/pop_io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace tracepop {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

double parse_number(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size() || token.empty()) {
    throw ParseError("bad numeric literal '" + token + "'");
  }
  return v;
}

// Factor forms: x<idx> or x<idx>^<pow>, 1-based indices.
void apply_variable_factor(const std::string& token, int n, Exponent& alpha) {
  if (token.size() < 2 || token[0] != 'x') {
    throw ParseError("bad variable factor '" + token + "'");
  }
  std::size_t i = 1;
  long idx = 0;
  bool any = false;
  while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) {
    idx = idx * 10 + (token[i] - '0');
    ++i;
    any = true;
  }
  if (!any || idx < 1 || idx > n) {
    throw ParseError("variable index out of range in '" + token + "'");
  }
  long power = 1;
  if (i < token.size()) {
    if (token[i] != '^') throw ParseError("bad variable factor '" + token + "'");
    ++i;
    power = 0;
    bool pow_digits = false;
    while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) {
      power = power * 10 + (token[i] - '0');
      ++i;
      pow_digits = true;
    }
    if (!pow_digits || i != token.size() || power < 1) {
      throw ParseError("bad exponent in '" + token + "'");
    }
  }
  alpha[idx - 1] += static_cast<int>(power);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::string poly_to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [a, c] : p.terms()) {
    if (!first) out += " + ";
    first = false;
    out += format_double(c);
    for (int t = 0; t < p.vars(); ++t) {
      if (a[t] == 0) continue;
      out += "*x" + std::to_string(t + 1);
      if (a[t] > 1) out += "^" + std::to_string(a[t]);
    }
  }
  return out;
}

Polynomial parse_poly(const std::string& text, int n) {
  Polynomial p(n);
  const std::string body = trim(text);
  if (body.empty()) throw ParseError("empty polynomial");
  if (body == "0") return p;
  for (const std::string& raw_term : split(body, " + ")) {
    const std::string term = trim(raw_term);
    if (term.empty()) throw ParseError("empty term in '" + body + "'");
    double c = 1.0;
    Exponent alpha(n, 0);
    bool have_coeff = false;
    std::string rest = term;
    if (rest[0] == '-' && rest.size() > 1 && rest[1] == 'x') {
      c = -1.0;
      rest = rest.substr(1);
      have_coeff = true;
    }
    for (const std::string& factor : split(rest, "*")) {
      if (factor.empty()) throw ParseError("empty factor in '" + term + "'");
      if (factor[0] == 'x') {
        apply_variable_factor(factor, n, alpha);
      } else {
        if (have_coeff) throw ParseError("unexpected second coefficient in '" + term + "'");
        c *= parse_number(factor);
        have_coeff = true;
      }
    }
    p.add_term(alpha, c);
  }
  return p;
}

std::string pop_to_string(const PopInstance& pop) {
  std::string out = "pop n=" + std::to_string(pop.n) + "\n";
  out += "min " + poly_to_string(pop.f) + "\n";
  for (const Polynomial& gi : pop.g) out += "st " + poly_to_string(gi) + " >= 0\n";
  for (const Polynomial& hj : pop.h) out += "st " + poly_to_string(hj) + " == 0\n";
  return out;
}

PopInstance parse_pop(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  PopInstance pop;
  bool have_header = false;
  bool have_objective = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      if (line.rfind("pop n=", 0) != 0) throw ParseError("expected 'pop n=<int>' header");
      const std::string num = line.substr(6);
      char* end = nullptr;
      const long n = std::strtol(num.c_str(), &end, 10);
      if (end != num.c_str() + num.size() || n < 1) {
        throw ParseError("bad variable count '" + num + "'");
      }
      pop.n = static_cast<int>(n);
      pop.f = Polynomial(pop.n);
      have_header = true;
      continue;
    }
    if (line.rfind("min ", 0) == 0) {
      if (have_objective) throw ParseError("duplicate objective line");
      pop.f = parse_poly(line.substr(4), pop.n);
      have_objective = true;
      continue;
    }
    if (line.rfind("st ", 0) == 0) {
      const std::string body = line.substr(3);
      const std::size_t ge = body.rfind(" >= 0");
      const std::size_t eq = body.rfind(" == 0");
      if (ge != std::string::npos && ge + 5 == body.size()) {
        pop.g.push_back(parse_poly(body.substr(0, ge), pop.n));
      } else if (eq != std::string::npos && eq + 5 == body.size()) {
        pop.h.push_back(parse_poly(body.substr(0, eq), pop.n));
      } else {
        throw ParseError("constraint line must end with '>= 0' or '== 0'");
      }
      continue;
    }
    throw ParseError("unrecognized line '" + line + "'");
  }
  if (!have_header) throw ParseError("missing 'pop' header");
  if (!have_objective) throw ParseError("missing 'min' objective");
  check_pop(pop);
  return pop;
}

PopInstance load_pop(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_pop(buf.str());
}

void save_pop(const PopInstance& pop, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << pop_to_string(pop);
}

}  // namespace tracepop
