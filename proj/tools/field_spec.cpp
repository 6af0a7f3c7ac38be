#include "field_spec.hpp"

#include <cctype>
#include <cmath>
#include <vector>

#include "bochner/errors.hpp"

namespace bochner {

namespace {

enum class Fn { coord, sin, cos };

struct Factor {
  Fn fn;
  int axis;
};

struct Term {
  double coef = 1.0;
  std::vector<Factor> factors;
  int basis = -1;
};

int axis_of(char c, int dim, const std::string& tok) {
  const int a = c == 'x' ? 0 : c == 'y' ? 1 : c == 'z' ? 2 : -1;
  if (a < 0 || a >= dim) throw Error(ErrorKind::config, "bad coordinate in '" + tok + "'");
  return a;
}

Term parse_term(const std::string& text, int dim, bool vector, bool& any_basis) {
  Term t;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('*', start), text.size());
    const std::string tok = text.substr(start, end - start);
    start = end + 1;
    if (tok.empty()) throw Error(ErrorKind::config, "empty factor in field spec");
    if (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '.') {
      std::size_t used = 0;
      t.coef *= std::stod(tok, &used);
      if (used != tok.size()) throw Error(ErrorKind::config, "bad number '" + tok + "'");
    } else if (tok.size() == 1) {
      t.factors.push_back({Fn::coord, axis_of(tok[0], dim, tok)});
    } else if (tok.size() == 4 && (tok.rfind("sin", 0) == 0 || tok.rfind("cos", 0) == 0)) {
      t.factors.push_back({tok[0] == 's' ? Fn::sin : Fn::cos, axis_of(tok[3], dim, tok)});
    } else if (tok.size() >= 2 && tok[0] == 'd') {
      const bool is_vec = tok.size() == 6 && tok.substr(2) == "_vec";
      if (is_vec != vector || (!is_vec && tok.size() != 2))
        throw Error(ErrorKind::config, "basis '" + tok + "' does not match the expected field type");
      if (t.basis >= 0) throw Error(ErrorKind::config, "two basis elements in one term");
      t.basis = axis_of(tok[1], dim, tok);
      any_basis = true;
    } else {
      throw Error(ErrorKind::config, "unknown factor '" + tok + "'");
    }
    if (end == text.size()) break;
  }
  return t;
}

}  // namespace

Field parse_field_spec(const std::string& spec, int dim, bool vector) {
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorKind::config, "empty field spec");
  std::vector<Term> terms;
  bool any_basis = false;
  std::size_t i = 0;
  while (i < s.size()) {
    double sign = 1.0;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1.0 : 1.0;
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    Term t = parse_term(s.substr(i, j - i), dim, vector, any_basis);
    t.coef *= sign;
    terms.push_back(t);
    i = j;
  }
  for (const auto& t : terms)
    if (any_basis != (t.basis >= 0)) throw Error(ErrorKind::config, "mixed function and basis terms in field spec");
  if (vector && !any_basis) throw Error(ErrorKind::config, "vector field spec needs dx_vec/dy_vec/dz_vec");

  const int rank = any_basis ? 1 : 0;
  return Field::from([terms, dim, rank, vector](const auto& p) {
    using T = typename std::decay_t<decltype(p.x)>::value_type;
    Tensor<T> out(dim, rank, vector);
    for (const Term& t : terms) {
      T v(t.coef);
      for (const Factor& f : t.factors) {
        switch (f.fn) {
          case Fn::coord: v = v * p[f.axis]; break;
          case Fn::sin: v = v * sin(p[f.axis]); break;
          case Fn::cos: v = v * cos(p[f.axis]); break;
        }
      }
      if (rank == 0)
        out() += v;
      else
        out(t.basis) += v;
    }
    return out;
  });
}

}  // namespace bochner
