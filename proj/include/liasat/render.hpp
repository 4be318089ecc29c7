// Canonical text rendering: terms in descending variable order, explicit
// signs, no unit coefficients, constant last. Traces and the registry rely
// on this being bit-exact.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "liasat/problem.hpp"
#include "liasat/variable.hpp"

namespace liasat {

inline std::string render(LinearPolynomial const& p, VariablePool const& pool,
                          VariableOrder const& order) {
  std::vector<LinearPolynomial::Term> terms = p.terms();
  auto rank_of = [&](VarId v) { return order.contains(v) ? order.rank(v) : -1; };
  std::sort(terms.begin(), terms.end(), [&](auto const& a, auto const& b) {
    return rank_of(a.first) > rank_of(b.first);
  });

  std::string out;
  bool first = true;
  for (auto const& [v, c] : terms) {
    if (first) {
      if (c < 0) out += "-";
      first = false;
    } else {
      out += c < 0 ? " - " : " + ";
    }
    Int a = abs(c);
    if (a != 1) out += a.str();
    out += pool.name(v);
  }
  Int const& k = p.constant_term();
  if (first) {
    out += k.str();
  } else if (k != 0) {
    out += k < 0 ? " - " : " + ";
    out += abs(k).str();
  }
  return out;
}

inline std::string render(Constraint const& c, VariablePool const& pool,
                          VariableOrder const& order) {
  if (c.is_inequality()) return render(c.poly(), pool, order) + " <= 0";
  return c.modulus().str() + " | " + render(c.poly(), pool, order);
}

inline std::string render(Problem const& problem, VariablePool const& pool,
                          VariableOrder const& order) {
  std::string out;
  for (auto const& c : problem.constraints()) {
    out += render(c, pool, order);
    out += '\n';
  }
  return out;
}

}  // namespace liasat
