// Constraints: inequalities p <= 0 and divisibility constraints d | p.
#pragma once

#include <stdexcept>
#include <utility>

#include "liasat/polynomial.hpp"
#include "liasat/variable.hpp"

namespace liasat {

enum class ConstraintKind { inequality, divisibility };

class Constraint {
 public:
  /// p <= 0
  static Constraint inequality(LinearPolynomial p) {
    Constraint c;
    c.kind_ = ConstraintKind::inequality;
    c.poly_ = std::move(p);
    return c;
  }

  /// d | p, d != 0
  static Constraint divisibility(Int d, LinearPolynomial p) {
    if (d == 0) throw std::domain_error("divisibility constraint with zero modulus");
    Constraint c;
    c.kind_ = ConstraintKind::divisibility;
    c.modulus_ = std::move(d);
    c.poly_ = std::move(p);
    return c;
  }

  ConstraintKind kind() const { return kind_; }
  bool is_inequality() const { return kind_ == ConstraintKind::inequality; }
  bool is_divisibility() const { return kind_ == ConstraintKind::divisibility; }

  LinearPolynomial const& poly() const { return poly_; }

  Int const& modulus() const {
    if (!is_divisibility()) throw std::domain_error("modulus of an inequality");
    return modulus_;
  }

  /// True when no assignment can falsify the constraint.
  bool trivially_true() const {
    if (!poly_.is_constant()) {
      if (is_divisibility()) {
        // d | p with all coefficients and the constant divisible by d
        for (auto const& [v, c] : poly_.terms())
          if (!divides(modulus_, c)) return false;
        return divides(modulus_, poly_.constant_term());
      }
      return false;
    }
    if (is_inequality()) return poly_.constant_term() <= 0;
    return divides(modulus_, poly_.constant_term());
  }

  bool operator==(Constraint const&) const = default;

 private:
  ConstraintKind kind_ = ConstraintKind::inequality;
  Int modulus_ = 0;  // divisibility only
  LinearPolynomial poly_;
};

/// The ≺-maximal variable of a constraint; domain error when constant.
inline VarId top_variable(Constraint const& c, VariableOrder const& order) {
  auto const& terms = c.poly().terms();
  if (terms.empty()) throw std::domain_error("top_variable: constant constraint");
  VarId best = terms.front().first;
  for (auto const& [v, coeff] : terms)
    if (order.precedes(best, v)) best = v;
  return best;
}

/// Canonical form: divisibility constraints get a positive modulus and a
/// positive coefficient on their top variable (d | p == d | -p); inequalities
/// are returned as-is. Zero coefficients never exist in LinearPolynomial, so
/// dropping them is implicit.
inline Constraint normalize(Constraint c, VariableOrder const& order) {
  if (!c.is_divisibility()) return c;
  Int d = abs(c.modulus());
  LinearPolynomial p = c.poly();
  if (!p.is_constant()) {
    VarId tv = top_variable(c, order);
    if (p.coeff(tv) < 0) p *= -1;
  } else if (p.constant_term() < 0) {
    p *= -1;
  }
  return Constraint::divisibility(std::move(d), std::move(p));
}

}  // namespace liasat
