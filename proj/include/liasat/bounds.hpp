// Evaluation semantics over partial models: lower/upper of polynomials,
// bound values implied by constraints, the improves predicate, and conflict
// detection.
#pragma once

#include <stdexcept>

#include "liasat/bound_stack.hpp"
#include "liasat/constraint.hpp"

namespace liasat {

/// Greatest lower bound of p under M: positive coefficients use the
/// variable's lower bound, negative ones its upper bound. Minus infinity as
/// soon as one contributing bound is missing.
inline BoundValue lower(LinearPolynomial const& p, BoundStack const& M) {
  Int sum = p.constant_term();
  for (auto const& [v, c] : p.terms()) {
    BoundValue b = c > 0 ? M.lower(v) : M.upper(v);
    if (!b.is_finite()) return BoundValue::minus_infinity();
    sum += c * b.value();
  }
  return sum;
}

/// Least upper bound of p under M; dual of lower.
inline BoundValue upper(LinearPolynomial const& p, BoundStack const& M) {
  Int sum = p.constant_term();
  for (auto const& [v, c] : p.terms()) {
    BoundValue b = c > 0 ? M.upper(v) : M.lower(v);
    if (!b.is_finite()) return BoundValue::plus_infinity();
    sum += c * b.value();
  }
  return sum;
}

/// lower(p, M) restricted to the first n entries of M.
inline BoundValue lower_at_prefix(LinearPolynomial const& p, BoundStack const& M, size_t n) {
  Int sum = p.constant_term();
  for (auto const& [v, c] : p.terms()) {
    BoundValue b = M.bound_at_prefix(v, c > 0 ? BoundDir::lower : BoundDir::upper, n);
    if (!b.is_finite()) return BoundValue::minus_infinity();
    sum += c * b.value();
  }
  return sum;
}

inline bool poly_fixed(LinearPolynomial const& p, BoundStack const& M) {
  for (auto const& [v, c] : p.terms())
    if (!M.fixed(v)) return false;
  return true;
}

/// Value of a fixed polynomial.
inline Int val(LinearPolynomial const& p, BoundStack const& M) {
  if (!poly_fixed(p, M)) throw std::domain_error("val: polynomial not fixed under M");
  return lower(p, M).value();
}

/// Strictest bound value J = ax + p <= 0 implies for x under M. An upper
/// bound when a > 0, a lower bound when a < 0; the corresponding infinity
/// when lower(p, M) is missing.
inline BoundValue bound_ineq(Constraint const& J, VarId x, BoundStack const& M) {
  if (!J.is_inequality()) throw std::domain_error("bound_ineq: not an inequality");
  LinearPolynomial p = J.poly();
  Int a = p.extract_term(x);
  if (a == 0) throw std::domain_error("bound_ineq: variable does not occur");
  BoundValue lp = lower(p, M);
  if (!lp.is_finite())
    return a > 0 ? BoundValue::plus_infinity() : BoundValue::minus_infinity();
  if (a > 0) return -ceil_div(lp.value(), a);
  return -floor_div(lp.value(), a);
}

/// View of a divisibility constraint from the side of x: d | a x + tail
/// with a > 0 (the polynomial is negated when x's coefficient is negative;
/// d | p and d | -p are the same constraint).
struct DivView {
  Int d;
  Int a;
  LinearPolynomial tail;
};

inline DivView div_view(Constraint const& D, VarId x) {
  if (!D.is_divisibility()) throw std::domain_error("div_view: not a divisibility constraint");
  LinearPolynomial p = D.poly();
  Int a = p.extract_term(x);
  if (a == 0) throw std::domain_error("div_view: variable does not occur");
  if (a < 0) {
    a = -a;
    p *= -1;
  }
  return {abs(D.modulus()), std::move(a), std::move(p)};
}

/// Strictest bound value d | ax + p implies for x starting from its current
/// bound on the given side. Requires a fixed tail and a finite bound on that
/// side; direction lower yields the least value >= lower(x) making the
/// constraint satisfiable, direction upper the greatest <= upper(x).
inline Int bound_div(Constraint const& D, VarId x, BoundStack const& M, BoundDir dir) {
  DivView v = div_view(D, x);
  if (v.a <= 0) throw std::domain_error("bound_div: nonpositive coefficient");
  if (!poly_fixed(v.tail, M)) throw std::domain_error("bound_div: tail not fixed");
  Int k = lower(v.tail, M).value();
  BoundValue b = M.bound(x, dir);
  if (!b.is_finite()) throw std::domain_error("bound_div: required bound is infinite");
  if (dir == BoundDir::lower)
    return ceil_div(v.d * ceil_div(v.a * b.value() + k, v.d) - k, v.a);
  return floor_div(v.d * floor_div(v.a * b.value() + k, v.d) - k, v.a);
}

/// Strict-improvement predicate for inequality propagation. Asymmetric as
/// defined: lower(x) < b <= upper(x) for lower bounds (a < 0),
/// lower(x) <= b < upper(x) for upper bounds (a > 0).
inline bool improves(Constraint const& J, VarId x, BoundStack const& M) {
  Int a = J.poly().coeff(x);
  if (a == 0) throw std::domain_error("improves: variable does not occur");
  BoundValue b = bound_ineq(J, x, M);
  if (!b.is_finite()) return false;
  if (a < 0) return M.lower(x) < b && b <= M.upper(x);
  return M.lower(x) <= b && b < M.upper(x);
}

/// Conflict test. An inequality conflicts when its lower value is positive.
/// A divisibility constraint conflicts when its tail is fixed, the remaining
/// variable has finite bounds, and no point of the interval satisfies it;
/// one residue period suffices by periodicity.
inline bool is_conflict(Constraint const& I, BoundStack const& M) {
  if (I.is_inequality()) return lower(I.poly(), M) > BoundValue(Int(0));

  // Divisibility: find the (at most one) unfixed variable.
  VarId free_var = -1;
  for (auto const& [v, c] : I.poly().terms()) {
    if (M.fixed(v)) continue;
    if (free_var != -1) return false;  // two unfixed variables
    free_var = v;
  }
  Int const& d = I.modulus();
  if (free_var == -1) {
    // Everything fixed (or constant): conflict iff the value is not divisible.
    Int value = I.poly().constant_term();
    for (auto const& [v, c] : I.poly().terms()) value += c * M.lower(v).value();
    return !divides(d, value);
  }
  DivView view = div_view(I, free_var);
  if (!poly_fixed(view.tail, M)) return false;
  BoundValue lo = M.lower(free_var), hi = M.upper(free_var);
  if (!lo.is_finite() || !hi.is_finite()) return false;
  Int k = lower(view.tail, M).value();
  Int period = view.d / gcd(view.a, view.d);
  Int end = lo.value() + period - 1;
  if (hi.value() < end) end = hi.value();
  for (Int b = lo.value(); b <= end; ++b)
    if (divides(view.d, view.a * b + k)) return false;
  return true;
}

}  // namespace liasat
