// Justification synthesis: resolve, the tight rule system that derives
// tightly propagating inequalities (unit coefficient on the propagated
// variable), and the divisibility variants div_part / div_derive.
#pragma once

#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "liasat/bounds.hpp"

namespace liasat {

/// CDCL-style elimination step. gamma is a propagated bound with
/// justification c*x + q <= 0 (c = +-1); J = a*x + p <= 0. When a*c < 0 the
/// result |a|q + |c|p <= 0 no longer contains x; otherwise J is unchanged.
/// A coefficient a = 0 also returns J unchanged.
inline Constraint resolve(Bound const& gamma, Constraint const& J) {
  if (gamma.decided || !gamma.justification)
    throw std::domain_error("resolve: bound is not a propagated bound");
  if (!J.is_inequality()) throw std::domain_error("resolve: target is not an inequality");
  LinearPolynomial p = J.poly();
  Int a = p.extract_term(gamma.var);
  if (a == 0) return J;
  LinearPolynomial q = gamma.justification->poly();
  Int c = q.extract_term(gamma.var);
  if (a * c >= 0) return J;
  LinearPolynomial out = q * abs(a) + p * abs(c);
  return Constraint::inequality(out);
}

/// tight(J, x, M): from J = +-a*x + p <= 0 (a > 0) derives an implied
/// inequality with coefficient +-1 on x whose bound under M is at least as
/// strong as bound_ineq(J, x, M).
///
/// The run keeps a pair (left | right): left accumulates terms divisible by
/// a, right holds the remainder. Consume moves a right-side term with an
/// a-divisible coefficient to the left (largest eligible variable first);
/// otherwise the top of the shrinking M-prefix is examined: propagated
/// bounds resolve into the right side, decided bounds are rewritten through
/// the propagated witness bound they were fixed at. Round fires once the
/// right side is constant.
inline Constraint tight(Constraint const& J, VarId x, BoundStack const& M,
                        VariableOrder const& order,
                        std::vector<VarId> const& forbid_consume = {}) {
  if (!J.is_inequality()) throw std::domain_error("tight: not an inequality");
  LinearPolynomial right = J.poly();
  Int pivot_coeff = right.extract_term(x);
  if (pivot_coeff == 0) throw std::domain_error("tight: pivot variable does not occur");
  Int a = abs(pivot_coeff);
  LinearPolynomial left = LinearPolynomial::variable(x, pivot_coeff);
  size_t n = M.size();

  auto consume_blocked = [&](VarId v) {
    if (v == x) return true;
    for (VarId f : forbid_consume)
      if (f == v) return true;
    return false;
  };

  for (;;) {
    if (right.is_constant()) {
      // Round: divide the left side by a and tighten the constant.
      LinearPolynomial out;
      for (auto const& [v, c] : left.terms()) {
        if (!divides(a, c)) throw std::logic_error("tight: left side not divisible by pivot coefficient");
        out.add_term(v, c / a);
      }
      out.add_constant(ceil_div(right.constant_term(), a));
      return Constraint::inequality(out);
    }

    // Consume the largest eligible right-side variable.
    VarId best = -1;
    for (auto const& [v, c] : right.terms()) {
      if (consume_blocked(v) || !divides(a, c)) continue;
      if (best == -1 || order.precedes(best, v)) best = v;
    }
    if (best != -1) {
      Int c = right.extract_term(best);
      left.add_term(best, c);
      continue;
    }

    if (n == 0)
      throw std::logic_error("tight: prefix exhausted before the right side became constant");
    Bound const& g = M.at(--n);
    Int cy = right.coeff(g.var);
    if (cy == 0) continue;  // bound for a variable not on the right side

    if (!g.decided) {
      right = resolve(g, Constraint::inequality(right)).poly();
      continue;
    }

    // Decided bound: locate the propagated witness bound of the opposite
    // direction it was fixed at.
    Bound const* witness = nullptr;
    for (size_t i = n; i-- > 0;) {
      Bound const& cand = M.at(i);
      if (cand.var == g.var && cand.dir == opposite(g.dir)) {
        witness = &cand;
        break;
      }
    }
    if (witness == nullptr || witness->decided || witness->value != g.value)
      throw std::logic_error("tight: decided bound without a propagated witness at the same value");
    LinearPolynomial q = witness->justification->poly();
    Int wc = q.extract_term(g.var);

    if (g.dir == BoundDir::lower) {
      // Decided <y >= b>, witness <y <= b> justified by y + q <= 0.
      if (wc != 1) throw std::logic_error("tight: malformed witness justification");
      right.extract_term(g.var);
      if (cy > 0) {
        Int k = ceil_div(cy, a);
        left.add_term(g.var, a * k);
        right.add_scaled(q, a * k - cy);
      } else {
        right.add_scaled(q, -cy);
      }
    } else {
      // Decided <y <= b>, witness <y >= b> justified by -y + q <= 0.
      if (wc != -1) throw std::logic_error("tight: malformed witness justification");
      right.extract_term(g.var);
      if (cy < 0) {
        Int k = floor_div(cy, a);
        left.add_term(g.var, a * k);
        right.add_scaled(q, cy - a * k);
      } else {
        right.add_scaled(q, cy);
      }
    }
  }
}

struct DivPartResult {
  Constraint ineq;  // -z + r <= 0 (lower) or z + r <= 0 (upper), free of x
  VarId z;
};

/// Tightly propagating inequality for the diophantine representation
/// d*z = a*x + p of D = d | a*x + p, pivoting on the fresh variable z.
/// Consume is forbidden on x and z, so x is eliminated through its bounds
/// in M. z is caller-provided scratch: it must occur nowhere in D or M.
inline DivPartResult div_part(Constraint const& D, VarId x, BoundStack const& M,
                              BoundDir dir, VariableOrder const& order, VarId z) {
  DivView v = div_view(D, x);
  LinearPolynomial body = LinearPolynomial::variable(x, v.a) + v.tail;
  LinearPolynomial f = dir == BoundDir::lower
                           ? LinearPolynomial::variable(z, -v.d) + body
                           : LinearPolynomial::variable(z, v.d) - body;
  Constraint out = tight(Constraint::inequality(f), z, M, order, {x, z});
  if (out.poly().coeff(z) != (dir == BoundDir::lower ? -1 : 1))
    throw std::logic_error("div_part: pivot coefficient not unit");
  if (out.poly().mentions(x))
    throw std::logic_error("div_part: propagated variable not eliminated");
  return {std::move(out), z};
}

/// Tightly propagating inequality for D = d | a*x + p itself: the div_part
/// result composes with the diophantine inequality to eliminate z, then a
/// second tight run pivots on x. The result has coefficient -1 (lower) or
/// +1 (upper) on x and implies a bound at least as strong as
/// bound_div(D, x, M, dir).
inline Constraint div_derive(Constraint const& D, VarId x, BoundStack const& M,
                             BoundDir dir, VariableOrder const& order, VarId z) {
  DivView v = div_view(D, x);
  DivPartResult part = div_part(D, x, M, dir, order, z);
  LinearPolynomial r = part.ineq.poly();
  r.extract_term(z);
  LinearPolynomial i3 = dir == BoundDir::lower
                            ? LinearPolynomial::variable(x, -v.a) + r * v.d - v.tail
                            : LinearPolynomial::variable(x, v.a) + r * v.d + v.tail;
  Constraint out = tight(Constraint::inequality(i3), x, M, order);
  if (out.poly().coeff(x) != (dir == BoundDir::lower ? -1 : 1))
    throw std::logic_error("div_derive: pivot coefficient not unit");
  return out;
}

}  // namespace liasat
