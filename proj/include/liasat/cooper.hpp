// Divisibility combination, conflicting cores, strong resolvents, and weak
// Cooper elimination.
#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "liasat/bounds.hpp"
#include "liasat/problem.hpp"

namespace liasat {

/// Combines two divisibility constraints on x into one that still mentions
/// x and one that does not:
///   divsolve(x, d1 | a1 x + p1, d2 | a2 x + p2)
///     = (d1 d2 | d x + c1 d2 p1 + c2 d1 p2,  d | -a1 p2 + a2 p1)
/// with d = gcd(a1 d2, a2 d1) and c1 a1 d2 + c2 a2 d1 = d. The pair has the
/// same solution set as the input pair; any valid Bezout pair is acceptable.
inline std::pair<Constraint, Constraint> divsolve(VarId x, Constraint const& i1,
                                                  Constraint const& i2,
                                                  VariableOrder const& order) {
  DivView v1 = div_view(i1, x);
  DivView v2 = div_view(i2, x);
  auto [d, c1, c2] = extended_gcd(v1.a * v2.d, v2.a * v1.d);

  LinearPolynomial body1 = LinearPolynomial::variable(x, d);
  body1.add_scaled(v1.tail, c1 * v2.d);
  body1.add_scaled(v2.tail, c2 * v1.d);
  Constraint out1 = normalize(Constraint::divisibility(v1.d * v2.d, std::move(body1)), order);

  LinearPolynomial body2;
  body2.add_scaled(v2.tail, -v1.a);
  body2.add_scaled(v1.tail, v2.a);
  Constraint out2 = normalize(Constraint::divisibility(d, std::move(body2)), order);
  return {std::move(out1), std::move(out2)};
}

/// Exhaustive divsolve: the output is equivalent to the input and contains
/// exactly one divisibility constraint on x (1 | x when none existed).
inline Problem combine_divs(VarId x, Problem const& problem, VariableOrder const& order) {
  std::vector<Constraint> on_x;
  Problem out;
  for (auto const& c : problem.constraints()) {
    if (c.is_divisibility() && c.poly().mentions(x))
      on_x.push_back(c);
    else
      out.add(c);
  }
  if (on_x.empty()) {
    out.add(Constraint::divisibility(1, LinearPolynomial::variable(x)));
    return out;
  }
  while (on_x.size() > 1) {
    auto [keep, drop] = divsolve(x, on_x[0], on_x[1], order);
    on_x.erase(on_x.begin(), on_x.begin() + 2);
    on_x.insert(on_x.begin(), std::move(keep));
    out.add(std::move(drop));
  }
  out.add(on_x.front());
  return out;
}

enum class CoreKind { interval, divisibility, diophantine };

/// A minimal constraint pattern witnessing that no value of var can satisfy
/// C' under M. The decomposition follows the shapes
///   interval:      { -a x + p <= 0,  b x - q <= 0 }
///   divisibility:  interval shape plus d | c x + s
///   diophantine:   { d | c x + s }
struct ConflictingCore {
  VarId var = -1;
  CoreKind kind = CoreKind::interval;
  std::vector<Constraint> constraints;  // the members of C, insertion order

  Int a, b;  // coefficients of the lower/upper inequalities (positive)
  LinearPolynomial p, q;
  Int d, c;  // divisibility constraint, c > 0
  LinearPolynomial s;
};

/// Guards on the fresh variable plus the remaining resolvent constraints.
/// Every member has top variable strictly below the core's variable.
struct StrongResolvent {
  std::vector<Constraint> r_k;
  std::vector<Constraint> r_c;
  VarId k = -1;  // -1 when no fresh variable was needed (diophantine)
};

/// Detects a conflicting core at x, preferring diophantine over
/// divisibility over interval. Requires every variable below x that occurs
/// in C to be fixed and at most one divisibility constraint with top
/// variable x. The strictest lower/upper inequalities are selected with
/// ties broken by insertion order.
inline std::optional<ConflictingCore> classify_core(VarId x, Problem const& problem,
                                                    BoundStack const& M,
                                                    VariableOrder const& order) {
  for (VarId v : order.ascending()) {
    if (v == x) break;
    if (problem.mentions(v) && !M.fixed(v))
      throw std::domain_error("classify_core: a variable below x is not fixed");
  }

  std::optional<Constraint> ineq_lower, ineq_upper, div;
  BoundValue best_lower, best_upper;
  for (auto const& cst : problem.constraints()) {
    if (cst.poly().is_constant() || !cst.poly().mentions(x)) continue;
    if (top_variable(cst, order) != x) continue;
    if (cst.is_divisibility()) {
      if (div) throw std::domain_error("classify_core: two divisibility constraints with top x");
      div = cst;
      continue;
    }
    BoundValue b = bound_ineq(cst, x, M);
    if (cst.poly().coeff(x) < 0) {
      if (!ineq_lower || b > best_lower) {
        ineq_lower = cst;
        best_lower = b;
      }
    } else {
      if (!ineq_upper || b < best_upper) {
        ineq_upper = cst;
        best_upper = b;
      }
    }
  }

  auto fill_div = [&](ConflictingCore& core) {
    DivView v = div_view(*div, x);
    core.d = v.d;
    core.c = v.a;
    core.s = std::move(v.tail);
  };
  auto fill_pair = [&](ConflictingCore& core) {
    LinearPolynomial lp = ineq_lower->poly();
    Int la = lp.extract_term(x);
    core.a = -la;
    core.p = std::move(lp);
    LinearPolynomial up = ineq_upper->poly();
    Int ub = up.extract_term(x);
    core.b = ub;
    core.q = -up;
  };

  if (div) {
    DivView v = div_view(*div, x);
    if (!poly_fixed(v.tail, M))
      throw std::domain_error("classify_core: divisibility tail not fixed");
    if (!divides(gcd(v.a, v.d), lower(v.tail, M).value())) {
      ConflictingCore core;
      core.var = x;
      core.kind = CoreKind::diophantine;
      core.constraints = {*div};
      fill_div(core);
      return core;
    }
  }

  if (!ineq_lower || !ineq_upper) return std::nullopt;
  if (!best_lower.is_finite() || !best_upper.is_finite())
    throw std::domain_error("classify_core: unbounded strictest inequality");

  if (best_lower > best_upper) {
    ConflictingCore core;
    core.var = x;
    core.kind = CoreKind::interval;
    core.constraints = {*ineq_lower, *ineq_upper};
    fill_pair(core);
    return core;
  }

  if (div) {
    DivView v = div_view(*div, x);
    Int k = lower(v.tail, M).value();
    Int period = v.d / gcd(v.a, v.d);
    Int end = best_lower.value() + period - 1;
    if (best_upper.value() < end) end = best_upper.value();
    bool any = false;
    for (Int b = best_lower.value(); b <= end; ++b) {
      if (divides(v.d, v.a * b + k)) {
        any = true;
        break;
      }
    }
    if (!any) {
      ConflictingCore core;
      core.var = x;
      core.kind = CoreKind::divisibility;
      core.constraints = {*ineq_lower, *ineq_upper, *div};
      fill_pair(core);
      fill_div(core);
      return core;
    }
  }
  return std::nullopt;
}

namespace detail {

inline Int resolvent_span(Int const& a, Int const& d, Int const& c) {
  // m = lcm(a, a d / gcd(a d, c)) - 1
  Int ad = a * d;
  return lcm(a, ad / gcd(ad, c)) - 1;
}

}  // namespace detail

/// Strong resolvent of a conflicting core. Satisfiability of the resolvent
/// implies a solution for the core's variable; every member's top variable
/// lies strictly below it.
inline StrongResolvent cooper(ConflictingCore const& core, VariablePool& pool,
                              VariableOrder& order) {
  StrongResolvent res;
  if (core.kind == CoreKind::diophantine) {
    LinearPolynomial s = core.s;
    res.r_c.push_back(normalize(Constraint::divisibility(gcd(core.c, core.d), s), order));
    return res;
  }

  VarId k = pool.create("k" + std::to_string(pool.size()), VarKind::fresh);
  order.insert_global_minimum(k);
  res.k = k;

  Int m = core.kind == CoreKind::interval ? core.a - 1
                                          : detail::resolvent_span(core.a, core.d, core.c);
  res.r_k.push_back(Constraint::inequality(LinearPolynomial::variable(k, -1)));
  LinearPolynomial guard = LinearPolynomial::variable(k, 1);
  guard.add_constant(-m);
  res.r_k.push_back(Constraint::inequality(std::move(guard)));

  // b p - a q + b k <= 0
  LinearPolynomial sep;
  sep.add_scaled(core.p, core.b);
  sep.add_scaled(core.q, -core.a);
  sep.add_term(k, core.b);
  res.r_c.push_back(Constraint::inequality(std::move(sep)));

  // a | k + p
  LinearPolynomial kp = LinearPolynomial::variable(k, 1) + core.p;
  res.r_c.push_back(normalize(Constraint::divisibility(core.a, std::move(kp)), order));

  if (core.kind == CoreKind::divisibility) {
    // a d | c p + a s + c k
    LinearPolynomial body;
    body.add_scaled(core.p, core.c);
    body.add_scaled(core.s, core.a);
    body.add_term(k, core.c);
    res.r_c.push_back(normalize(Constraint::divisibility(core.a * core.d, std::move(body)), order));
  }
  return res;
}

/// One weak Cooper elimination step: x disappears, fresh guarded variables
/// appear, and the result is equisatisfiable with the input. Trivially true
/// constraints are dropped from the output.
inline Problem weak_cooper_eliminate(VarId x, Problem const& problem, VariablePool& pool,
                                     VariableOrder& order) {
  Problem combined = combine_divs(x, problem, order);

  std::optional<Constraint> div;
  std::vector<std::pair<Int, LinearPolynomial>> lowers;  // (a, p) from -a x + p <= 0
  std::vector<std::pair<Int, LinearPolynomial>> uppers;  // (b, q) from  b x - q <= 0
  Problem out;
  for (auto const& cst : combined.constraints()) {
    if (!cst.poly().mentions(x)) {
      if (!cst.trivially_true()) out.add(cst);
      continue;
    }
    if (cst.is_divisibility()) {
      div = cst;
      continue;
    }
    LinearPolynomial tail = cst.poly();
    Int coeff = tail.extract_term(x);
    if (coeff < 0)
      lowers.emplace_back(-coeff, std::move(tail));
    else
      uppers.emplace_back(coeff, -std::move(tail));
  }

  DivView dv = div_view(*div, x);
  Int const& c = dv.a;
  Int const& d = dv.d;
  LinearPolynomial const& s = dv.tail;

  Constraint gcd_div = normalize(Constraint::divisibility(gcd(c, d), s), order);
  if (!gcd_div.trivially_true()) out.add(gcd_div);

  for (auto const& [a, p] : lowers) {
    for (auto const& [b, q] : uppers) {
      VarId k = pool.create("k" + std::to_string(pool.size()), VarKind::fresh);
      order.insert_global_minimum(k);
      Int m = detail::resolvent_span(a, d, c);

      out.add(Constraint::inequality(LinearPolynomial::variable(k, -1)));
      LinearPolynomial guard = LinearPolynomial::variable(k, 1);
      guard.add_constant(-m);
      out.add(Constraint::inequality(std::move(guard)));

      LinearPolynomial sep;
      sep.add_scaled(p, b);
      sep.add_scaled(q, -a);
      sep.add_term(k, b);
      out.add(Constraint::inequality(std::move(sep)));

      Constraint unit = normalize(
          Constraint::divisibility(a, LinearPolynomial::variable(k, 1) + p), order);
      if (!unit.trivially_true()) out.add(unit);

      LinearPolynomial body;
      body.add_scaled(p, c);
      body.add_scaled(s, a);
      body.add_term(k, c);
      Constraint big = normalize(Constraint::divisibility(a * d, std::move(body)), order);
      if (!big.trivially_true()) out.add(big);
    }
  }
  return out;
}

}  // namespace liasat
