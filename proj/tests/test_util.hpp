// Shared helpers for the test suites: seeded generators for random
// problems and bound states, and small brute-force checks.
#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "liasat/liasat.hpp"
#include "liasat/parser.hpp"

namespace liasat::test {

using Rng = std::mt19937_64;

inline long long rand_int(Rng& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// ---- bound-stack builders ----------------------------------------------

/// Propagated lower bound with the unit justification -x + value <= 0.
inline void push_lower(BoundStack& m, VarId x, Int value) {
  LinearPolynomial p = LinearPolynomial::variable(x, -1);
  p.add_constant(value);
  m.push_propagated(x, BoundDir::lower, std::move(value), Constraint::inequality(std::move(p)));
}

/// Propagated upper bound with the unit justification x - value <= 0.
inline void push_upper(BoundStack& m, VarId x, Int value) {
  LinearPolynomial p = LinearPolynomial::variable(x, 1);
  p.add_constant(-value);
  m.push_propagated(x, BoundDir::upper, std::move(value), Constraint::inequality(std::move(p)));
}

/// Fixes x at its current lower bound via a decided upper bound.
inline void decide_at_lower(BoundStack& m, VarId x) {
  m.push_decided(x, BoundDir::upper, m.lower(x).value());
}

/// Fixes x at its current upper bound via a decided lower bound.
inline void decide_at_upper(BoundStack& m, VarId x) {
  m.push_decided(x, BoundDir::lower, m.upper(x).value());
}

// ---- polynomial / constraint shorthand ---------------------------------

inline LinearPolynomial poly(std::vector<std::pair<VarId, long long>> const& terms,
                             long long constant = 0) {
  LinearPolynomial p;
  for (auto const& [v, c] : terms) p.add_term(v, c);
  p.add_constant(constant);
  return p;
}

inline Constraint leq0(LinearPolynomial p) { return Constraint::inequality(std::move(p)); }

inline Constraint div_c(long long d, LinearPolynomial p) {
  return Constraint::divisibility(d, std::move(p));
}

// ---- random problem generation ------------------------------------------

struct GenOptions {
  int min_vars = 1;
  int max_vars = 5;
  int max_extra_constraints = 6;  // on top of guards
  int max_coeff = 7;
  int max_const = 10;
  int max_terms = 3;
  double guarded_prob = 0.6;
  int guard_radius = 8;
  double one_sided_prob = 0.4;  // unguarded var gets a single guard
  int max_divs = 2;
  int max_modulus = 7;
  bool force_all_guarded = false;
  bool force_some_unguarded = false;
  int max_unguarded = 5;
  // limits applied to constraints touching unguarded variables, to keep the
  // elimination oracle cheap
  int unguarded_coeff_cap = 0;  // 0 = no cap
  int unguarded_ineq_cap = 0;
};

/// Produces problem text and parses it, so generated instances go through
/// the same ingestion path as user input.
inline ParsedProblem random_problem(Rng& rng, GenOptions const& opt) {
  int n = static_cast<int>(rand_int(rng, opt.min_vars, opt.max_vars));
  std::vector<std::string> names;
  std::vector<bool> guarded(n, false);
  int unguarded_left = opt.max_unguarded;
  for (int i = 0; i < n; ++i) {
    names.push_back("x" + std::to_string(i));
    bool g = opt.force_all_guarded || (!opt.force_some_unguarded && chance(rng, opt.guarded_prob)) ||
             (opt.force_some_unguarded && i + 1 < n && chance(rng, opt.guarded_prob));
    if (!g && unguarded_left == 0) g = true;
    if (!g) --unguarded_left;
    guarded[i] = g;
  }
  if (opt.force_some_unguarded) guarded[n - 1] = false;

  std::ostringstream text;
  auto signed_const = [](std::ostream& os, long long k) {
    if (k != 0) os << (k < 0 ? " - " : " + ") << std::abs(k);
  };
  int unguarded_ineqs = 0;
  for (int i = 0; i < n; ++i) {
    if (guarded[i]) {
      long long l = rand_int(rng, -opt.guard_radius, 0);
      long long u = rand_int(rng, 0, opt.guard_radius);
      text << "-" << names[i];
      signed_const(text, l);
      text << " <= 0\n";
      text << names[i];
      signed_const(text, -u);
      text << " <= 0\n";
    } else if (chance(rng, opt.one_sided_prob)) {
      if (chance(rng, 0.5)) {
        text << "-" << names[i];
        signed_const(text, rand_int(rng, -opt.guard_radius, 0));
      } else {
        text << names[i];
        signed_const(text, -rand_int(rng, 0, opt.guard_radius));
      }
      text << " <= 0\n";
      ++unguarded_ineqs;
    }
  }

  auto emit_poly = [&](std::ostream& os, bool touches_unguarded_out[]) {
    int terms = static_cast<int>(rand_int(rng, 1, opt.max_terms));
    std::vector<int> chosen;
    for (int t = 0; t < terms; ++t) {
      int v = static_cast<int>(rand_int(rng, 0, n - 1));
      bool dup = false;
      for (int c : chosen) dup |= c == v;
      if (dup) continue;
      chosen.push_back(v);
    }
    if (chosen.empty()) chosen.push_back(static_cast<int>(rand_int(rng, 0, n - 1)));
    bool first = true;
    for (int v : chosen) {
      int cap = opt.max_coeff;
      if (!guarded[v] && opt.unguarded_coeff_cap > 0) cap = opt.unguarded_coeff_cap;
      long long c = rand_int(rng, 1, cap) * (chance(rng, 0.5) ? 1 : -1);
      if (!guarded[v]) touches_unguarded_out[0] = true;
      if (first) {
        if (c < 0) os << "-";
        first = false;
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      if (std::abs(c) != 1) os << std::abs(c);
      os << names[v];
    }
    long long k = rand_int(rng, -opt.max_const, opt.max_const);
    if (k != 0) os << (k < 0 ? " - " : " + ") << std::abs(k);
  };

  int extra = static_cast<int>(rand_int(rng, 0, opt.max_extra_constraints));
  int divs = 0;
  for (int c = 0; c < extra; ++c) {
    bool touches_unguarded[1] = {false};
    std::ostringstream body;
    bool make_div = divs < opt.max_divs && chance(rng, 0.35);
    emit_poly(body, touches_unguarded);
    if (touches_unguarded[0] && opt.unguarded_ineq_cap > 0 &&
        unguarded_ineqs >= opt.unguarded_ineq_cap && !make_div)
      continue;
    if (make_div) {
      ++divs;
      text << rand_int(rng, 2, opt.max_modulus) << " | " << body.str() << "\n";
    } else {
      if (touches_unguarded[0]) ++unguarded_ineqs;
      text << body.str() << " <= 0\n";
    }
  }
  std::string s = text.str();
  if (s.empty()) s = "-x0 <= 0\n";  // at least one constraint
  return parse(s);
}

// ---- random bound states and the justification contract -----------------

/// A bound sequence built from valid propagations and decisions, with every
/// justification recorded for implication checks.
struct RandomState {
  VariablePool pool;
  VariableOrder order;
  BoundStack stack;
  std::vector<VarId> vars;
  std::vector<Constraint> justifications;
};

/// Random valid state: bounds tighten over a few rounds; justifications are
/// unit inequalities whose tails mention already-fixed smaller variables,
/// like the engine's own propagation produces; decisions fix variables at
/// existing bounds.
inline RandomState random_bound_state(Rng& rng, int n_vars, int rounds) {
  RandomState s;
  std::vector<VarId> asc;
  for (int i = 0; i < n_vars; ++i) {
    VarId v = s.pool.create("v" + std::to_string(i));
    s.vars.push_back(v);
    asc.push_back(v);
  }
  s.order = VariableOrder(asc, 0);

  auto push_with_tail = [&](VarId x, BoundDir dir, Int const& value) {
    // justification: -x + q <= 0 (lower) or x + q <= 0 (upper) with
    // bound_ineq == value, q either constant or using one fixed variable
    LinearPolynomial q;
    VarId fixed_var = -1;
    for (VarId w : s.vars)
      if (w != x && s.stack.fixed(w) && chance(rng, 0.5)) fixed_var = w;
    Int cw = 0;
    if (fixed_var >= 0) cw = rand_int(rng, -3, 3);
    if (cw != 0) q.add_term(fixed_var, cw);
    // lower: bound = lower(q) must equal value; upper: bound = -lower(q)
    Int base = cw == 0 ? Int(0) : cw * s.stack.lower(fixed_var).value();
    q.add_constant((dir == BoundDir::lower ? value : -value) - base);
    LinearPolynomial j = LinearPolynomial::variable(x, dir == BoundDir::lower ? -1 : 1) + q;
    Constraint just = Constraint::inequality(std::move(j));
    s.justifications.push_back(just);
    s.stack.push_propagated(x, dir, value, std::move(just));
  };

  for (int r = 0; r < rounds; ++r) {
    VarId x = s.vars[static_cast<size_t>(rand_int(rng, 0, n_vars - 1))];
    if (s.stack.fixed(x)) continue;
    BoundValue lo = s.stack.lower(x), hi = s.stack.upper(x);
    if (chance(rng, 0.25) && (lo.is_finite() || hi.is_finite())) {
      // decision at an existing bound
      if (lo.is_finite() && (!hi.is_finite() || chance(rng, 0.5)))
        s.stack.push_decided(x, BoundDir::upper, lo.value());
      else
        s.stack.push_decided(x, BoundDir::lower, hi.value());
      continue;
    }
    if (chance(rng, 0.5)) {
      Int next = lo.is_finite() ? lo.value() + rand_int(rng, 1, 3) : Int(rand_int(rng, -8, 8));
      if (hi.is_finite() && next > hi.value()) continue;
      push_with_tail(x, BoundDir::lower, next);
    } else {
      Int next = hi.is_finite() ? hi.value() - rand_int(rng, 1, 3) : Int(rand_int(rng, -8, 8));
      if (lo.is_finite() && next < lo.value()) continue;
      push_with_tail(x, BoundDir::upper, next);
    }
  }
  return s;
}

inline bool has_decision_on(BoundStack const& m, VarId v) {
  for (size_t i = 0; i < m.size(); ++i)
    if (m.at(i).decided && m.at(i).var == v) return true;
  return false;
}

/// Checks that every integer point of a small box around the state's bounds
/// satisfying all premises also satisfies the conclusion.
inline bool implied_on_box(std::vector<Constraint> const& premises, Constraint const& conclusion,
                           RandomState const& s, int radius = 3) {
  std::vector<std::pair<Int, Int>> ranges;
  for (VarId v : s.vars) {
    Int center = 0;
    if (s.stack.lower(v).is_finite())
      center = s.stack.lower(v).value();
    else if (s.stack.upper(v).is_finite())
      center = s.stack.upper(v).value();
    ranges.emplace_back(center - radius, center + radius);
  }
  std::vector<Int> cur;
  for (auto const& r : ranges) cur.push_back(r.first);
  for (;;) {
    Assignment a;
    for (size_t i = 0; i < s.vars.size(); ++i) a.set(s.vars[i], cur[i]);
    bool all = true;
    for (auto const& c : premises)
      if (!satisfies(c, a)) {
        all = false;
        break;
      }
    if (all && !satisfies(conclusion, a)) return false;
    size_t i = cur.size();
    bool done = true;
    while (i > 0) {
      --i;
      if (cur[i] < ranges[i].second) {
        ++cur[i];
        for (size_t j = i + 1; j < cur.size(); ++j) cur[j] = ranges[j].first;
        done = false;
        break;
      }
    }
    if (done) return true;
  }
}

/// The three-part justification contract for tight and div_derive outputs.
inline void check_justification_contract(Constraint const& out, Constraint const& premise,
                                         VarId x, BoundValue const& required_bound,
                                         RandomState const& s) {
  Int c = out.poly().coeff(x);
  if (c != 1 && c != -1) throw std::logic_error("contract: pivot coefficient not unit");
  BoundValue ob = bound_ineq(out, x, s.stack);
  if (required_bound.is_finite()) {
    bool strong = c < 0 ? ob >= required_bound : ob <= required_bound;
    if (!strong) throw std::logic_error("contract: output bound weaker than required");
  }
  std::vector<Constraint> premises = s.justifications;
  premises.push_back(premise);
  if (!implied_on_box(premises, out, s))
    throw std::logic_error("contract: output not implied on the box");
}

}  // namespace liasat::test
