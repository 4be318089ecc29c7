#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace liasat;
using namespace liasat::test;

namespace {

struct Fixture {
  VariablePool pool;
  VarId x, y, z;
  VariableOrder order;

  Fixture() {
    x = pool.create("x");
    y = pool.create("y");
    z = pool.create("z");
    order = VariableOrder({z, y, x}, 0);
  }
};

Bound lower_bound_of(BoundStack const& m, VarId v) {
  for (size_t i = m.size(); i-- > 0;)
    if (m.at(i).var == v && m.at(i).dir == BoundDir::lower) return m.at(i);
  throw std::logic_error("no lower bound entry");
}

}  // namespace

TEST_CASE("resolve eliminates opposite-sign occurrences", "[tighten]") {
  Fixture f;
  BoundStack m;
  push_lower(m, f.x, 2);  // justified by -x + 2 <= 0
  Bound gamma = lower_bound_of(m, f.x);

  // 3x - 5 <= 0 resolves to 3*2 - 5 = 1 <= 0: a false constraint
  Constraint r1 = resolve(gamma, leq0(poly({{f.x, 3}}, -5)));
  CHECK(r1.poly() == poly({}, 1));

  // same sign: unchanged
  Constraint j2 = leq0(poly({{f.x, -2}}, 1));
  CHECK(resolve(gamma, j2) == j2);

  // y <= 3 against -2y + x <= 0 gives x - 6 <= 0
  BoundStack m2;
  push_upper(m2, f.y, 3);
  Bound gu = m2.top();
  Constraint r3 = resolve(gu, leq0(poly({{f.y, -2}, {f.x, 1}})));
  CHECK(r3.poly() == poly({{f.x, 1}}, -6));

  // variable absent: unchanged
  Constraint j4 = leq0(poly({{f.y, 1}}));
  CHECK(resolve(gamma, j4) == j4);

  // decided bounds carry no justification
  BoundStack m3;
  push_lower(m3, f.x, 1);
  push_upper(m3, f.x, 4);
  decide_at_lower(m3, f.x);
  CHECK_THROWS_AS(resolve(m3.top(), j2), std::domain_error);
}

TEST_CASE("tight rounds unit-reachable inequalities", "[tighten]") {
  Fixture f;
  BoundStack empty;

  Constraint t1 = tight(leq0(poly({{f.x, 2}}, 3)), f.x, empty, f.order);
  CHECK(t1.poly() == poly({{f.x, 1}}, 2));  // x <= -2 tightens x <= -1.5

  Constraint t2 = tight(leq0(poly({{f.x, 2}, {f.y, 2}})), f.x, empty, f.order);
  CHECK(t2.poly() == poly({{f.x, 1}, {f.y, 1}}));

  BoundStack m;
  push_lower(m, f.y, 1);
  Constraint t3 = tight(leq0(poly({{f.x, 2}, {f.y, 3}})), f.x, m, f.order);
  CHECK(t3.poly() == poly({{f.x, 1}}, 2));
  CHECK(bound_ineq(t3, f.x, m) == bound_ineq(leq0(poly({{f.x, 2}, {f.y, 3}})), f.x, m));

  // the pivot must occur
  CHECK_THROWS_AS(tight(leq0(poly({{f.y, 1}})), f.x, empty, f.order), std::domain_error);
}

TEST_CASE("tight rewrites decided bounds through their witnesses", "[tighten]") {
  Fixture f;
  BoundStack m;
  push_lower(m, f.y, 2);
  push_upper(m, f.y, 4);
  decide_at_upper(m, f.y);  // <y >= 4> decided, witness <y <= 4>

  // 2x + 3y <= 0: Decide-Lower moves 2*2*y left, adds (4 - 3)*(tail of y - 4 <= 0)
  Constraint t = tight(leq0(poly({{f.x, 2}, {f.y, 3}})), f.x, m, f.order);
  CHECK(t.poly().coeff(f.x) == 1);
  // soundness: points satisfying the premises satisfy the output
  RandomState s;
  s.pool = f.pool;
  s.order = f.order;
  s.vars = {f.x, f.y, f.z};
  s.stack = m;
  s.justifications = {leq0(poly({{f.y, -1}}, 2)), leq0(poly({{f.y, 1}}, -4))};
  check_justification_contract(t, leq0(poly({{f.x, 2}, {f.y, 3}})), f.x,
                               bound_ineq(leq0(poly({{f.x, 2}, {f.y, 3}})), f.x, m), s);

  // decided at the lower end
  BoundStack m2;
  push_lower(m2, f.y, 2);
  push_upper(m2, f.y, 4);
  decide_at_lower(m2, f.y);  // <y <= 2> decided, witness <y >= 2>
  Constraint t2 = tight(leq0(poly({{f.x, 2}, {f.y, -3}}, 1)), f.x, m2, f.order);
  CHECK(t2.poly().coeff(f.x) == 1);
  s.stack = m2;
  check_justification_contract(t2, leq0(poly({{f.x, 2}, {f.y, -3}}, 1)), f.x,
                               bound_ineq(leq0(poly({{f.x, 2}, {f.y, -3}}, 1)), f.x, m2), s);
}

TEST_CASE("div_part eliminates the propagated variable", "[tighten]") {
  Fixture f;
  VarId zf = f.pool.create("zf", VarKind::fresh);

  // 2 | x with x >= 1: diophantine part gives -z + 1 <= 0
  BoundStack m;
  push_lower(m, f.x, 1);
  DivPartResult p1 = div_part(div_c(2, poly({{f.x, 1}})), f.x, m, BoundDir::lower, f.order, zf);
  CHECK(p1.ineq.poly() == poly({{zf, -1}}, 1));

  // 6 | 4y + x with x fixed 1, lower(y) = 0
  BoundStack m2;
  push_lower(m2, f.x, 1);
  push_upper(m2, f.x, 1);
  push_lower(m2, f.y, 0);
  DivPartResult p2 =
      div_part(div_c(6, poly({{f.y, 4}, {f.x, 1}})), f.y, m2, BoundDir::lower, f.order, zf);
  CHECK(p2.ineq.poly() == poly({{zf, -1}}, 1));
  CHECK_FALSE(p2.ineq.poly().mentions(f.y));

  // degenerate modulus: 1 | x with lower(x) = 0
  BoundStack m3;
  push_lower(m3, f.x, 0);
  DivPartResult p3 = div_part(div_c(1, poly({{f.x, 1}})), f.x, m3, BoundDir::lower, f.order, zf);
  CHECK(p3.ineq.poly() == poly({{zf, -1}}, 0));
}

TEST_CASE("div_derive produces tight divisibility justifications", "[tighten]") {
  Fixture f;
  VarId zf = f.pool.create("zf", VarKind::fresh);

  BoundStack m;
  push_lower(m, f.x, 1);
  push_upper(m, f.x, 1);
  push_lower(m, f.y, 0);
  Constraint d = div_c(6, poly({{f.y, 4}, {f.x, 1}}));
  Constraint j = div_derive(d, f.y, m, BoundDir::lower, f.order, zf);
  CHECK(j.poly().coeff(f.y) == -1);
  CHECK(bound_ineq(j, f.y, m) >= BoundValue(bound_div(d, f.y, m, BoundDir::lower)));

  BoundStack m2;
  push_lower(m2, f.x, 1);
  Constraint d2 = div_c(2, poly({{f.x, 1}}));
  Constraint j2 = div_derive(d2, f.x, m2, BoundDir::lower, f.order, zf);
  CHECK(j2.poly().coeff(f.x) == -1);
  CHECK(bound_ineq(j2, f.x, m2) == BoundValue(Int(2)));
}

TEST_CASE("resolve soundness on random states", "[tighten][property]") {
  Rng rng(20240806);
  int done = 0;
  for (int i = 0; i < 400 && done < 200; ++i) {
    RandomState s = random_bound_state(rng, 3, 6);
    // find a propagated entry
    std::optional<Bound> gamma;
    for (size_t k = s.stack.size(); k-- > 0;)
      if (!s.stack.at(k).decided) {
        gamma = s.stack.at(k);
        break;
      }
    if (!gamma) continue;
    LinearPolynomial p;
    for (VarId v : s.vars)
      if (chance(rng, 0.7)) p.add_term(v, rand_int(rng, -4, 4));
    p.add_constant(rand_int(rng, -5, 5));
    Constraint j = leq0(p);
    Constraint r = resolve(*gamma, j);
    bool eliminated_when_opposite =
        !(r.poly().mentions(gamma->var) &&
          j.poly().coeff(gamma->var) * gamma->justification->poly().coeff(gamma->var) < 0);
    CHECK(eliminated_when_opposite);
    std::vector<Constraint> premises = {*gamma->justification, j};
    RandomState probe = s;
    if (!implied_on_box(premises, r, probe)) FAIL("resolve output not implied");
    ++done;
  }
  CHECK(done > 0);
}

TEST_CASE("justification contract on random tight calls", "[tighten][property]") {
  // Unit-scale version of the acceptance run.
  Rng rng(20240807);
  int done = 0;
  for (int i = 0; i < 600 && done < 300; ++i) {
    RandomState s = random_bound_state(rng, 3, 7);
    VarId x = s.vars[static_cast<size_t>(rand_int(rng, 0, 2))];
    LinearPolynomial p = LinearPolynomial::variable(
        x, rand_int(rng, 1, 5) * (chance(rng, 0.5) ? 1 : -1));
    for (VarId v : s.vars)
      if (v != x && chance(rng, 0.5)) p.add_term(v, rand_int(rng, -4, 4));
    p.add_constant(rand_int(rng, -5, 5));
    Constraint j = leq0(p);
    if (!bound_ineq(j, x, s.stack).is_finite()) continue;
    Constraint out = tight(j, x, s.stack, s.order);
    check_justification_contract(out, j, x, bound_ineq(j, x, s.stack), s);
    ++done;
  }
  CHECK(done >= 100);
}

TEST_CASE("justification contract on random div_derive calls", "[tighten][property]") {
  Rng rng(20240808);
  int done = 0;
  for (int i = 0; i < 800 && done < 200; ++i) {
    RandomState s = random_bound_state(rng, 3, 8);
    VarId x = s.vars.back();
    // tail over fixed variables only
    LinearPolynomial tail;
    bool ok = true;
    for (VarId v : s.vars) {
      if (v == x) continue;
      if (chance(rng, 0.6)) {
        if (!s.stack.fixed(v)) {
          ok = false;
          break;
        }
        tail.add_term(v, rand_int(rng, -4, 4));
      }
    }
    if (!ok) continue;
    tail.add_constant(rand_int(rng, -5, 5));
    Int a = rand_int(rng, 1, 5);
    Int dmod = rand_int(rng, 2, 7);
    Constraint d = div_c(static_cast<long long>(dmod), LinearPolynomial::variable(x, a) + tail);
    BoundDir dir = chance(rng, 0.5) ? BoundDir::lower : BoundDir::upper;
    if (!s.stack.bound(x, dir).is_finite()) continue;
    Int b = s.stack.bound(x, dir).value();
    Int k = lower(tail, s.stack).value();
    if (divides(dmod, a * b + k)) continue;
    VarId zf = s.pool.create("zf", VarKind::fresh);
    Constraint out = div_derive(d, x, s.stack, dir, s.order, zf);
    CHECK(out.poly().coeff(x) == (dir == BoundDir::lower ? -1 : 1));
    Int req = bound_div(d, x, s.stack, dir);
    check_justification_contract(out, d, x, BoundValue(req), s);
    ++done;
  }
  CHECK(done >= 50);
}
