// Independent correctness oracles: bounded brute-force enumeration and the
// quantifier-elimination decision pipeline, plus the differential harness
// that checks them against the engine.
#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liasat/cooper.hpp"
#include "liasat/engine.hpp"

namespace liasat {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-variable inclusive integer intervals.
class Box {
 public:
  void set(VarId v, Int lo, Int hi) {
    if (lo > hi) throw std::domain_error("box interval with lo > hi");
    ranges_[v] = {std::move(lo), std::move(hi)};
  }
  bool covers(VarId v) const { return ranges_.count(v) != 0; }
  std::pair<Int, Int> const& range(VarId v) const { return ranges_.at(v); }
  std::map<VarId, std::pair<Int, Int>> const& ranges() const { return ranges_; }

 private:
  std::map<VarId, std::pair<Int, Int>> ranges_;
};

enum class EnumVerdict { sat, no_solution_in_box };

struct EnumResult {
  EnumVerdict verdict = EnumVerdict::no_solution_in_box;
  Assignment model;
};

namespace detail {

// Straight-line int64 evaluation; the range precheck guarantees no
// intermediate can overflow.
struct CompiledConstraint {
  bool is_div = false;
  long long modulus = 0;
  std::vector<long long> coeffs;  // aligned with the variable list
  long long constant = 0;
};

inline bool fits_int64(Int const& v) {
  static const Int lo = std::numeric_limits<long long>::min() / 4;
  static const Int hi = std::numeric_limits<long long>::max() / 4;
  return v >= lo && v <= hi;
}

}  // namespace detail

/// Exhaustive test of every point of the box, in lexicographic order of the
/// variable list (ascending VarId, last variable fastest). Returns the first
/// satisfying assignment. The box must cover vars(C); the point count must
/// stay within the budget.
inline EnumResult enumerate(Problem const& problem, Box const& box,
                            std::uint64_t budget = 10'000'000) {
  std::vector<VarId> vars;
  for (auto const& [v, r] : box.ranges()) vars.push_back(v);
  for (VarId v : problem.vars())
    if (!box.covers(v)) throw std::domain_error("enumeration box does not cover a variable");

  Int points = 1;
  for (VarId v : vars) {
    auto const& [lo, hi] = box.range(v);
    points *= hi - lo + 1;
    if (points > budget) throw BudgetExceeded("enumeration budget exceeded");
  }

  // Fast path precheck: every |coefficient| * max|value| sum fits well
  // within int64.
  bool fast = true;
  Int magnitude = 0;
  for (VarId v : vars) {
    auto const& [lo, hi] = box.range(v);
    Int m = abs(lo) > abs(hi) ? abs(lo) : abs(hi);
    if (m > magnitude) magnitude = m;
  }
  std::vector<detail::CompiledConstraint> rows;
  for (auto const& c : problem.constraints()) {
    detail::CompiledConstraint row;
    row.is_div = c.is_divisibility();
    Int reach = abs(c.poly().constant_term());
    for (auto const& [v, coeff] : c.poly().terms()) reach += abs(coeff) * magnitude;
    if (!detail::fits_int64(reach) || (row.is_div && !detail::fits_int64(c.modulus()))) {
      fast = false;
      break;
    }
    if (row.is_div) row.modulus = static_cast<long long>(c.modulus());
    row.constant = static_cast<long long>(c.poly().constant_term());
    row.coeffs.assign(vars.size(), 0);
    for (auto const& [v, coeff] : c.poly().terms()) {
      size_t idx = static_cast<size_t>(
          std::find(vars.begin(), vars.end(), v) - vars.begin());
      row.coeffs[idx] = static_cast<long long>(coeff);
    }
    rows.push_back(std::move(row));
  }

  auto make_result = [&](std::vector<Int> const& point) {
    EnumResult res;
    res.verdict = EnumVerdict::sat;
    for (size_t i = 0; i < vars.size(); ++i) res.model.set(vars[i], point[i]);
    return res;
  };

  if (fast) {
    size_t n = vars.size();
    std::vector<long long> lo(n), hi(n), cur(n);
    for (size_t i = 0; i < n; ++i) {
      lo[i] = static_cast<long long>(box.range(vars[i]).first);
      hi[i] = static_cast<long long>(box.range(vars[i]).second);
      cur[i] = lo[i];
    }
    for (;;) {
      bool ok = true;
      for (auto const& row : rows) {
        long long value = row.constant;
        for (size_t i = 0; i < n; ++i) value += row.coeffs[i] * cur[i];
        bool hold = row.is_div ? value % row.modulus == 0 : value <= 0;
        if (!hold) {
          ok = false;
          break;
        }
      }
      if (ok) {
        std::vector<Int> point(n);
        for (size_t i = 0; i < n; ++i) point[i] = cur[i];
        return make_result(point);
      }
      size_t i = n;
      while (i > 0) {
        --i;
        if (cur[i] < hi[i]) {
          ++cur[i];
          for (size_t j = i + 1; j < n; ++j) cur[j] = lo[j];
          break;
        }
        if (i == 0) return {};
      }
      if (n == 0) return {};
    }
  }

  // Exact fallback for boxes or constraints outside the int64 window.
  size_t n = vars.size();
  std::vector<Int> cur(n);
  for (size_t i = 0; i < n; ++i) cur[i] = box.range(vars[i]).first;
  for (;;) {
    Assignment a;
    for (size_t i = 0; i < n; ++i) a.set(vars[i], cur[i]);
    bool ok = true;
    for (auto const& c : problem.constraints())
      if (!satisfies(c, a)) {
        ok = false;
        break;
      }
    if (ok) return make_result(cur);
    size_t i = n;
    while (i > 0) {
      --i;
      if (cur[i] < box.range(vars[i]).second) {
        ++cur[i];
        for (size_t j = i + 1; j < n; ++j) cur[j] = box.range(vars[j]).first;
        break;
      }
      if (i == 0) return {};
    }
    if (n == 0) return {};
  }
}

enum class QeVerdict { sat, unsat };

struct QeResult {
  QeVerdict verdict = QeVerdict::unsat;
  Assignment model;
};

namespace detail {

/// Completes a model of the eliminated problem with a value for x, using
/// the combined problem (single divisibility constraint on x). Solutions of
/// d | c x + s are periodic with period d / gcd(c, d); the bound window is
/// taken from the inequalities on x.
inline void complete_variable(VarId x, Problem const& combined, Assignment& model) {
  std::optional<Int> lo, hi;
  std::optional<Constraint> div;
  for (auto const& cst : combined.constraints()) {
    if (!cst.poly().mentions(x)) continue;
    if (cst.is_divisibility()) {
      div = cst;
      continue;
    }
    LinearPolynomial tail = cst.poly();
    Int a = tail.extract_term(x);
    Int t = eval(tail, model);
    if (a < 0) {
      Int b = ceil_div(t, -a);
      if (!lo || b > *lo) lo = b;
    } else {
      Int b = floor_div(-t, a);
      if (!hi || b < *hi) hi = b;
    }
  }
  if (!div) throw std::logic_error("combined problem lost its divisibility constraint");
  DivView view = div_view(*div, x);
  Int sv = eval(view.tail, model);
  Int g = gcd(view.a, view.d);
  if (!divides(g, sv))
    throw std::logic_error("model completion: divisibility has no solution");
  auto [gg, u, v] = extended_gcd(view.a, view.d);
  // view.a * (u * (-sv / g)) == -sv  (mod d)
  Int period = view.d / g;
  Int x0 = u * (-sv / g) % period;
  if (x0 < 0) x0 += period;

  Int value;
  if (lo) {
    value = x0 + period * ceil_div(*lo - x0, period);  // least solution >= lo
    if (hi && value > *hi) throw std::logic_error("model completion: empty solution window");
  } else if (hi) {
    value = x0 + period * floor_div(*hi - x0, period);  // greatest solution <= hi
  } else {
    value = x0;
  }
  model.set(x, value);
}

}  // namespace detail

/// Decides feasibility by eliminating unguarded variables (largest first)
/// until only guarded and fresh variables remain, then enumerating the
/// guard box. Sat models are completed back to the input variables through
/// the periodic solution structure and re-verified exactly.
inline QeResult qe_decide(Problem problem, VariablePool pool, VariableOrder order,
                          std::uint64_t budget = 10'000'000) {
  Problem const original = problem;
  struct Step {
    VarId var;
    Problem combined;
  };
  // Every unguarded variable is eliminated, largest first. A variable no
  // longer mentioned still gets its step (combine_divs introduces 1 | x),
  // so model completion always finds a value for it.
  std::vector<VarId> targets;
  for (VarId v : order.ascending())
    if (original.mentions(v) && !original.is_guarded(v)) targets.push_back(v);
  std::vector<Step> steps;
  for (auto it = targets.rbegin(); it != targets.rend(); ++it) {
    Problem combined = combine_divs(*it, problem, order);
    steps.push_back({*it, combined});
    problem = weak_cooper_eliminate(*it, combined, pool, order);
  }

  Box box;
  for (VarId v : problem.vars()) {
    auto gi = problem.guard_interval(v);
    if (!gi) throw std::logic_error("qe residual contains an unguarded variable");
    if (gi->first > gi->second) return {QeVerdict::unsat, {}};
    box.set(v, gi->first, gi->second);
  }
  EnumResult res = enumerate(problem, box, budget);
  if (res.verdict != EnumVerdict::sat) return {QeVerdict::unsat, {}};

  Assignment model = res.model;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    detail::complete_variable(it->var, it->combined, model);

  Assignment restricted;
  for (VarId v : original.vars()) restricted.set(v, model.get(v));
  for (auto const& c : original.constraints())
    if (!satisfies(c, restricted))
      throw std::logic_error("qe model fails an original constraint");
  return {QeVerdict::sat, std::move(restricted)};
}

struct DifferentialReport {
  Verdict engine_verdict = Verdict::unsat;
  QeVerdict qe_verdict = QeVerdict::unsat;
  std::optional<EnumVerdict> enum_verdict;
  bool enum_conclusive = false;  // fully guarded instances only
  bool agree = false;
  bool models_ok = true;
};

/// Runs the engine, the elimination pipeline, and (when boxable) the
/// enumerator on the same problem and reports verdict agreement. Sat models
/// from every decider are re-verified by exact evaluation. The default box
/// gives unguarded variables [-64, 64] for sat-search only: no solution in
/// such a box is inconclusive.
inline DifferentialReport differential(Problem const& problem, VariablePool const& pool,
                                       VariableOrder const& order, SolverConfig config = {},
                                       std::uint64_t budget = 10'000'000) {
  DifferentialReport report;

  Engine engine(problem, pool, order, config);
  SolveResult er = engine.solve();
  report.engine_verdict = er.verdict;
  if (er.verdict == Verdict::sat)
    for (auto const& c : problem.constraints())
      if (!satisfies(c, er.model)) report.models_ok = false;

  QeResult qr = qe_decide(problem, pool, order, budget);
  report.qe_verdict = qr.verdict;
  if (qr.verdict == QeVerdict::sat)
    for (auto const& c : problem.constraints())
      if (!satisfies(c, qr.model)) report.models_ok = false;

  bool fully_guarded = true;
  bool empty_guard = false;
  Box box;
  for (VarId v : problem.vars()) {
    auto gi = problem.guard_interval(v);
    if (gi && problem.is_guarded(v)) {
      if (gi->first > gi->second) {
        empty_guard = true;
        continue;
      }
      box.set(v, gi->first, gi->second);
    } else {
      fully_guarded = false;
      box.set(v, -64, 64);
    }
  }
  if (empty_guard) {
    report.enum_verdict = EnumVerdict::no_solution_in_box;
    report.enum_conclusive = fully_guarded;
  } else {
    EnumResult en = enumerate(problem, box, budget);
    report.enum_verdict = en.verdict;
    report.enum_conclusive = fully_guarded || en.verdict == EnumVerdict::sat;
    if (en.verdict == EnumVerdict::sat)
      for (auto const& c : problem.constraints())
        if (!satisfies(c, en.model)) report.models_ok = false;
  }

  bool ok = (report.engine_verdict == Verdict::sat) == (report.qe_verdict == QeVerdict::sat) &&
            report.engine_verdict != Verdict::step_limit;
  if (ok && report.enum_conclusive)
    ok = (report.engine_verdict == Verdict::sat) ==
         (*report.enum_verdict == EnumVerdict::sat);
  report.agree = ok && report.models_ok;
  return report;
}

}  // namespace liasat
