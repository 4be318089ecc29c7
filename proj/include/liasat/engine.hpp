// The transition system: seventeen rules driven by a deterministic
// strictly-two-layered scheduler. Guarded conflicts go through CDCL-style
// resolution (Conflict, Resolve, Skip-Decision, Learn, Backjump, Unsat);
// unguarded conflicts are blocked by divisibility combination and strong
// resolvents (Solve-Div-Left/Right, Resolve-Cooper).
#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "liasat/config.hpp"
#include "liasat/cooper.hpp"
#include "liasat/render.hpp"
#include "liasat/tighten.hpp"

namespace liasat {

enum class Rule {
  propagate,
  propagate_div,
  decide,
  conflict,
  conflict_div,
  sat,
  unsat_div,
  forget,
  slack_intro,
  resolve,
  skip_decision,
  backjump,
  unsat,
  learn,
  resolve_cooper,
  solve_div_left,
  solve_div_right,
};

inline constexpr int kRuleCount = 17;

inline char const* rule_name(Rule r) {
  switch (r) {
    case Rule::propagate: return "Propagate";
    case Rule::propagate_div: return "Propagate-Div";
    case Rule::decide: return "Decide";
    case Rule::conflict: return "Conflict";
    case Rule::conflict_div: return "Conflict-Div";
    case Rule::sat: return "Sat";
    case Rule::unsat_div: return "Unsat-Div";
    case Rule::forget: return "Forget";
    case Rule::slack_intro: return "Slack-Intro";
    case Rule::resolve: return "Resolve";
    case Rule::skip_decision: return "Skip-Decision";
    case Rule::backjump: return "Backjump";
    case Rule::unsat: return "Unsat";
    case Rule::learn: return "Learn";
    case Rule::resolve_cooper: return "Resolve-Cooper";
    case Rule::solve_div_left: return "Solve-Div-Left";
    case Rule::solve_div_right: return "Solve-Div-Right";
  }
  return "?";
}

struct TraceEvent {
  std::uint64_t step = 0;
  Rule rule = Rule::propagate;
  std::string var;     // affected variable, when there is one
  std::string detail;  // canonical rendering of the bound/constraints involved
};

struct Stats {
  std::array<std::uint64_t, kRuleCount> rule_counts{};
  std::uint64_t steps = 0;
  std::size_t peak_stack_depth = 0;
  int fresh_vars = 0;

  std::uint64_t count(Rule r) const { return rule_counts[static_cast<size_t>(r)]; }
};

enum class Status { search, conflict, sat, unsat };
enum class Verdict { sat, unsat, step_limit };

struct SolveResult {
  Verdict verdict = Verdict::unsat;
  Assignment model;  // over the original problem's variables, sat only
  Stats stats;
};

struct FrozenStateError : std::logic_error {
  using std::logic_error::logic_error;
};

class Engine {
 public:
  using TraceSink = std::function<void(TraceEvent const&)>;

  Engine(Problem problem, VariablePool pool, VariableOrder order, SolverConfig config = {})
      : problem_(std::move(problem)),
        original_(problem_),
        pool_(std::move(pool)),
        order_(std::move(order)),
        config_(config) {
    for (VarId v : vars_of(original_))
      if (!order_.contains(v)) throw std::domain_error("engine: unranked problem variable");
  }

  /// Test hook: start from an arbitrary search or conflict state.
  void set_state(BoundStack stack, std::optional<Constraint> conflict = std::nullopt) {
    stack_ = std::move(stack);
    conflict_ = std::move(conflict);
    status_ = conflict_ ? Status::conflict : Status::search;
  }

  void set_trace_sink(TraceSink sink) { sink_ = std::move(sink); }

  Status status() const { return status_; }
  bool is_final() const { return status_ == Status::sat || status_ == Status::unsat; }

  Problem const& problem() const { return problem_; }
  Problem const& original_problem() const { return original_; }
  BoundStack const& stack() const { return stack_; }
  VariablePool const& pool() const { return pool_; }
  VariableOrder const& order() const { return order_; }
  Stats const& stats() const { return stats_; }
  Constraint const& conflict() const {
    if (!conflict_) throw std::logic_error("not in a conflict state");
    return *conflict_;
  }

  /// υ[M] on the original variables, completed on variables the transition
  /// system left unconstrained.
  Assignment model() const {
    Assignment out;
    for (VarId v : vars_of(original_)) {
      if (stack_.fixed(v))
        out.set(v, stack_.lower(v).value());
      else if (stack_.lower(v).is_finite())
        out.set(v, stack_.lower(v).value());
      else if (stack_.upper(v).is_finite())
        out.set(v, stack_.upper(v).value());
      else
        out.set(v, 0);
    }
    return out;
  }

  /// Applies exactly one rule. Throws FrozenStateError if none is
  /// applicable on a non-final state (unreachable by the theorem this
  /// implements; exercised as an invariant).
  TraceEvent step() {
    if (is_final()) throw std::logic_error("step on a final state");
    std::optional<TraceEvent> ev =
        status_ == Status::conflict ? conflict_step() : search_step();
    if (!ev) throw FrozenStateError("no rule applicable on a non-final state");
    ev->step = ++stats_.steps;
    ++stats_.rule_counts[static_cast<size_t>(ev->rule)];
    stats_.peak_stack_depth = std::max(stats_.peak_stack_depth, stack_.size());
    if (sink_) sink_(*ev);
    if (config_.debug_checks) run_invariant_checks();
    return *ev;
  }

  SolveResult solve() {
    while (!is_final()) {
      if (config_.max_steps != 0 && stats_.steps >= config_.max_steps)
        return {Verdict::step_limit, {}, stats_};
      step();
    }
    if (status_ == Status::unsat) return {Verdict::unsat, {}, stats_};
    Assignment m = model();
    for (auto const& c : original_.constraints())
      if (!satisfies(c, m))
        throw std::logic_error("sat model fails an original constraint");
    return {Verdict::sat, std::move(m), stats_};
  }

  /// Variables with no bound in M and no inequality the strategy could
  /// propagate a bound for them from. For an unguarded variable only
  /// inequalities it tops count: eager top-level propagation admits no
  /// others.
  std::vector<VarId> detect_stuck() const {
    std::vector<VarId> out;
    for (VarId v : order_.ascending()) {
      if (!problem_.mentions(v) || stack_.fixed(v)) continue;
      if (stack_.has_any_bound(v)) continue;
      bool propagatable = false;
      for (auto const& c : problem_.constraints()) {
        if (!c.is_inequality() || !c.poly().mentions(v)) continue;
        if (!problem_.is_guarded(v) && top_variable(c, order_) != v) continue;
        if (bound_ineq(c, v, stack_).is_finite()) {
          propagatable = true;
          break;
        }
      }
      if (!propagatable) out.push_back(v);
    }
    return out;
  }

  /// Invariant of every reachable state: below any decision on an unguarded
  /// variable x, every constraint topped by x had its other variables fixed,
  /// and no such constraint is currently a conflict.
  bool check_eager_top_level() const {
    for (size_t i = 0; i < stack_.size(); ++i) {
      Bound const& b = stack_.at(i);
      if (!b.decided || problem_.is_guarded(b.var)) continue;
      for (auto const& c : problem_.constraints()) {
        if (c.poly().is_constant() || !c.poly().mentions(b.var)) continue;
        if (top_variable(c, order_) != b.var) continue;
        for (auto const& [w, coeff] : c.poly().terms())
          if (w != b.var && !stack_.fixed_at_prefix(w, i)) return false;
        if (is_conflict(c, stack_)) return false;
      }
    }
    return true;
  }

 private:
  // ---- shared helpers -------------------------------------------------

  static std::vector<VarId> vars_of(Problem const& p) { return p.vars(); }

  std::string name(VarId v) const { return pool_.name(v); }
  std::string show(Constraint const& c) const { return render(c, pool_, order_); }
  std::string show_bound(VarId v, BoundDir dir, Int const& value) const {
    return name(v) + (dir == BoundDir::lower ? " >= " : " <= ") + value.str();
  }

  VarId scratch_z() {
    if (scratch_z_ < 0) scratch_z_ = pool_.create("z", VarKind::fresh);
    return scratch_z_;
  }

  bool occurs(VarId v) const { return problem_.mentions(v); }

  void push_propagated_checked(VarId x, BoundDir dir, Int value, Constraint just,
                               Constraint const& source) {
    // Layer separation: guarded variables are propagated only from guarded
    // constraints.
    assert(!problem_.is_guarded(x) || problem_.is_guarded(source));
    (void)source;
    BoundValue jb = bound_ineq(just, x, stack_);
    if (dir == BoundDir::lower ? !(jb >= BoundValue(value)) : !(jb <= BoundValue(value)))
      throw std::logic_error("justification weaker than the propagated bound");
    stack_.push_propagated(x, dir, std::move(value), std::move(just));
  }

  std::vector<Constraint> top_constraints(VarId x) const {
    std::vector<Constraint> out;
    for (auto const& c : problem_.constraints()) {
      if (c.poly().is_constant() || !c.poly().mentions(x)) continue;
      if (top_variable(c, order_) == x) out.push_back(c);
    }
    return out;
  }

  int count_top_divs(VarId x) const {
    int n = 0;
    for (auto const& c : problem_.constraints())
      if (c.is_divisibility() && !c.poly().is_constant() && c.poly().mentions(x) &&
          top_variable(c, order_) == x)
        ++n;
    return n;
  }

  std::string core_signature(ConflictingCore const& core) const {
    std::vector<std::string> parts;
    for (auto const& c : core.constraints) parts.push_back(show(c));
    std::sort(parts.begin(), parts.end());
    std::string sig = name(core.var);
    for (auto const& p : parts) {
      sig += '\x1f';
      sig += p;
    }
    return sig;
  }

  // ---- conflict-state rules -------------------------------------------

  std::optional<TraceEvent> conflict_step() {
    Constraint& cf = *conflict_;
    assert(cf.is_inequality());

    // Unsat: the conflict resolved to a positive constant.
    if (cf.poly().is_constant()) {
      assert(cf.poly().constant_term() > 0);
      status_ = Status::unsat;
      return TraceEvent{0, Rule::unsat, "", show(cf)};
    }

    if (stack_.empty())
      throw FrozenStateError("non-constant conflict over an empty bound sequence");

    Bound const& top = stack_.top();
    if (!top.decided) {
      Constraint next = resolve(top, cf);
      std::string detail = show(next);
      std::string v = name(top.var);
      stack_.pop();
      cf = std::move(next);
      return TraceEvent{0, Rule::resolve, std::move(v), std::move(detail)};
    }

    // Decided bound on top: Skip-Decision when the conflict persists
    // without it.
    if (lower_at_prefix(cf.poly(), stack_, stack_.size() - 1) > BoundValue(Int(0))) {
      std::string v = name(top.var);
      stack_.pop();
      return TraceEvent{0, Rule::skip_decision, std::move(v), show(cf)};
    }

    // Learn the final conflict, then Backjump.
    if (!problem_.contains(cf)) {
      assert(problem_.is_guarded(cf));
      problem_.add(cf);
      return TraceEvent{0, Rule::learn, "", show(cf)};
    }

    stack_.pop();
    // Largest variable of the conflict whose implied bound improves.
    std::vector<LinearPolynomial::Term> terms = cf.poly().terms();
    std::sort(terms.begin(), terms.end(), [&](auto const& a, auto const& b) {
      return order_.rank(a.first) > order_.rank(b.first);
    });
    for (auto const& [x, coeff] : terms) {
      if (!improves(cf, x, stack_)) continue;
      BoundDir dir = coeff < 0 ? BoundDir::lower : BoundDir::upper;
      Int b = bound_ineq(cf, x, stack_).value();
      Constraint just = tight(cf, x, stack_, order_);
      std::string detail = show_bound(x, dir, b) + " by " + show(just);
      push_propagated_checked(x, dir, b, std::move(just), cf);
      std::string v = name(x);
      conflict_.reset();
      status_ = Status::search;
      return TraceEvent{0, Rule::backjump, std::move(v), std::move(detail)};
    }
    throw FrozenStateError("backjump found no improving variable");
  }

  // ---- search-state rules ----------------------------------------------

  std::optional<TraceEvent> search_step() {
    if (auto ev = try_unsat_div()) return ev;
    if (auto ev = try_sat()) return ev;
    if (auto ev = try_guarded_conflict()) return ev;
    if (auto ev = try_unit_propagate()) return ev;
    if (auto ev = try_guarded_propagate()) return ev;
    if (auto ev = try_guarded_decide()) return ev;
    if (auto ev = try_unguarded_layer()) return ev;
    if (auto ev = try_slack_intro()) return ev;
    return std::nullopt;
  }

  std::optional<TraceEvent> try_unsat_div() {
    for (auto const& c : problem_.constraints()) {
      if (!c.is_divisibility()) continue;
      Int g = c.modulus();
      for (auto const& [v, coeff] : c.poly().terms()) g = gcd(g, coeff);
      if (!divides(g, c.poly().constant_term())) {
        status_ = Status::unsat;
        return TraceEvent{0, Rule::unsat_div, "", show(c)};
      }
    }
    return std::nullopt;
  }

  std::optional<TraceEvent> try_sat() {
    std::vector<VarId> vars = vars_of(problem_);
    for (VarId v : vars)
      if (!stack_.fixed(v)) return std::nullopt;
    Assignment a;
    for (VarId v : vars) a.set(v, stack_.lower(v).value());
    for (auto const& c : problem_.constraints())
      if (!satisfies(c, a)) return std::nullopt;
    status_ = Status::sat;
    std::string detail;
    for (VarId v : vars) {
      if (!detail.empty()) detail += ", ";
      detail += name(v) + " = " + a.get(v).str();
    }
    return TraceEvent{0, Rule::sat, "", std::move(detail)};
  }

  std::optional<TraceEvent> try_guarded_conflict() {
    for (auto const& c : problem_.constraints()) {
      if (!problem_.is_guarded(c) || !is_conflict(c, stack_)) continue;
      if (c.is_inequality()) {
        conflict_ = c;
        status_ = Status::conflict;
        return TraceEvent{0, Rule::conflict, "", show(c)};
      }
      // Conflict-Div: justify via the divisibility derivation, starting
      // from the lower bound.
      VarId x = free_or_top_var(c);
      Constraint just = div_derive(c, x, stack_, BoundDir::lower, order_, scratch_z());
      assert(is_conflict(just, stack_));
      conflict_ = just;
      status_ = Status::conflict;
      return TraceEvent{0, Rule::conflict_div, name(x), show(c) + " gives " + show(just)};
    }
    return std::nullopt;
  }

  VarId free_or_top_var(Constraint const& c) const {
    VarId free_var = -1;
    for (auto const& [v, coeff] : c.poly().terms()) {
      if (stack_.fixed(v)) continue;
      assert(free_var == -1);
      free_var = v;
    }
    return free_var != -1 ? free_var : top_variable(c, order_);
  }

  /// Reasonable-strategy priority: unit constraints +-x - b <= 0 propagate
  /// before anything else.
  std::optional<TraceEvent> try_unit_propagate() {
    for (auto const& c : problem_.constraints()) {
      if (!c.is_inequality() || c.poly().var_count() != 1) continue;
      auto const& [x, coeff] = c.poly().terms().front();
      if (coeff != 1 && coeff != -1) continue;
      if (!improves(c, x, stack_)) continue;
      return fire_propagate(c, x);
    }
    return std::nullopt;
  }

  TraceEvent fire_propagate(Constraint const& c, VarId x) {
    BoundDir dir = c.poly().coeff(x) < 0 ? BoundDir::lower : BoundDir::upper;
    Int b = bound_ineq(c, x, stack_).value();
    Constraint just = tight(c, x, stack_, order_);
    std::string detail = show_bound(x, dir, b) + " by " + show(just) + " from " + show(c);
    push_propagated_checked(x, dir, b, std::move(just), c);
    return TraceEvent{0, Rule::propagate, name(x), std::move(detail)};
  }

  std::optional<TraceEvent> fire_propagate_div(Constraint const& c, VarId x) {
    DivView view = div_view(c, x);
    if (!poly_fixed(view.tail, stack_)) return std::nullopt;
    Int k = lower(view.tail, stack_).value();
    for (BoundDir dir : {BoundDir::lower, BoundDir::upper}) {
      BoundValue b = stack_.bound(x, dir);
      if (!b.is_finite()) continue;
      if (divides(view.d, view.a * b.value() + k)) continue;
      Int c_val = bound_div(c, x, stack_, dir);
      if (dir == BoundDir::lower ? !(BoundValue(c_val) <= stack_.upper(x))
                                 : !(BoundValue(c_val) >= stack_.lower(x)))
        continue;
      Constraint just = div_derive(c, x, stack_, dir, order_, scratch_z());
      std::string detail = show_bound(x, dir, c_val) + " by " + show(just) + " from " + show(c);
      push_propagated_checked(x, dir, c_val, std::move(just), c);
      return TraceEvent{0, Rule::propagate_div, name(x), std::move(detail)};
    }
    return std::nullopt;
  }

  /// Layer one: guarded variables, guarded constraints only.
  std::optional<TraceEvent> try_guarded_propagate() {
    for (auto const& c : problem_.constraints()) {
      if (!problem_.is_guarded(c) || c.poly().is_constant()) continue;
      if (c.is_inequality()) {
        std::vector<LinearPolynomial::Term> terms = c.poly().terms();
        std::sort(terms.begin(), terms.end(), [&](auto const& a, auto const& b) {
          return order_.rank(a.first) > order_.rank(b.first);
        });
        for (auto const& [x, coeff] : terms)
          if (improves(c, x, stack_)) return fire_propagate(c, x);
      } else {
        int unfixed = 0;
        for (auto const& [v, coeff] : c.poly().terms()) unfixed += stack_.fixed(v) ? 0 : 1;
        if (unfixed > 1) continue;
        VarId x = free_or_top_var(c);
        if (unfixed == 0) continue;  // satisfied or a conflict, handled earlier
        if (auto ev = fire_propagate_div(c, x)) return ev;
      }
    }
    return std::nullopt;
  }

  std::optional<TraceEvent> try_guarded_decide() {
    for (VarId v : order_.ascending()) {
      if (!problem_.is_guarded(v) || !occurs(v) || stack_.fixed(v)) continue;
      if (!stack_.lower(v).is_finite()) continue;  // guards not yet propagated
      Int b = stack_.lower(v).value();
      stack_.push_decided(v, BoundDir::upper, b);
      return TraceEvent{0, Rule::decide, name(v), show_bound(v, BoundDir::upper, b) + " (decided)"};
    }
    return std::nullopt;
  }

  /// Layer two, processed at the smallest eligible unguarded variable:
  /// Solve-Div, then Resolve-Cooper, then top-variable propagation, then
  /// decisions under the eager conditions.
  std::optional<TraceEvent> try_unguarded_layer() {
    for (VarId x : order_.ascending()) {
      if (problem_.is_guarded(x) || !occurs(x)) continue;
      if (auto ev = try_solve_div(x)) return ev;
      if (auto ev = try_resolve_cooper(x)) return ev;
      if (auto ev = try_unguarded_propagate(x)) return ev;
      if (auto ev = try_unguarded_decide(x)) return ev;
    }
    return std::nullopt;
  }

  std::optional<TraceEvent> try_solve_div(VarId x) {
    std::vector<Constraint> divs;
    for (auto const& c : problem_.constraints())
      if (c.is_divisibility() && !c.poly().is_constant() && c.poly().mentions(x) &&
          top_variable(c, order_) == x)
        divs.push_back(c);
    if (divs.size() < 2) return std::nullopt;
    Constraint const& i1 = divs[0];
    Constraint const& i2 = divs[1];
    for (auto const* c : {&i1, &i2})
      for (auto const& [v, coeff] : (*c).poly().terms())
        if (v != x && !stack_.fixed(v)) return std::nullopt;

    auto [o1, o2] = divsolve(x, i1, i2, order_);
    bool right = is_conflict(o2, stack_);
    update_resolvents(i1, i2, o1, o2);
    problem_.remove(i1);
    problem_.remove(i2);
    problem_.add(o1);
    problem_.add(o2);
    std::string detail = show(o1) + " and " + show(o2);
    if (!right) {
      assert(!is_conflict(o2, stack_));
      return TraceEvent{0, Rule::solve_div_left, name(x), std::move(detail)};
    }
    std::optional<VarId> y;
    if (!o2.poly().is_constant()) y = top_variable(o2, order_);
    stack_.truncate(stack_.prefix_size(order_, y));
    return TraceEvent{0, Rule::solve_div_right, name(x), std::move(detail)};
  }

  void update_resolvents(Constraint const& i1, Constraint const& i2, Constraint const& o1,
                         Constraint const& o2) {
    for (auto& [sig, members] : resolved_cores_) {
      for (auto& m : members) {
        if (m == i1) m = o1;
        if (m == i2) m = o2;
      }
    }
  }

  std::optional<TraceEvent> try_resolve_cooper(VarId x) {
    // All variables below x fixed.
    for (VarId v : order_.ascending()) {
      if (v == x) break;
      if (occurs(v) && !stack_.fixed(v)) return std::nullopt;
    }
    if (count_top_divs(x) > 1) return std::nullopt;  // Solve-Div still pending
    // No conflict below x.
    for (auto const& c : problem_.constraints()) {
      if (!is_conflict(c, stack_) || c.poly().is_constant()) continue;
      if (order_.precedes(top_variable(c, order_), x)) return std::nullopt;
    }
    std::optional<ConflictingCore> core = classify_core(x, problem_, stack_, order_);
    if (!core) return std::nullopt;
    std::string sig = core_signature(*core);
    if (resolved_cores_.count(sig)) return std::nullopt;

    StrongResolvent res = cooper(*core, pool_, order_);
    if (res.k >= 0) ++stats_.fresh_vars;
    std::vector<Constraint> members;
    std::string detail = "core:";
    for (auto const& c : core->constraints) detail += ' ' + show(c) + ';';
    detail += " adds:";
    for (auto const& lists : {res.r_k, res.r_c}) {
      for (auto const& c : lists) {
        members.push_back(c);
        problem_.add(c);
        detail += ' ' + show(c) + ';';
      }
    }
    resolved_cores_.emplace(std::move(sig), std::move(members));

    std::optional<VarId> y;
    for (auto const& c : res.r_c) {
      if (c.poly().is_constant()) continue;
      VarId t = top_variable(c, order_);
      if (!y || order_.precedes(t, *y)) y = t;
    }
    stack_.truncate(stack_.prefix_size(order_, y));
    return TraceEvent{0, Rule::resolve_cooper, name(x), std::move(detail)};
  }

  std::optional<TraceEvent> try_unguarded_propagate(VarId x) {
    for (auto const& c : top_constraints(x)) {
      if (c.is_inequality()) {
        if (improves(c, x, stack_)) return fire_propagate(c, x);
      } else {
        // Eager condition: both bounds exist, or the divisibility
        // constraint is solvable for x and alone at its top variable.
        bool both = stack_.lower(x).is_finite() && stack_.upper(x).is_finite();
        if (!both) {
          DivView view = div_view(c, x);
          if (!poly_fixed(view.tail, stack_)) continue;
          if (!divides(gcd(view.a, view.d), lower(view.tail, stack_).value())) continue;
          if (count_top_divs(x) != 1) continue;
        }
        if (auto ev = fire_propagate_div(c, x)) return ev;
      }
    }
    return std::nullopt;
  }

  std::optional<TraceEvent> try_unguarded_decide(VarId x) {
    if (stack_.fixed(x)) return std::nullopt;
    std::vector<Constraint> tops = top_constraints(x);
    for (auto const& c : tops)
      for (auto const& [w, coeff] : c.poly().terms())
        if (w != x && !stack_.fixed(w)) return std::nullopt;
    bool both = stack_.lower(x).is_finite() && stack_.upper(x).is_finite();
    if (!both && count_top_divs(x) > 1) return std::nullopt;

    auto attempt = [&](BoundDir dir) -> std::optional<TraceEvent> {
      BoundValue b = stack_.bound(x, opposite(dir));
      if (!b.is_finite()) return std::nullopt;
      stack_.push_decided(x, dir, b.value());
      for (auto const& c : tops) {
        if (is_conflict(c, stack_)) {
          stack_.pop();
          return std::nullopt;
        }
      }
      return TraceEvent{0, Rule::decide, name(x),
                        show_bound(x, dir, b.value()) + " (decided)"};
    };
    // Fix at the lower bound first.
    if (auto ev = attempt(BoundDir::upper)) return ev;
    if (auto ev = attempt(BoundDir::lower)) return ev;
    return std::nullopt;
  }

  std::optional<TraceEvent> try_slack_intro() {
    std::vector<VarId> stuck = detect_stuck();
    if (stuck.empty()) return std::nullopt;
    // Stuck state: every unfixed variable is stuck.
    for (VarId v : order_.ascending())
      if (occurs(v) && !stack_.fixed(v) &&
          std::find(stuck.begin(), stuck.end(), v) == stuck.end())
        return std::nullopt;
    for (VarId x : stuck) {
      if (slack_done_.count(x)) continue;
      slack_done_.insert(x);
      if (slack_var_ < 0) {
        slack_var_ = pool_.create("_s", VarKind::slack);
        order_.insert_smallest_unguarded(slack_var_);
      }
      LinearPolynomial xs = LinearPolynomial::variable(slack_var_);
      std::string detail;
      for (auto c : {Constraint::inequality(-xs),
                     Constraint::inequality(LinearPolynomial::variable(x) - xs),
                     Constraint::inequality(-LinearPolynomial::variable(x) - xs)}) {
        problem_.add(c);
        if (!detail.empty()) detail += "; ";
        detail += show(c);
      }
      return TraceEvent{0, Rule::slack_intro, name(x), std::move(detail)};
    }
    return std::nullopt;
  }

  // ---- invariants -------------------------------------------------------

  void run_invariant_checks() const {
    for (VarId v : order_.ascending()) {
      BoundValue lo = stack_.lower(v), hi = stack_.upper(v);
      if (lo.is_finite() && hi.is_finite() && lo > hi)
        throw std::logic_error("bound stack inconsistent");
    }
    if (status_ == Status::conflict && !is_conflict(*conflict_, stack_))
      throw std::logic_error("conflict state holds a non-conflict");
    if (!is_final() && !check_eager_top_level())
      throw std::logic_error("state is not eager top-level propagated");
  }

  Problem problem_;
  Problem original_;
  VariablePool pool_;
  VariableOrder order_;
  SolverConfig config_;
  BoundStack stack_;
  std::optional<Constraint> conflict_;
  Status status_ = Status::search;
  Stats stats_;
  TraceSink sink_;
  VarId scratch_z_ = -1;
  VarId slack_var_ = -1;
  std::set<VarId> slack_done_;
  std::map<std::string, std::vector<Constraint>> resolved_cores_;
};

}  // namespace liasat
