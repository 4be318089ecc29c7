// The problem C (a set of constraints), assignments, and guardedness.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "liasat/constraint.hpp"

namespace liasat {

class Assignment {
 public:
  void set(VarId v, Int value) { values_[v] = std::move(value); }
  bool has(VarId v) const { return values_.count(v) != 0; }
  Int const& get(VarId v) const {
    auto it = values_.find(v);
    if (it == values_.end()) throw std::domain_error("assignment missing a variable");
    return it->second;
  }
  std::map<VarId, Int> const& values() const { return values_; }

 private:
  std::map<VarId, Int> values_;
};

/// Exact value of p under a; every variable of p must be assigned.
inline Int eval(LinearPolynomial const& p, Assignment const& a) {
  Int result = p.constant_term();
  for (auto const& [v, c] : p.terms()) result += c * a.get(v);
  return result;
}

inline bool satisfies(Constraint const& c, Assignment const& a) {
  Int v = eval(c.poly(), a);
  if (c.is_inequality()) return v <= 0;
  return divides(c.modulus(), v);
}

/// Insertion-ordered set of constraints. Identity is structural on the
/// stored (normalized) form; duplicates are rejected.
class Problem {
 public:
  /// Returns the insertion index, or nullopt when the constraint was
  /// already present.
  std::optional<size_t> add(Constraint c) {
    if (contains(c)) return std::nullopt;
    note_guards(c);
    constraints_.push_back(std::move(c));
    return constraints_.size() - 1;
  }

  bool contains(Constraint const& c) const {
    return std::find(constraints_.begin(), constraints_.end(), c) != constraints_.end();
  }

  /// Removes one constraint (Solve-Div replaces divisibility constraints).
  void remove(Constraint const& c) {
    auto it = std::find(constraints_.begin(), constraints_.end(), c);
    if (it == constraints_.end()) throw std::domain_error("removing a constraint not in C");
    constraints_.erase(it);
    recompute_guards();
  }

  std::vector<Constraint> const& constraints() const { return constraints_; }
  size_t size() const { return constraints_.size(); }

  std::vector<VarId> vars() const {
    std::vector<VarId> out;
    for (auto const& c : constraints_)
      for (auto const& [v, coeff] : c.poly().terms())
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool mentions(VarId v) const {
    for (auto const& c : constraints_)
      if (c.poly().mentions(v)) return true;
    return false;
  }

  /// Syntactic guardedness: C contains x - u <= 0 and -x + l <= 0 with
  /// unit coefficient and constant tail. A variable bounded only through
  /// propagation stays unguarded.
  bool is_guarded(VarId v) const {
    return flag(lower_guarded_, v) && flag(upper_guarded_, v);
  }

  /// A constraint is guarded when all its variables are.
  bool is_guarded(Constraint const& c) const {
    for (auto const& [v, coeff] : c.poly().terms())
      if (!is_guarded(v)) return false;
    return true;
  }

  /// Tightest syntactic guard interval, when both guards exist.
  std::optional<std::pair<Int, Int>> guard_interval(VarId v) const {
    std::optional<Int> lo, hi;
    for (auto const& c : constraints_) {
      if (!c.is_inequality() || c.poly().var_count() != 1) continue;
      Int a = c.poly().coeff(v);
      Int const& k = c.poly().constant_term();
      if (a == 1) {
        // x + k <= 0  =>  x <= -k
        if (!hi || -k < *hi) hi = -k;
      } else if (a == -1) {
        // -x + k <= 0  =>  x >= k
        if (!lo || k > *lo) lo = k;
      }
    }
    if (!lo || !hi) return std::nullopt;
    return std::make_pair(*lo, *hi);
  }

 private:
  static bool flag(std::vector<bool> const& bits, VarId v) {
    return v >= 0 && static_cast<size_t>(v) < bits.size() && bits[static_cast<size_t>(v)];
  }

  void note_guards(Constraint const& c) {
    if (!c.is_inequality() || c.poly().var_count() != 1) return;
    auto const& [v, a] = c.poly().terms().front();
    if (a == 1)
      set_flag(upper_guarded_, v);
    else if (a == -1)
      set_flag(lower_guarded_, v);
  }

  static void set_flag(std::vector<bool>& bits, VarId v) {
    if (bits.size() <= static_cast<size_t>(v)) bits.resize(static_cast<size_t>(v) + 1);
    bits[static_cast<size_t>(v)] = true;
  }

  void recompute_guards() {
    lower_guarded_.clear();
    upper_guarded_.clear();
    for (auto const& c : constraints_) note_guards(c);
  }

  std::vector<Constraint> constraints_;
  std::vector<bool> lower_guarded_, upper_guarded_;
};

}  // namespace liasat
