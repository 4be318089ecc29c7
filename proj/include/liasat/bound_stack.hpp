// The bound sequence M: decided and justified bounds forming a partial model.
#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "liasat/constraint.hpp"

namespace liasat {

/// An integer extended with both infinities. Infinities arise only from
/// missing bounds; they are never stored in the stack itself.
class BoundValue {
 public:
  enum class Kind { neg_inf, finite, pos_inf };

  BoundValue() : kind_(Kind::neg_inf) {}
  BoundValue(Int v) : kind_(Kind::finite), value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  static BoundValue minus_infinity() { return BoundValue(Kind::neg_inf); }
  static BoundValue plus_infinity() { return BoundValue(Kind::pos_inf); }

  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_minus_infinity() const { return kind_ == Kind::neg_inf; }
  bool is_plus_infinity() const { return kind_ == Kind::pos_inf; }

  Int const& value() const {
    if (!is_finite()) throw std::domain_error("BoundValue: infinite value");
    return value_;
  }

  friend bool operator==(BoundValue const& a, BoundValue const& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
  }
  friend bool operator<(BoundValue const& a, BoundValue const& b) {
    if (a.kind_ == Kind::neg_inf) return b.kind_ != Kind::neg_inf;
    if (a.kind_ == Kind::pos_inf) return false;
    if (b.kind_ == Kind::pos_inf) return true;
    if (b.kind_ == Kind::neg_inf) return false;
    return a.value_ < b.value_;
  }
  friend bool operator<=(BoundValue const& a, BoundValue const& b) { return a < b || a == b; }
  friend bool operator>(BoundValue const& a, BoundValue const& b) { return b < a; }
  friend bool operator>=(BoundValue const& a, BoundValue const& b) { return b <= a; }

 private:
  explicit BoundValue(Kind k) : kind_(k) {}
  Kind kind_;
  Int value_ = 0;
};

enum class BoundDir { lower, upper };

inline BoundDir opposite(BoundDir d) {
  return d == BoundDir::lower ? BoundDir::upper : BoundDir::lower;
}

/// One entry of M. Propagated bounds carry their justification, an
/// inequality with coefficient -1 (lower) or +1 (upper) on the variable.
struct Bound {
  VarId var = -1;
  BoundDir dir = BoundDir::lower;
  Int value;
  bool decided = false;
  std::optional<Constraint> justification;  // engaged iff !decided
};

/// The sequence M. Pushes maintain consistency (lower <= upper for every
/// variable) and strict improvement for propagated bounds; violations throw,
/// they are rule-guard bugs in the caller.
class BoundStack {
 public:
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Bound const& at(size_t i) const { return entries_.at(i); }
  Bound const& top() const { return entries_.back(); }
  std::vector<Bound> const& entries() const { return entries_; }

  BoundValue lower(VarId v) const {
    if (auto const* h = hist(v, BoundDir::lower); h && !h->empty())
      return entries_[h->back()].value;
    return BoundValue::minus_infinity();
  }

  BoundValue upper(VarId v) const {
    if (auto const* h = hist(v, BoundDir::upper); h && !h->empty())
      return entries_[h->back()].value;
    return BoundValue::plus_infinity();
  }

  BoundValue bound(VarId v, BoundDir dir) const {
    return dir == BoundDir::lower ? lower(v) : upper(v);
  }

  /// The bound as of the first n entries only.
  BoundValue bound_at_prefix(VarId v, BoundDir dir, size_t n) const {
    auto const* h = hist(v, dir);
    if (h != nullptr) {
      auto it = std::lower_bound(h->begin(), h->end(), n);  // first entry index >= n
      if (it != h->begin()) return entries_[*(it - 1)].value;
    }
    return dir == BoundDir::lower ? BoundValue::minus_infinity() : BoundValue::plus_infinity();
  }

  bool fixed_at_prefix(VarId v, size_t n) const {
    BoundValue lo = bound_at_prefix(v, BoundDir::lower, n);
    return lo.is_finite() && lo == bound_at_prefix(v, BoundDir::upper, n);
  }

  bool fixed(VarId v) const {
    BoundValue lo = lower(v);
    return lo.is_finite() && lo == upper(v);
  }

  bool has_any_bound(VarId v) const {
    return lower(v).is_finite() || upper(v).is_finite();
  }

  void push_propagated(VarId var, BoundDir dir, Int value, Constraint justification) {
    if (!justification.is_inequality())
      throw std::logic_error("justification must be an inequality");
    Int want = dir == BoundDir::lower ? Int(-1) : Int(1);
    if (justification.poly().coeff(var) != want)
      throw std::logic_error("justification has wrong coefficient on the bounded variable");
    check_improves_strictly(var, dir, value);
    push({var, dir, std::move(value), false, std::move(justification)});
  }

  void push_decided(VarId var, BoundDir dir, Int value) {
    // Decide fixes a variable at one of its existing bounds.
    BoundValue lo = lower(var), up = upper(var);
    if (dir == BoundDir::lower) {
      if (!(BoundValue(value) > lo && BoundValue(value) == up))
        throw std::logic_error("decided lower bound must fix the variable at its upper bound");
    } else {
      if (!(BoundValue(value) < up && BoundValue(value) == lo))
        throw std::logic_error("decided upper bound must fix the variable at its lower bound");
    }
    push({var, dir, std::move(value), true, std::nullopt});
  }

  void pop() {
    if (entries_.empty()) throw std::logic_error("pop on empty bound stack");
    Bound const& b = entries_.back();
    auto& h = histories_[static_cast<size_t>(b.var)][b.dir == BoundDir::lower ? 0 : 1];
    h.pop_back();
    entries_.pop_back();
  }

  /// Truncates M to its first n entries.
  void truncate(size_t n) {
    while (entries_.size() > n) pop();
  }

  /// Largest prefix containing only decided bounds for variables ≺ y.
  /// With no y (resolvent over constants only), every decided bound is cut.
  size_t prefix_size(VariableOrder const& order, std::optional<VarId> y) const {
    for (size_t i = 0; i < entries_.size(); ++i) {
      if (!entries_[i].decided) continue;
      if (!y || !order.precedes(entries_[i].var, *y)) return i;
    }
    return entries_.size();
  }

  /// Number of decided bounds currently on the stack.
  size_t decision_count() const {
    size_t n = 0;
    for (auto const& b : entries_) n += b.decided ? 1 : 0;
    return n;
  }

 private:
  void check_improves_strictly(VarId var, BoundDir dir, Int const& value) const {
    if (dir == BoundDir::lower) {
      if (!(BoundValue(value) > lower(var)))
        throw std::logic_error("propagated lower bound does not improve");
      if (!(BoundValue(value) <= upper(var)))
        throw std::logic_error("propagated lower bound breaks consistency");
    } else {
      if (!(BoundValue(value) < upper(var)))
        throw std::logic_error("propagated upper bound does not improve");
      if (!(BoundValue(value) >= lower(var)))
        throw std::logic_error("propagated upper bound breaks consistency");
    }
  }

  void push(Bound b) {
    size_t idx = entries_.size();
    if (histories_.size() <= static_cast<size_t>(b.var))
      histories_.resize(static_cast<size_t>(b.var) + 1);
    histories_[static_cast<size_t>(b.var)][b.dir == BoundDir::lower ? 0 : 1].push_back(idx);
    entries_.push_back(std::move(b));
  }

  std::vector<size_t> const* hist(VarId v, BoundDir dir) const {
    if (v < 0 || static_cast<size_t>(v) >= histories_.size()) return nullptr;
    return &histories_[static_cast<size_t>(v)][dir == BoundDir::lower ? 0 : 1];
  }

  std::vector<Bound> entries_;
  std::vector<std::array<std::vector<size_t>, 2>> histories_;  // per var: lower/upper entry indices
};

}  // namespace liasat
