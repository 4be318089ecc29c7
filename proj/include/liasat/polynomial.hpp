// Integer-coefficient linear forms over variables.
#pragma once

#include <utility>
#include <vector>

#include "liasat/arith.hpp"
#include "liasat/variable.hpp"

namespace liasat {

/// Linear polynomial: sum of nonzero-coefficient terms plus a constant.
/// Terms are kept sorted by VarId so equality is structural.
class LinearPolynomial {
 public:
  using Term = std::pair<VarId, Int>;

  LinearPolynomial() = default;

  static LinearPolynomial constant(Int c) {
    LinearPolynomial p;
    p.constant_ = std::move(c);
    return p;
  }

  static LinearPolynomial variable(VarId v, Int coeff = 1) {
    LinearPolynomial p;
    p.add_term(v, std::move(coeff));
    return p;
  }

  Int coeff(VarId v) const {
    for (auto const& [var, c] : terms_)
      if (var == v) return c;
    return 0;
  }

  Int const& constant_term() const { return constant_; }
  std::vector<Term> const& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }
  int var_count() const { return static_cast<int>(terms_.size()); }

  bool mentions(VarId v) const { return coeff(v) != 0; }

  void add_constant(Int const& c) { constant_ += c; }

  void add_term(VarId v, Int c) {
    if (c == 0) return;
    auto it = terms_.begin();
    while (it != terms_.end() && it->first < v) ++it;
    if (it != terms_.end() && it->first == v) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    } else {
      terms_.insert(it, {v, std::move(c)});
    }
  }

  /// this += factor * p
  void add_scaled(LinearPolynomial const& p, Int const& factor) {
    if (factor == 0) return;
    for (auto const& [v, c] : p.terms_) add_term(v, c * factor);
    constant_ += p.constant_ * factor;
  }

  LinearPolynomial& operator+=(LinearPolynomial const& p) {
    add_scaled(p, 1);
    return *this;
  }
  LinearPolynomial& operator-=(LinearPolynomial const& p) {
    add_scaled(p, -1);
    return *this;
  }
  LinearPolynomial& operator*=(Int const& factor) {
    if (factor == 0) {
      terms_.clear();
      constant_ = 0;
      return *this;
    }
    for (auto& [v, c] : terms_) c *= factor;
    constant_ *= factor;
    return *this;
  }

  friend LinearPolynomial operator+(LinearPolynomial a, LinearPolynomial const& b) {
    a += b;
    return a;
  }
  friend LinearPolynomial operator-(LinearPolynomial a, LinearPolynomial const& b) {
    a -= b;
    return a;
  }
  friend LinearPolynomial operator*(LinearPolynomial a, Int const& f) {
    a *= f;
    return a;
  }
  friend LinearPolynomial operator-(LinearPolynomial a) {
    a *= -1;
    return a;
  }

  /// Removes the term on v and returns its coefficient (0 if absent).
  Int extract_term(VarId v) {
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
      if (it->first == v) {
        Int c = it->second;
        terms_.erase(it);
        return c;
      }
    }
    return 0;
  }

  bool operator==(LinearPolynomial const&) const = default;

 private:
  std::vector<Term> terms_;  // sorted by VarId, nonzero coefficients
  Int constant_ = 0;
};

}  // namespace liasat
