// Exact integer arithmetic primitives. All solver arithmetic is arbitrary
// precision: divisibility combination multiplies moduli, so fixed-width
// integers would overflow silently.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <tuple>

namespace liasat {

using Int = boost::multiprecision::cpp_int;

inline int sgn(Int const& v) { return v.sign(); }

inline Int abs(Int const& v) { return boost::multiprecision::abs(v); }

/// Greatest integer q with q <= n/d. Defined for negative divisors.
inline Int floor_div(Int const& n, Int const& d) {
  if (d == 0) throw std::domain_error("floor_div: zero divisor");
  Int q = n / d;  // truncates toward zero
  if (n % d != 0 && (n < 0) != (d < 0)) --q;
  return q;
}

/// Least integer q with q >= n/d. Defined for negative divisors.
inline Int ceil_div(Int const& n, Int const& d) {
  if (d == 0) throw std::domain_error("ceil_div: zero divisor");
  Int q = n / d;
  if (n % d != 0 && (n < 0) == (d < 0)) ++q;
  return q;
}

/// Nonnegative gcd; gcd(0,0) = 0.
inline Int gcd(Int const& a, Int const& b) {
  return boost::multiprecision::gcd(a, b);
}

inline bool divides(Int const& d, Int const& n) {
  if (d == 0) return n == 0;
  return n % d == 0;
}

/// Positive lcm of two nonzero integers.
inline Int lcm(Int const& a, Int const& b) {
  if (a == 0 || b == 0) throw std::domain_error("lcm: zero argument");
  return abs(a / gcd(a, b) * b);
}

/// Returns (g, c1, c2) with g = gcd(a,b) >= 0 and c1*a + c2*b = g.
/// Any valid Bezout pair may be produced.
inline std::tuple<Int, Int, Int> extended_gcd(Int const& a, Int const& b) {
  if (a == 0 && b == 0) throw std::domain_error("extended_gcd: both arguments zero");
  Int old_r = a, r = b;
  Int old_s = 1, s = 0;
  Int old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

}  // namespace liasat
