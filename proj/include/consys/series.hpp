#pragma once

// Truncated Laurent/Puiseux series  sum_k c_k t^k  with t = x^(1/r).
//
// Exponents are stored as integers in units of 1/r. Coefficients are known
// for every exponent below prec() (exclusive); a series built from an exact
// Laurent polynomial carries prec() == kExact and no truncation.

#include "consys/ratfunc.hpp"

#include <climits>
#include <ostream>
#include <string>
#include <vector>

namespace consys {

// Default number of terms for expansions, overridable per call.
inline constexpr long kDefaultOrder = 64;

class Series {
public:
  static constexpr long kExact = LONG_MAX / 4;

  Series() = default; // exact zero
  Series(const Scalar &c);
  Series(long c) : Series(Scalar(c)) {}
  // Coefficients for exponents v, v+1, ... (units of 1/r), known below prec.
  Series(long r, long v, std::vector<Scalar> coeffs, long prec = kExact);
  // x^(num/den) as an exact series.
  static Series monomial(const Scalar &c, long num, long den = 1);
  // Exact Laurent polynomial from a Poly in x.
  static Series from_poly(const Poly &p);

  long ramification() const { return r_; }
  // Lowest exponent with nonzero coefficient; prec() when all known terms vanish.
  long valuation() const { return c_.empty() ? prec_ : v_; }
  long prec() const { return prec_; }
  // Last known exponent (inclusive), in units of 1/r.
  long order() const { return prec_ == kExact ? kExact : prec_ - 1; }
  bool is_exact() const { return prec_ == kExact; }
  // Zero up to the known precision.
  bool is_zero() const { return c_.empty(); }
  Scalar coeff(long k) const;                 // exponent k/r
  Scalar coeff_at(const Rational &e) const;   // exponent e
  // Coefficient list for exponents valuation()..; trailing zeros removed.
  const std::vector<Scalar> &coeffs() const { return c_; }

  Series operator-() const;
  friend Series operator+(const Series &a, const Series &b);
  friend Series operator-(const Series &a, const Series &b) { return a + (-b); }
  friend Series operator*(const Series &a, const Series &b);
  friend Series operator/(const Series &a, const Series &b) { return a * b.inverse(); }
  Series &operator+=(const Series &o) { return *this = *this + o; }
  Series &operator-=(const Series &o) { return *this = *this - o; }
  Series &operator*=(const Series &o) { return *this = *this * o; }
  Series inverse() const;
  Series scaled(const Scalar &s) const;
  // Multiply by x^(k/r) in the current ramification.
  Series shifted(long k) const;

  // Known coefficients below exponent prec (units of 1/r); never raises precision.
  Series truncated(long prec) const;
  // Same series with ramification r*k.
  Series ramified(long k) const;
  // Reduce ramification as far as exponents and precision allow.
  Series compacted() const;

  // x -> x^p: precision scales by p.
  Series substitute_power(long p) const;
  // x -> c*x; needs c^(1/r) in the constants field when r > 1.
  Series substitute_scale(const Scalar &c) const;
  // u -> u/(1+a u), the shift x -> x+a seen in u = 1/x.
  Series substitute_shift_at_infinity(const Scalar &a = Scalar(1)) const;
  // x d/dx.
  Series euler() const;

  // Agreement on the common known range (aligned ramification).
  bool agrees_with(const Series &o) const;
  friend bool operator==(const Series &a, const Series &b);
  friend bool operator!=(const Series &a, const Series &b) { return !(a == b); }

  std::string str(const std::string &var = "x") const;
  friend std::ostream &operator<<(std::ostream &os, const Series &s) { return os << s.str(); }

private:
  void normalize();
  long r_ = 1;
  long v_ = 0;
  std::vector<Scalar> c_;
  long prec_ = kExact;
};

enum class ExpansionPoint { Zero, Infinity };

// Expansion of f at 0 (in x) or at infinity (in u = 1/x), with terms known
// through exponent `order` (inclusive, units of x), in ramification r.
Series expand_series(const RatFunc &f, ExpansionPoint at, long order = kDefaultOrder, long ramification = 1);

// Laurent polynomial in x as a RatFunc; requires ramification 1 and exactness.
RatFunc to_ratfunc(const Series &s);

} // namespace consys
