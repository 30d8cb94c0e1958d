#pragma once

// Constants field: Q extended by named transcendental generators.
//
// A Scalar is either a plain rational (fast path, no allocation beyond GMP)
// or a reduced fraction of multivariate polynomials over Q in the declared
// generators. Generators are identified by name and treated as independent
// indeterminates; equality is structural on the canonical form.

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace consys {

using Rational = mpq_class;
using Integer = mpz_class;

// Sorted by generator name; exponents are positive.
using Monomial = std::vector<std::pair<std::string, unsigned>>;

// Lexicographic order with generators ordered by name.
struct MonomialLess {
  bool operator()(const Monomial &a, const Monomial &b) const;
};

class MPoly {
public:
  using Terms = std::map<Monomial, Rational, MonomialLess>;

  MPoly() = default;
  explicit MPoly(const Rational &c);
  static MPoly generator(const std::string &name);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const; // requires is_constant()
  const Terms &terms() const { return terms_; }

  // Leading term under MonomialLess.
  const Monomial &leading_monomial() const { return terms_.rbegin()->first; }
  const Rational &leading_coefficient() const { return terms_.rbegin()->second; }

  std::vector<std::string> generators() const;
  unsigned degree_in(const std::string &g) const;
  // Coefficients as a polynomial in g: index = power of g.
  std::vector<MPoly> coefficients_in(const std::string &g) const;

  MPoly operator-() const;
  MPoly &operator+=(const MPoly &o);
  MPoly &operator-=(const MPoly &o);
  friend MPoly operator+(MPoly a, const MPoly &b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly &b) { return a -= b; }
  friend MPoly operator*(const MPoly &a, const MPoly &b);
  MPoly scaled(const Rational &c) const;
  MPoly times_monomial(const Monomial &m, const Rational &c) const;
  MPoly pow(unsigned e) const;

  // Exact quotient, or nullopt if b does not divide *this.
  std::optional<MPoly> divide_exact(const MPoly &b) const;

  // Rescaled so the leading coefficient is 1 (zero stays zero).
  MPoly monic() const;

  friend bool operator==(const MPoly &a, const MPoly &b) { return a.terms_ == b.terms_; }
  friend bool operator<(const MPoly &a, const MPoly &b);

  std::string str() const;

private:
  void add_term(const Monomial &m, const Rational &c);
  Terms terms_;
};

// Monic greatest common divisor over Q.
MPoly gcd(const MPoly &a, const MPoly &b);

class Scalar {
public:
  Scalar() = default;
  Scalar(long v) : q_(v) {}
  Scalar(int v) : q_(v) {}
  Scalar(const Rational &q) : q_(q) { q_.canonicalize(); }
  Scalar(const Integer &z) : q_(z) {}
  Scalar(long num, long den);

  static Scalar generator(const std::string &name);
  // num/den, reduced; throws NotInvertible on den == 0.
  static Scalar fraction(const MPoly &num, const MPoly &den);

  bool is_rational() const { return !sym_; }
  const Rational &rational() const; // requires is_rational()
  bool is_zero() const { return !sym_ && sgn(q_) == 0; }
  bool is_one() const { return !sym_ && q_ == 1; }
  bool is_integer() const { return !sym_ && q_.get_den() == 1; }

  MPoly numerator() const;
  MPoly denominator() const;
  std::vector<std::string> generators() const;

  Scalar operator-() const;
  Scalar &operator+=(const Scalar &o);
  Scalar &operator-=(const Scalar &o);
  Scalar &operator*=(const Scalar &o);
  Scalar &operator/=(const Scalar &o);
  friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar &b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar &b) { return a /= b; }
  Scalar inverse() const;
  Scalar pow(long e) const;

  friend bool operator==(const Scalar &a, const Scalar &b);
  friend bool operator!=(const Scalar &a, const Scalar &b) { return !(a == b); }
  // Deterministic total order (rationals first, then by printed form).
  friend bool operator<(const Scalar &a, const Scalar &b);

  std::string str() const;
  friend std::ostream &operator<<(std::ostream &os, const Scalar &s) { return os << s.str(); }

private:
  struct Frac {
    MPoly num, den;
  };
  Rational q_{0};
  std::shared_ptr<const Frac> sym_;
  static Scalar from_frac(MPoly num, MPoly den);
};

// n/d in canonical form (mpq_class(n, d) alone does not canonicalize).
inline Rational make_rational(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

// Exact rational power c^e when it lies in Q (e.g. 4^(1/2) = 2); nullopt otherwise.
std::optional<Rational> rational_power(const Rational &c, const Rational &e);

// Exact integer k-th root if it exists.
std::optional<Integer> exact_root(const Integer &z, unsigned long k);

} // namespace consys
