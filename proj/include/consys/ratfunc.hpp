#pragma once

// Univariate rational functions over the constants field, kept in canonical
// form: gcd(num, den) = 1 and den monic.

#include "consys/poly.hpp"

#include <ostream>
#include <string>

namespace consys {

class RatFunc {
public:
  RatFunc() : den_(Scalar(1)) {}
  RatFunc(const Scalar &c) : num_(c), den_(Scalar(1)) {}
  RatFunc(long c) : RatFunc(Scalar(c)) {}
  RatFunc(const Poly &p) : num_(p), den_(Scalar(1)) {}
  // Normalising constructor; throws NotInvertible if den == 0.
  RatFunc(const Poly &num, const Poly &den);
  static RatFunc x() { return RatFunc(Poly::x()); }

  const Poly &num() const { return num_; }
  const Poly &den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return den_.is_constant() && num_ == Poly(Scalar(1)); }
  bool is_polynomial() const { return den_.degree() == 0; }
  bool is_constant() const { return is_polynomial() && num_.is_constant(); }
  Scalar constant_value() const { return num_.coeff(0); }
  bool is_rational() const { return num_.is_rational() && den_.is_rational(); }
  // x-adic valuation (order of zero at 0, negative for a pole); 0 for zero.
  long valuation() const;

  RatFunc operator-() const;
  friend RatFunc operator+(const RatFunc &a, const RatFunc &b);
  friend RatFunc operator-(const RatFunc &a, const RatFunc &b);
  friend RatFunc operator*(const RatFunc &a, const RatFunc &b);
  friend RatFunc operator/(const RatFunc &a, const RatFunc &b);
  RatFunc &operator+=(const RatFunc &o) { return *this = *this + o; }
  RatFunc &operator-=(const RatFunc &o) { return *this = *this - o; }
  RatFunc &operator*=(const RatFunc &o) { return *this = *this * o; }
  RatFunc &operator/=(const RatFunc &o) { return *this = *this / o; }
  RatFunc inverse() const;
  RatFunc pow(long e) const;
  RatFunc scaled(const Scalar &s) const;

  RatFunc derivative() const;            // d/dx
  RatFunc euler() const;                 // x d/dx
  RatFunc taylor_shift(const Scalar &a) const; // f(x + a)
  RatFunc dilate(const Scalar &c) const;       // f(c x)
  RatFunc inflate(std::size_t k) const;        // f(x^k)
  Scalar eval(const Scalar &at) const;

  friend bool operator==(const RatFunc &a, const RatFunc &b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RatFunc &a, const RatFunc &b) { return !(a == b); }

  std::string str(const std::string &var = "x") const;
  friend std::ostream &operator<<(std::ostream &os, const RatFunc &f) { return os << f.str(); }

private:
  struct Raw {};
  RatFunc(Raw, Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {}
  Poly num_, den_;
};

} // namespace consys
