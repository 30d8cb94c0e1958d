#pragma once

// Dense univariate polynomials in x over the constants field.

#include "consys/scalar.hpp"

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace consys {

class Poly {
public:
  Poly() = default;
  Poly(const Scalar &c);
  Poly(long c) : Poly(Scalar(c)) {}
  explicit Poly(std::vector<Scalar> ascending);
  static Poly x();
  static Poly monomial(const Scalar &c, std::size_t k);

  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  // Degree; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  // Index of the lowest nonzero coefficient (x-adic valuation); 0 for zero.
  std::size_t valuation() const;
  const std::vector<Scalar> &coeffs() const { return c_; }
  Scalar coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Scalar(); }
  Scalar leading() const { return c_.empty() ? Scalar() : c_.back(); }
  bool is_rational() const;

  Poly operator-() const;
  Poly &operator+=(const Poly &o);
  Poly &operator-=(const Poly &o);
  friend Poly operator+(Poly a, const Poly &b) { return a += b; }
  friend Poly operator-(Poly a, const Poly &b) { return a -= b; }
  friend Poly operator*(const Poly &a, const Poly &b);
  Poly &operator*=(const Poly &o) { return *this = *this * o; }
  Poly scaled(const Scalar &s) const;
  Poly shifted(std::size_t k) const; // times x^k
  Poly pow(unsigned e) const;

  // Euclidean division over the constants field.
  void divmod(const Poly &d, Poly &q, Poly &r) const;
  Poly monic() const;

  Poly derivative() const;
  Scalar eval(const Scalar &at) const;
  // p(x + a), p(c*x), p(x^k)
  Poly taylor_shift(const Scalar &a) const;
  Poly dilate(const Scalar &c) const;
  Poly inflate(std::size_t k) const;
  // p(x) with x -> (x^k) where the result is reported only if all exponents divisible by k.
  bool deflatable(std::size_t k) const;
  Poly deflate(std::size_t k) const;

  friend bool operator==(const Poly &a, const Poly &b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly &a, const Poly &b) { return !(a == b); }

  std::string str(const std::string &var = "x") const;
  friend std::ostream &operator<<(std::ostream &os, const Poly &p) { return os << p.str(); }

private:
  void trim();
  std::vector<Scalar> c_;
};

// Monic gcd (zero if both are zero).
Poly gcd(const Poly &a, const Poly &b);

// Square-free decomposition: p = c * prod f_i^i (monic factors, index = multiplicity).
std::vector<Poly> squarefree_decomposition(const Poly &p);

// Roots in Q of a polynomial with rational coefficients (with multiplicity one each).
std::vector<Rational> rational_roots(const Poly &p);

// Multiplication switches from schoolbook to Karatsuba above this many coefficients.
void set_karatsuba_threshold(std::size_t n);
std::size_t karatsuba_threshold();

} // namespace consys
