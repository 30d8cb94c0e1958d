#pragma once

// Small deterministic generators for property tests.

#include "consys/matrix.hpp"

#include <cstdint>
#include <random>

namespace testing {

using namespace consys;

class Gen {
public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  long integer(long lo, long hi) { return lo + static_cast<long>(eng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin() { return eng_() & 1; }

  Scalar rational(long height = 5) {
    long num = integer(-height, height);
    long den = integer(1, height);
    return Scalar(num, den);
  }
  Scalar nonzero_rational(long height = 5) {
    for (;;) {
      Scalar s = rational(height);
      if (!s.is_zero())
        return s;
    }
  }
  Poly poly(long max_deg, long height = 5) {
    long d = integer(0, max_deg);
    std::vector<Scalar> c;
    for (long i = 0; i <= d; ++i)
      c.push_back(rational(height));
    return Poly(c);
  }
  Poly nonzero_poly(long max_deg, long height = 5) {
    for (;;) {
      Poly p = poly(max_deg, height);
      if (!p.is_zero())
        return p;
    }
  }
  RatFunc ratfunc(long max_deg, long height = 5) { return RatFunc(poly(max_deg, height), nonzero_poly(max_deg, height)); }
  RatFunc nonzero_ratfunc(long max_deg, long height = 5) {
    return RatFunc(nonzero_poly(max_deg, height), nonzero_poly(max_deg, height));
  }
  // Denominator with nonzero constant term, so the function is regular at 0.
  RatFunc regular_ratfunc(long max_deg, long height = 5) {
    Poly den = nonzero_poly(max_deg, height);
    while (den.coeff(0).is_zero())
      den = den + Poly(nonzero_rational(height));
    return RatFunc(poly(max_deg, height), den);
  }
  RatMatrix ratmatrix(std::size_t n, long max_deg, long height = 3) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m(i, j) = RatFunc(poly(max_deg, height));
    return m;
  }

private:
  std::mt19937_64 eng_;
};

inline RatFunc X() { return RatFunc::x(); }
inline RatFunc R(long n, long d = 1) { return RatFunc(Scalar(n, d)); }

} // namespace testing
