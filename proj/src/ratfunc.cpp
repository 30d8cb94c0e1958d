#include "consys/ratfunc.hpp"

#include "consys/error.hpp"

namespace consys {

namespace {

Poly exact_quotient(const Poly &a, const Poly &b) {
  Poly q, r;
  a.divmod(b, q, r);
  return q;
}

} // namespace

RatFunc::RatFunc(const Poly &num, const Poly &den) {
  if (den.is_zero())
    fail(ErrorKind::NotInvertible, "rational function with zero denominator");
  if (num.is_zero()) {
    den_ = Poly(Scalar(1));
    return;
  }
  Poly n = num, d = den;
  if (d.degree() > 0) {
    Poly g = gcd(n, d);
    if (g.degree() > 0) {
      n = exact_quotient(n, g);
      d = exact_quotient(d, g);
    }
  }
  Scalar lc = d.leading();
  if (!lc.is_one()) {
    Scalar inv = lc.inverse();
    n = n.scaled(inv);
    d = d.scaled(inv);
  }
  num_ = std::move(n);
  den_ = std::move(d);
}

long RatFunc::valuation() const {
  if (num_.is_zero())
    return 0;
  return static_cast<long>(num_.valuation()) - static_cast<long>(den_.valuation());
}

RatFunc RatFunc::operator-() const { return RatFunc(Raw{}, -num_, den_); }

RatFunc operator+(const RatFunc &a, const RatFunc &b) {
  if (a.is_zero())
    return b;
  if (b.is_zero())
    return a;
  if (a.den_.degree() == 0 && b.den_.degree() == 0)
    return RatFunc(RatFunc::Raw{}, a.num_ + b.num_, a.den_);
  if (a.den_ == b.den_)
    return RatFunc(a.num_ + b.num_, a.den_);
  if (b.den_.degree() == 0)
    return RatFunc(RatFunc::Raw{}, a.num_ + b.num_ * a.den_, a.den_);
  if (a.den_.degree() == 0)
    return RatFunc(RatFunc::Raw{}, a.num_ * b.den_ + b.num_, b.den_);
  // Henrici: work with g = gcd(den_a, den_b).
  Poly g = gcd(a.den_, b.den_);
  if (g.degree() == 0)
    return RatFunc(RatFunc::Raw{}, a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  Poly da = exact_quotient(a.den_, g), db = exact_quotient(b.den_, g);
  Poly n = a.num_ * db + b.num_ * da;
  return RatFunc(n, da * b.den_);
}

RatFunc operator-(const RatFunc &a, const RatFunc &b) { return a + (-b); }

RatFunc operator*(const RatFunc &a, const RatFunc &b) {
  if (a.is_zero() || b.is_zero())
    return RatFunc();
  if (a.den_.degree() == 0 && b.den_.degree() == 0)
    return RatFunc(RatFunc::Raw{}, a.num_ * b.num_, a.den_);
  if (a.is_constant())
    return b.scaled(a.constant_value());
  if (b.is_constant())
    return a.scaled(b.constant_value());
  // Cross-cancel before multiplying.
  Poly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
  Poly an = a.num_, bd = b.den_, bn = b.num_, ad = a.den_;
  if (g1.degree() > 0) {
    an = exact_quotient(an, g1);
    bd = exact_quotient(bd, g1);
  }
  if (g2.degree() > 0) {
    bn = exact_quotient(bn, g2);
    ad = exact_quotient(ad, g2);
  }
  Poly n = an * bn, d = ad * bd;
  Scalar lc = d.leading();
  if (!lc.is_one()) {
    Scalar inv = lc.inverse();
    n = n.scaled(inv);
    d = d.scaled(inv);
  }
  return RatFunc(RatFunc::Raw{}, std::move(n), std::move(d));
}

RatFunc RatFunc::inverse() const {
  if (is_zero())
    fail(ErrorKind::NotInvertible, "inverse of the zero rational function");
  Scalar lc = num_.leading().inverse();
  return RatFunc(RatFunc::Raw{}, den_.scaled(lc), num_.scaled(lc));
}

RatFunc operator/(const RatFunc &a, const RatFunc &b) { return a * b.inverse(); }

RatFunc RatFunc::pow(long e) const {
  if (e < 0)
    return inverse().pow(-e);
  return RatFunc(RatFunc::Raw{}, num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
}

RatFunc RatFunc::scaled(const Scalar &s) const {
  if (s.is_zero())
    return RatFunc();
  return RatFunc(RatFunc::Raw{}, num_.scaled(s), den_);
}

RatFunc RatFunc::derivative() const {
  if (den_.degree() == 0)
    return RatFunc(RatFunc::Raw{}, num_.derivative(), den_);
  return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RatFunc RatFunc::euler() const { return derivative() * RatFunc::x(); }

RatFunc RatFunc::taylor_shift(const Scalar &a) const { return RatFunc(num_.taylor_shift(a), den_.taylor_shift(a)); }

RatFunc RatFunc::dilate(const Scalar &c) const {
  if (c.is_zero())
    fail(ErrorKind::InvalidInput, "dilation by zero");
  return RatFunc(num_.dilate(c), den_.dilate(c));
}

RatFunc RatFunc::inflate(std::size_t k) const {
  // Coprimality and monicity survive x -> x^k.
  return RatFunc(RatFunc::Raw{}, num_.inflate(k), den_.inflate(k));
}

Scalar RatFunc::eval(const Scalar &at) const {
  Scalar d = den_.eval(at);
  if (d.is_zero())
    fail(ErrorKind::NotInvertible, "evaluation at a pole");
  return num_.eval(at) / d;
}

std::string RatFunc::str(const std::string &var) const {
  if (den_.degree() == 0)
    return num_.str(var);
  std::string n = num_.str(var), d = den_.str(var);
  bool simple_num = num_.is_constant() || (num_.coeffs().size() >= 1 && n.find_first_of("+-", 1) == std::string::npos);
  return (simple_num ? n : "(" + n + ")") + "/(" + d + ")";
}

} // namespace consys
