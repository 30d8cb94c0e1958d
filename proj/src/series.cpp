#include "consys/series.hpp"

#include "consys/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace consys {

namespace {

long add_prec(long a, long b) {
  if (a >= Series::kExact || b >= Series::kExact)
    return Series::kExact;
  return a + b;
}

long mul_prec(long a, long k) { return a >= Series::kExact ? Series::kExact : a * k; }

// Power series quotient n/d with d(0) != 0, first `terms` coefficients.
std::vector<Scalar> divide_power_series(const std::vector<Scalar> &n, const std::vector<Scalar> &d, long terms) {
  std::vector<Scalar> out(static_cast<std::size_t>(std::max(0L, terms)));
  Scalar inv0 = d[0].inverse();
  for (long i = 0; i < terms; ++i) {
    Scalar acc = i < static_cast<long>(n.size()) ? n[i] : Scalar();
    long lim = std::min<long>(i, static_cast<long>(d.size()) - 1);
    for (long k = 1; k <= lim; ++k)
      if (!d[k].is_zero() && !out[i - k].is_zero())
        acc -= d[k] * out[i - k];
    out[i] = acc * inv0;
  }
  return out;
}

void align(Series &a, Series &b) {
  long l = std::lcm(a.ramification(), b.ramification());
  if (a.ramification() != l)
    a = a.ramified(l / a.ramification());
  if (b.ramification() != l)
    b = b.ramified(l / b.ramification());
}

} // namespace

Series::Series(const Scalar &c) {
  if (!c.is_zero())
    c_.push_back(c);
}

Series::Series(long r, long v, std::vector<Scalar> coeffs, long prec) : r_(r), v_(v), c_(std::move(coeffs)), prec_(prec) {
  if (r < 1)
    fail(ErrorKind::InvalidInput, "series ramification must be positive");
  normalize();
}

Series Series::monomial(const Scalar &c, long num, long den) {
  if (den <= 0)
    fail(ErrorKind::InvalidInput, "monomial exponent denominator must be positive");
  return Series(den, num, {c});
}

Series Series::from_poly(const Poly &p) { return Series(1, 0, p.coeffs()); }

void Series::normalize() {
  if (prec_ < kExact && v_ + static_cast<long>(c_.size()) > prec_)
    c_.resize(static_cast<std::size_t>(std::max(0L, prec_ - v_)));
  std::size_t lead = 0;
  while (lead < c_.size() && c_[lead].is_zero())
    ++lead;
  if (lead == c_.size()) {
    c_.clear();
    v_ = 0;
    return;
  }
  if (lead) {
    c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
    v_ += static_cast<long>(lead);
  }
  while (c_.back().is_zero())
    c_.pop_back();
  if (r_ == 1)
    return;
  // Lossless compaction: only when the precision boundary survives.
  long g = r_;
  if (prec_ < kExact)
    g = std::gcd(g, prec_);
  for (std::size_t i = 0; i < c_.size() && g > 1; ++i)
    if (!c_[i].is_zero())
      g = std::gcd(g, v_ + static_cast<long>(i));
  if (g <= 1)
    return;
  std::vector<Scalar> nc;
  for (std::size_t i = 0; i < c_.size(); i += static_cast<std::size_t>(g))
    nc.push_back(c_[i]);
  c_ = std::move(nc);
  v_ /= g;
  r_ /= g;
  if (prec_ < kExact)
    prec_ /= g;
}

Scalar Series::coeff(long k) const {
  if (prec_ < kExact && k >= prec_)
    fail(ErrorKind::InsufficientOrder, "coefficient beyond the known precision");
  if (c_.empty() || k < v_ || k - v_ >= static_cast<long>(c_.size()))
    return Scalar();
  return c_[static_cast<std::size_t>(k - v_)];
}

Scalar Series::coeff_at(const Rational &e) const {
  Rational scaled = e * r_;
  if (scaled.get_den() != 1) {
    if (prec_ < kExact && scaled >= prec_)
      fail(ErrorKind::InsufficientOrder, "coefficient beyond the known precision");
    return Scalar();
  }
  return coeff(scaled.get_num().get_si());
}

Series Series::operator-() const {
  Series s = *this;
  for (auto &c : s.c_)
    c = -c;
  return s;
}

Series operator+(const Series &x, const Series &y) {
  Series a = x, b = y;
  align(a, b);
  long prec = std::min(a.prec_, b.prec_);
  if (a.c_.empty() && b.c_.empty())
    return Series(a.r_, 0, {}, prec);
  long lo = a.c_.empty() ? b.v_ : b.c_.empty() ? a.v_ : std::min(a.v_, b.v_);
  long hi = lo;
  if (!a.c_.empty())
    hi = std::max(hi, a.v_ + static_cast<long>(a.c_.size()));
  if (!b.c_.empty())
    hi = std::max(hi, b.v_ + static_cast<long>(b.c_.size()));
  if (prec < Series::kExact)
    hi = std::min(hi, prec);
  std::vector<Scalar> c(static_cast<std::size_t>(std::max(0L, hi - lo)));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    long k = a.v_ + static_cast<long>(i) - lo;
    if (k < static_cast<long>(c.size()))
      c[static_cast<std::size_t>(k)] += a.c_[i];
  }
  for (std::size_t i = 0; i < b.c_.size(); ++i) {
    long k = b.v_ + static_cast<long>(i) - lo;
    if (k < static_cast<long>(c.size()))
      c[static_cast<std::size_t>(k)] += b.c_[i];
  }
  return Series(a.r_, lo, std::move(c), prec);
}

Series operator*(const Series &x, const Series &y) {
  Series a = x, b = y;
  align(a, b);
  long prec = std::min(add_prec(a.valuation(), b.prec_), add_prec(b.valuation(), a.prec_));
  if (a.c_.empty() || b.c_.empty())
    return Series(a.r_, 0, {}, prec);
  long v = a.v_ + b.v_;
  std::vector<Scalar> ac = a.c_, bc = b.c_;
  if (prec < Series::kExact) {
    std::size_t need = static_cast<std::size_t>(std::max(0L, prec - v));
    if (ac.size() > need)
      ac.resize(need);
    if (bc.size() > need)
      bc.resize(need);
  }
  Poly pa(std::move(ac)), pb(std::move(bc));
  return Series(a.r_, v, (pa * pb).coeffs(), prec);
}

Series Series::inverse() const {
  if (c_.empty())
    fail(prec_ == kExact ? ErrorKind::NotInvertible : ErrorKind::InsufficientOrder,
         "inverse of a series with no known nonzero coefficient");
  if (prec_ == kExact && c_.size() == 1)
    return Series(r_, -v_, {c_[0].inverse()});
  long rel = prec_ == kExact ? kDefaultOrder * r_ : prec_ - v_;
  std::vector<Scalar> one{Scalar(1)};
  return Series(r_, -v_, divide_power_series(one, c_, rel), -v_ + rel);
}

Series Series::scaled(const Scalar &s) const {
  if (s.is_zero())
    return Series(r_, 0, {}, prec_);
  Series out = *this;
  for (auto &c : out.c_)
    c *= s;
  return out;
}

Series Series::shifted(long k) const {
  Series out = *this;
  if (!out.c_.empty())
    out.v_ += k;
  out.prec_ = add_prec(prec_, k);
  return out;
}

Series Series::truncated(long prec) const {
  Series out = *this;
  out.prec_ = std::min(prec_, prec);
  out.normalize();
  return out;
}

Series Series::ramified(long k) const {
  if (k < 1)
    fail(ErrorKind::InvalidInput, "ramification factor must be positive");
  if (k == 1)
    return *this;
  Series out;
  out.r_ = r_ * k;
  out.prec_ = mul_prec(prec_, k);
  if (c_.empty())
    return out;
  out.v_ = v_ * k;
  out.c_.assign((c_.size() - 1) * static_cast<std::size_t>(k) + 1, Scalar());
  for (std::size_t i = 0; i < c_.size(); ++i)
    out.c_[i * static_cast<std::size_t>(k)] = c_[i];
  return out; // not normalized on purpose: keeps the requested ramification
}

Series Series::compacted() const {
  long g = r_;
  for (std::size_t i = 0; i < c_.size() && g > 1; ++i)
    if (!c_[i].is_zero())
      g = std::gcd(g, v_ + static_cast<long>(i));
  if (g <= 1)
    return *this;
  std::vector<Scalar> nc;
  for (std::size_t i = 0; i < c_.size(); i += static_cast<std::size_t>(g))
    nc.push_back(c_[i]);
  long prec = prec_ == kExact ? kExact : (prec_ >= 0 ? prec_ / g : -((-prec_ + g - 1) / g));
  return Series(r_ / g, c_.empty() ? 0 : v_ / g, std::move(nc), prec);
}

Series Series::substitute_power(long p) const {
  if (p < 1)
    fail(ErrorKind::InvalidInput, "substitution x -> x^p needs p >= 1");
  Series out = ramified(p);
  out.r_ = r_;
  out.normalize();
  return out;
}

Series Series::substitute_scale(const Scalar &c) const {
  if (c.is_zero())
    fail(ErrorKind::InvalidInput, "substitution x -> c*x needs c != 0");
  Series out = *this;
  for (std::size_t i = 0; i < out.c_.size(); ++i) {
    if (out.c_[i].is_zero())
      continue;
    long k = v_ + static_cast<long>(i);
    Scalar factor;
    if (k % r_ == 0) {
      factor = c.pow(k / r_);
    } else if (c.is_rational()) {
      auto root = rational_power(c.rational(), make_rational(k, r_));
      if (!root)
        fail(ErrorKind::Unsupported, "c^(" + std::to_string(k) + "/" + std::to_string(r_) +
                                         ") is not in the constants field");
      factor = Scalar(*root);
    } else {
      fail(ErrorKind::Unsupported, "fractional power of a symbolic constant");
    }
    out.c_[i] *= factor;
  }
  return out;
}

Series Series::substitute_shift_at_infinity(const Scalar &a) const {
  if (c_.empty() || a.is_zero())
    return *this;
  if (prec_ == kExact && c_.size() == 1 && v_ == 0)
    return *this;
  long prec = prec_ == kExact ? v_ + kDefaultOrder * r_ : prec_;
  std::vector<Scalar> out(static_cast<std::size_t>(std::max(0L, prec - v_)));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero())
      continue;
    long k = v_ + static_cast<long>(i);
    if (k >= prec)
      break;
    // (1 + a u)^(-k/r) = sum_j binom(-k/r, j) a^j u^j, and u^j = t^(r j).
    Rational e(-k, r_);
    e.canonicalize();
    Rational b = 1;
    Scalar apow(1);
    for (long j = 0; k + r_ * j < prec; ++j) {
      if (j > 0) {
        b = b * (e - (j - 1)) / j;
        apow *= a;
      }
      if (sgn(b) != 0)
        out[static_cast<std::size_t>(k + r_ * j - v_)] += c_[i] * apow * Scalar(b);
    }
  }
  return Series(r_, v_, std::move(out), prec);
}

Series Series::euler() const {
  Series out = *this;
  for (std::size_t i = 0; i < out.c_.size(); ++i) {
    long k = v_ + static_cast<long>(i);
    out.c_[i] *= Scalar(k, r_);
  }
  out.normalize();
  return out;
}

bool Series::agrees_with(const Series &o) const {
  Series a = *this, b = o;
  align(a, b);
  long p = std::min(a.prec_, b.prec_);
  Series d = (a - b).truncated(p);
  return d.c_.empty();
}

bool operator==(const Series &x, const Series &y) {
  Series a = x, b = y;
  align(a, b);
  if (a.prec_ != b.prec_ || a.c_.size() != b.c_.size())
    return false;
  if (a.c_.empty())
    return true;
  return a.v_ == b.v_ && a.c_ == b.c_;
}

std::string Series::str(const std::string &var) const {
  std::ostringstream os;
  bool first = true;
  auto exponent = [&](long k) {
    Rational e(k, r_);
    e.canonicalize();
    return e.get_den() == 1 ? e.get_str() : "(" + e.get_str() + ")";
  };
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero())
      continue;
    long k = v_ + static_cast<long>(i);
    std::string c = c_[i].str();
    bool paren = !c_[i].is_rational() || (c.find('/') != std::string::npos && k != 0);
    if (paren)
      c = "(" + c + ")";
    if (!first)
      os << (c[0] == '-' ? " - " : " + ");
    else if (c[0] == '-')
      os << "-";
    if (c[0] == '-')
      c = c.substr(1);
    first = false;
    if (k == 0) {
      os << c;
      continue;
    }
    if (c != "1")
      os << c << "*";
    os << var;
    if (k != r_)
      os << "^" << exponent(k);
  }
  if (prec_ != kExact) {
    if (!first)
      os << " + ";
    os << "O(" << var << "^" << exponent(prec_) << ")";
  } else if (first) {
    os << "0";
  }
  return os.str();
}

Series expand_series(const RatFunc &f, ExpansionPoint at, long order, long ramification) {
  if (ramification < 1)
    fail(ErrorKind::InvalidInput, "ramification must be positive");
  Series s;
  if (f.is_zero()) {
    s = Series();
  } else if (at == ExpansionPoint::Zero) {
    if (f.is_polynomial()) {
      s = Series::from_poly(f.num().scaled(f.den().leading().inverse()));
    } else {
      const auto &n = f.num().coeffs(), &d = f.den().coeffs();
      long tn = static_cast<long>(f.num().valuation()), td = static_cast<long>(f.den().valuation());
      long v = tn - td;
      long terms = order - v + 1;
      std::vector<Scalar> nn(n.begin() + tn, n.end()), dd(d.begin() + td, d.end());
      s = Series(1, v, divide_power_series(nn, dd, terms), order + 1);
    }
  } else {
    // f(1/u) = u^(deg d - deg n) * rev(n)(u) / rev(d)(u); rev has nonzero constant term.
    std::vector<Scalar> rn(f.num().coeffs().rbegin(), f.num().coeffs().rend());
    std::vector<Scalar> rd(f.den().coeffs().rbegin(), f.den().coeffs().rend());
    long v = f.den().degree() - f.num().degree();
    if (f.den().degree() == 0) {
      Scalar inv = f.den().leading().inverse();
      for (auto &c : rn)
        c *= inv;
      s = Series(1, v, std::move(rn));
    } else {
      s = Series(1, v, divide_power_series(rn, rd, order - v + 1), order + 1);
    }
  }
  return s.ramified(ramification);
}

RatFunc to_ratfunc(const Series &s) {
  if (!s.is_exact())
    fail(ErrorKind::InvalidInput, "only exact series convert to rational functions");
  Series c = s.compacted();
  if (c.ramification() != 1)
    fail(ErrorKind::InvalidInput, "series has fractional exponents");
  if (c.is_zero())
    return RatFunc();
  long v = c.valuation();
  Poly p(c.coeffs());
  if (v >= 0)
    return RatFunc(p.shifted(static_cast<std::size_t>(v)));
  return RatFunc(p, Poly::monomial(Scalar(1), static_cast<std::size_t>(-v)));
}

} // namespace consys
