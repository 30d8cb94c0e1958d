#include "consys/scalar.hpp"

#include "consys/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace consys {

const char *to_string(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::InvalidInput: return "invalid input";
  case ErrorKind::NotInvertible: return "not invertible";
  case ErrorKind::Unsupported: return "unsupported";
  case ErrorKind::InsufficientOrder: return "insufficient order";
  case ErrorKind::Resonance: return "resonance";
  case ErrorKind::Inconsistent: return "inconsistent";
  case ErrorKind::ResourceCap: return "resource cap";
  case ErrorKind::Internal: return "internal error";
  }
  return "unknown";
}

// ---------------------------------------------------------------- monomials

bool MonomialLess::operator()(const Monomial &a, const Monomial &b) const {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const auto &[na, ea] = a[i];
    const auto &[nb, eb] = b[j];
    if (na == nb) {
      if (ea != eb)
        return ea < eb;
      ++i;
      ++j;
    } else if (na < nb) {
      return false; // a carries a more significant generator
    } else {
      return true;
    }
  }
  return i == a.size() && j < b.size();
}

namespace {

Monomial mono_mul(const Monomial &a, const Monomial &b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return r;
}

std::optional<Monomial> mono_div(const Monomial &a, const Monomial &b) {
  Monomial r;
  std::size_t i = 0;
  for (const auto &[name, e] : b) {
    while (i < a.size() && a[i].first < name)
      r.push_back(a[i++]);
    if (i == a.size() || a[i].first != name || a[i].second < e)
      return std::nullopt;
    if (a[i].second > e)
      r.emplace_back(name, a[i].second - e);
    ++i;
  }
  while (i < a.size())
    r.push_back(a[i++]);
  return r;
}

unsigned mono_degree(const Monomial &m, const std::string &g) {
  for (const auto &[n, e] : m)
    if (n == g)
      return e;
  return 0;
}

Monomial mono_without(const Monomial &m, const std::string &g) {
  Monomial r;
  for (const auto &t : m)
    if (t.first != g)
      r.push_back(t);
  return r;
}

} // namespace

// ---------------------------------------------------------------- MPoly

MPoly::MPoly(const Rational &c) {
  if (sgn(c) != 0)
    terms_.emplace(Monomial{}, c);
}

MPoly MPoly::generator(const std::string &name) {
  MPoly p;
  p.terms_.emplace(Monomial{{name, 1u}}, Rational(1));
  return p;
}

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational MPoly::constant_value() const { return terms_.empty() ? Rational(0) : terms_.begin()->second; }

std::vector<std::string> MPoly::generators() const {
  std::set<std::string> s;
  for (const auto &[m, c] : terms_)
    for (const auto &[n, e] : m)
      s.insert(n);
  return {s.begin(), s.end()};
}

unsigned MPoly::degree_in(const std::string &g) const {
  unsigned d = 0;
  for (const auto &[m, c] : terms_)
    d = std::max(d, mono_degree(m, g));
  return d;
}

std::vector<MPoly> MPoly::coefficients_in(const std::string &g) const {
  std::vector<MPoly> out(degree_in(g) + 1);
  for (const auto &[m, c] : terms_)
    out[mono_degree(m, g)].add_term(mono_without(m, g), c);
  return out;
}

void MPoly::add_term(const Monomial &m, const Rational &c) {
  if (sgn(c) == 0)
    return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0)
      terms_.erase(it);
  }
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto &[m, c] : r.terms_)
    c = -c;
  return r;
}

MPoly &MPoly::operator+=(const MPoly &o) {
  for (const auto &[m, c] : o.terms_)
    add_term(m, c);
  return *this;
}

MPoly &MPoly::operator-=(const MPoly &o) {
  for (const auto &[m, c] : o.terms_)
    add_term(m, -c);
  return *this;
}

MPoly operator*(const MPoly &a, const MPoly &b) {
  MPoly r;
  for (const auto &[ma, ca] : a.terms_)
    for (const auto &[mb, cb] : b.terms_)
      r.add_term(mono_mul(ma, mb), ca * cb);
  return r;
}

MPoly MPoly::scaled(const Rational &c) const {
  if (sgn(c) == 0)
    return {};
  MPoly r = *this;
  for (auto &[m, v] : r.terms_)
    v *= c;
  return r;
}

MPoly MPoly::times_monomial(const Monomial &mono, const Rational &c) const {
  MPoly r;
  if (sgn(c) == 0)
    return r;
  for (const auto &[m, v] : terms_)
    r.terms_.emplace(mono_mul(m, mono), v * c);
  return r;
}

MPoly MPoly::pow(unsigned e) const {
  MPoly r(Rational(1)), b = *this;
  while (e) {
    if (e & 1u)
      r = r * b;
    e >>= 1u;
    if (e)
      b = b * b;
  }
  return r;
}

std::optional<MPoly> MPoly::divide_exact(const MPoly &b) const {
  if (b.is_zero())
    return std::nullopt;
  MPoly q, r = *this;
  const Monomial &lb = b.leading_monomial();
  const Rational &cb = b.leading_coefficient();
  while (!r.is_zero()) {
    auto t = mono_div(r.leading_monomial(), lb);
    if (!t)
      return std::nullopt;
    Rational c = r.leading_coefficient() / cb;
    q.add_term(*t, c);
    r -= b.times_monomial(*t, c);
  }
  return q;
}

MPoly MPoly::monic() const {
  if (is_zero())
    return {};
  return scaled(1 / leading_coefficient());
}

bool operator<(const MPoly &a, const MPoly &b) {
  return std::lexicographical_compare(
      a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(), [](const auto &x, const auto &y) {
        if (MonomialLess{}(x.first, y.first))
          return true;
        if (MonomialLess{}(y.first, x.first))
          return false;
        return x.second < y.second;
      });
}

std::string MPoly::str() const {
  if (terms_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto &[m, c] = *it;
    Rational a = abs(c);
    if (first) {
      if (sgn(c) < 0)
        os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    bool coeff_shown = false;
    if (m.empty() || a != 1) {
      os << a.get_str();
      coeff_shown = true;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (coeff_shown || i > 0)
        os << "*";
      os << m[i].first;
      if (m[i].second != 1)
        os << "^" << m[i].second;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- gcd

namespace {

MPoly content_in(const MPoly &p, const std::string &v) {
  MPoly g;
  for (const auto &c : p.coefficients_in(v)) {
    if (c.is_zero())
      continue;
    g = gcd(g, c);
    if (g.is_constant())
      break;
  }
  return g;
}

MPoly leading_coeff_in(const MPoly &p, const std::string &v) { return p.coefficients_in(v).back(); }

MPoly primitive_part(const MPoly &p, const std::string &v) {
  if (p.is_zero())
    return p;
  MPoly c = content_in(p, v);
  return *p.divide_exact(c);
}

MPoly pseudo_remainder(MPoly a, const MPoly &b, const std::string &v) {
  const unsigned db = b.degree_in(v);
  const MPoly lb = leading_coeff_in(b, v);
  while (!a.is_zero()) {
    unsigned da = a.degree_in(v);
    if (da < db)
      break;
    MPoly la = leading_coeff_in(a, v);
    Monomial shift;
    if (da > db)
      shift.emplace_back(v, da - db);
    a = a * lb - (la * b).times_monomial(shift, Rational(1));
  }
  return a;
}

} // namespace

MPoly gcd(const MPoly &a, const MPoly &b) {
  if (a.is_zero())
    return b.monic();
  if (b.is_zero())
    return a.monic();
  if (a.is_constant() || b.is_constant())
    return MPoly(Rational(1));
  if (a == b)
    return a.monic();
  auto ga = a.generators(), gb = b.generators();
  std::string v = std::min(ga.front(), gb.front());
  const bool in_a = a.degree_in(v) > 0, in_b = b.degree_in(v) > 0;
  if (!in_a)
    return gcd(a, content_in(b, v));
  if (!in_b)
    return gcd(content_in(a, v), b);
  MPoly ca = content_in(a, v), cb = content_in(b, v);
  MPoly c = gcd(ca, cb);
  MPoly pa = a.divide_exact(ca)->monic(), pb = b.divide_exact(cb)->monic();
  if (pa.degree_in(v) < pb.degree_in(v))
    std::swap(pa, pb);
  while (!pb.is_zero()) {
    MPoly r = pseudo_remainder(pa, pb, v);
    pa = pb;
    if (r.is_zero())
      break;
    if (r.degree_in(v) == 0) {
      pa = MPoly(Rational(1));
      break;
    }
    pb = primitive_part(r, v).monic();
  }
  return (primitive_part(pa, v) * c).monic();
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(long num, long den) {
  if (den == 0)
    fail(ErrorKind::NotInvertible, "zero denominator in rational constant");
  q_ = Rational(num, den);
  q_.canonicalize();
}

Scalar Scalar::generator(const std::string &name) {
  Scalar s;
  s.sym_ = std::make_shared<const Frac>(Frac{MPoly::generator(name), MPoly(Rational(1))});
  return s;
}

Scalar Scalar::fraction(const MPoly &num, const MPoly &den) { return from_frac(num, den); }

Scalar Scalar::from_frac(MPoly num, MPoly den) {
  if (den.is_zero())
    fail(ErrorKind::NotInvertible, "zero denominator in constant expression");
  if (num.is_zero())
    return Scalar();
  if (den.is_constant() && num.is_constant())
    return Scalar(num.constant_value() / den.constant_value());
  if (!den.is_constant()) {
    MPoly g = gcd(num, den);
    if (!g.is_constant()) {
      num = *num.divide_exact(g);
      den = *den.divide_exact(g);
    }
  }
  Rational lc = den.leading_coefficient();
  if (lc != 1) {
    num = num.scaled(1 / lc);
    den = den.scaled(1 / lc);
  }
  if (den.is_constant() && num.is_constant())
    return Scalar(num.constant_value());
  Scalar s;
  s.sym_ = std::make_shared<const Frac>(Frac{std::move(num), std::move(den)});
  return s;
}

const Rational &Scalar::rational() const {
  if (sym_)
    fail(ErrorKind::Unsupported, "constant " + str() + " is not rational");
  return q_;
}

MPoly Scalar::numerator() const { return sym_ ? sym_->num : MPoly(Rational(q_.get_num())); }
MPoly Scalar::denominator() const { return sym_ ? sym_->den : MPoly(Rational(q_.get_den())); }

std::vector<std::string> Scalar::generators() const {
  if (!sym_)
    return {};
  std::set<std::string> s;
  for (auto &g : sym_->num.generators())
    s.insert(g);
  for (auto &g : sym_->den.generators())
    s.insert(g);
  return {s.begin(), s.end()};
}

Scalar Scalar::operator-() const {
  if (!sym_)
    return Scalar(Rational(-q_));
  Scalar s;
  s.sym_ = std::make_shared<const Frac>(Frac{-sym_->num, sym_->den});
  return s;
}

Scalar &Scalar::operator+=(const Scalar &o) {
  if (!sym_ && !o.sym_) {
    q_ += o.q_;
    return *this;
  }
  if (o.is_zero())
    return *this;
  if (is_zero())
    return *this = o;
  MPoly an = numerator(), ad = denominator(), bn = o.numerator(), bd = o.denominator();
  if (ad == bd)
    return *this = from_frac(an + bn, ad);
  return *this = from_frac(an * bd + bn * ad, ad * bd);
}

Scalar &Scalar::operator-=(const Scalar &o) { return *this += -o; }

Scalar &Scalar::operator*=(const Scalar &o) {
  if (!sym_ && !o.sym_) {
    q_ *= o.q_;
    return *this;
  }
  if (is_zero() || o.is_zero())
    return *this = Scalar();
  if (!o.sym_) {
    Scalar s;
    s.sym_ = std::make_shared<const Frac>(Frac{sym_->num.scaled(o.q_), sym_->den});
    return *this = s;
  }
  if (!sym_) {
    Scalar s;
    s.sym_ = std::make_shared<const Frac>(Frac{o.sym_->num.scaled(q_), o.sym_->den});
    return *this = s;
  }
  return *this = from_frac(numerator() * o.numerator(), denominator() * o.denominator());
}

Scalar Scalar::inverse() const {
  if (is_zero())
    fail(ErrorKind::NotInvertible, "division by zero constant");
  if (!sym_)
    return Scalar(Rational(1 / q_));
  return from_frac(sym_->den, sym_->num);
}

Scalar &Scalar::operator/=(const Scalar &o) {
  if (!sym_ && !o.sym_) {
    if (sgn(o.q_) == 0)
      fail(ErrorKind::NotInvertible, "division by zero constant");
    q_ /= o.q_;
    return *this;
  }
  return *this *= o.inverse();
}

Scalar Scalar::pow(long e) const {
  if (e < 0)
    return inverse().pow(-e);
  if (!sym_) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), q_.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(r.get_den_mpz_t(), q_.get_den_mpz_t(), static_cast<unsigned long>(e));
    return Scalar(r);
  }
  return from_frac(sym_->num.pow(static_cast<unsigned>(e)), sym_->den.pow(static_cast<unsigned>(e)));
}

bool operator==(const Scalar &a, const Scalar &b) {
  if (!a.sym_ && !b.sym_)
    return a.q_ == b.q_;
  if (!a.sym_ || !b.sym_)
    return false;
  return a.sym_ == b.sym_ || (a.sym_->num == b.sym_->num && a.sym_->den == b.sym_->den);
}

bool operator<(const Scalar &a, const Scalar &b) {
  if (!a.sym_ && !b.sym_)
    return a.q_ < b.q_;
  if (!a.sym_)
    return true;
  if (!b.sym_)
    return false;
  if (a.sym_->den == b.sym_->den)
    return a.sym_->num < b.sym_->num;
  return a.sym_->den < b.sym_->den;
}

std::string Scalar::str() const {
  if (!sym_)
    return q_.get_str();
  const bool single = sym_->num.terms().size() == 1;
  if (sym_->den.is_constant())
    return sym_->num.str();
  std::string n = single ? sym_->num.str() : "(" + sym_->num.str() + ")";
  return n + "/(" + sym_->den.str() + ")";
}

// ---------------------------------------------------------------- roots

std::optional<Integer> exact_root(const Integer &z, unsigned long k) {
  if (k == 0)
    return std::nullopt;
  if (sgn(z) < 0 && k % 2 == 0)
    return std::nullopt;
  Integer r;
  if (mpz_root(r.get_mpz_t(), z.get_mpz_t(), k) == 0)
    return std::nullopt;
  return r;
}

std::optional<Rational> rational_power(const Rational &c, const Rational &e) {
  if (e.get_den() == 1) {
    return Scalar(c).pow(e.get_num().get_si()).rational();
  }
  if (!e.get_den().fits_ulong_p() || !e.get_num().fits_slong_p())
    return std::nullopt;
  unsigned long k = e.get_den().get_ui();
  auto n = exact_root(c.get_num(), k);
  auto d = exact_root(c.get_den(), k);
  if (!n || !d)
    return std::nullopt;
  Rational base(*n, *d);
  base.canonicalize();
  if (sgn(base) == 0 && sgn(e) < 0)
    return std::nullopt;
  return Scalar(base).pow(e.get_num().get_si()).rational();
}

} // namespace consys
