#include "consys/poly.hpp"

#include "consys/error.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>

namespace consys {

namespace {

std::atomic<std::size_t> g_karatsuba_threshold{48};

using Vec = std::vector<Scalar>;

void school(const Scalar *a, std::size_t na, const Scalar *b, std::size_t nb, Scalar *out) {
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i].is_zero())
      continue;
    for (std::size_t j = 0; j < nb; ++j)
      if (!b[j].is_zero())
        out[i + j] += a[i] * b[j];
  }
}

// out (size na+nb-1, zero-initialised) += a*b
void kara(const Scalar *a, std::size_t na, const Scalar *b, std::size_t nb, Scalar *out) {
  const std::size_t t = g_karatsuba_threshold.load(std::memory_order_relaxed);
  if (na < t || nb < t || na != nb) {
    if (na >= t && nb >= t) {
      // Split the longer operand into chunks of the shorter length.
      if (na < nb) {
        std::swap(a, b);
        std::swap(na, nb);
      }
      for (std::size_t off = 0; off < na; off += nb) {
        std::size_t len = std::min(nb, na - off);
        kara(a + off, len, b, nb, out + off);
      }
      return;
    }
    school(a, na, b, nb, out);
    return;
  }
  const std::size_t n = na, h = n / 2, hi = n - h;
  Vec a01(hi), b01(hi);
  for (std::size_t i = 0; i < hi; ++i) {
    a01[i] = a[h + i];
    b01[i] = b[h + i];
    if (i < h) {
      a01[i] += a[i];
      b01[i] += b[i];
    }
  }
  Vec z0(2 * h > 0 ? 2 * h - 1 : 0), z2(2 * hi - 1), z1(2 * hi - 1);
  if (h > 0)
    kara(a, h, b, h, z0.data());
  kara(a + h, hi, b + h, hi, z2.data());
  kara(a01.data(), hi, b01.data(), hi, z1.data());
  for (std::size_t i = 0; i < z0.size(); ++i)
    z1[i] -= z0[i];
  for (std::size_t i = 0; i < z2.size(); ++i)
    z1[i] -= z2[i];
  for (std::size_t i = 0; i < z0.size(); ++i)
    out[i] += z0[i];
  for (std::size_t i = 0; i < z1.size(); ++i)
    out[h + i] += z1[i];
  for (std::size_t i = 0; i < z2.size(); ++i)
    out[2 * h + i] += z2[i];
}

} // namespace

void set_karatsuba_threshold(std::size_t n) { g_karatsuba_threshold = std::max<std::size_t>(n, 2); }
std::size_t karatsuba_threshold() { return g_karatsuba_threshold; }

Poly::Poly(const Scalar &c) {
  if (!c.is_zero())
    c_.push_back(c);
}

Poly::Poly(std::vector<Scalar> ascending) : c_(std::move(ascending)) { trim(); }

Poly Poly::x() { return monomial(Scalar(1), 1); }

Poly Poly::monomial(const Scalar &c, std::size_t k) {
  Poly p;
  if (c.is_zero())
    return p;
  p.c_.assign(k + 1, Scalar());
  p.c_[k] = c;
  return p;
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero())
    c_.pop_back();
}

std::size_t Poly::valuation() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].is_zero())
      return i;
  return 0;
}

bool Poly::is_rational() const {
  return std::all_of(c_.begin(), c_.end(), [](const Scalar &s) { return s.is_rational(); });
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto &c : r.c_)
    c = -c;
  return r;
}

Poly &Poly::operator+=(const Poly &o) {
  if (o.c_.size() > c_.size())
    c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i)
    c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly &Poly::operator-=(const Poly &o) {
  if (o.c_.size() > c_.size())
    c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i)
    c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly operator*(const Poly &a, const Poly &b) {
  if (a.is_zero() || b.is_zero())
    return {};
  Vec out(a.c_.size() + b.c_.size() - 1);
  kara(a.c_.data(), a.c_.size(), b.c_.data(), b.c_.size(), out.data());
  return Poly(std::move(out));
}

Poly Poly::scaled(const Scalar &s) const {
  if (s.is_zero())
    return {};
  Poly r = *this;
  for (auto &c : r.c_)
    c *= s;
  return r;
}

Poly Poly::shifted(std::size_t k) const {
  if (is_zero() || k == 0)
    return *this;
  Poly r;
  r.c_.assign(k, Scalar());
  r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly r(Scalar(1)), b = *this;
  while (e) {
    if (e & 1u)
      r = r * b;
    e >>= 1u;
    if (e)
      b = b * b;
  }
  return r;
}

void Poly::divmod(const Poly &d, Poly &q, Poly &r) const {
  if (d.is_zero())
    fail(ErrorKind::NotInvertible, "polynomial division by zero");
  r = *this;
  q = Poly();
  if (r.degree() < d.degree())
    return;
  const std::size_t dd = d.c_.size() - 1;
  const Scalar inv = d.leading().inverse();
  std::vector<Scalar> qc(r.c_.size() - dd);
  for (std::size_t k = r.c_.size(); k-- > dd;) {
    if (r.c_[k].is_zero())
      continue;
    Scalar f = r.c_[k] * inv;
    qc[k - dd] = f;
    for (std::size_t j = 0; j <= dd; ++j)
      if (!d.c_[j].is_zero())
        r.c_[k - dd + j] -= f * d.c_[j];
  }
  r.trim();
  q = Poly(std::move(qc));
}

Poly Poly::monic() const {
  if (is_zero() || leading().is_one())
    return *this;
  return scaled(leading().inverse());
}

Poly Poly::derivative() const {
  if (c_.size() <= 1)
    return {};
  Vec out(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i)
    out[i - 1] = c_[i] * Scalar(static_cast<long>(i));
  return Poly(std::move(out));
}

Scalar Poly::eval(const Scalar &at) const {
  Scalar acc;
  for (std::size_t i = c_.size(); i-- > 0;)
    acc = acc * at + c_[i];
  return acc;
}

Poly Poly::taylor_shift(const Scalar &a) const {
  if (a.is_zero() || is_constant())
    return *this;
  // Horner in the ring: ((c_n)(x+a) + c_{n-1})(x+a) + ...
  Vec r(c_.size());
  for (std::size_t i = c_.size(); i-- > 0;) {
    // r <- r*(x+a) + c_i
    for (std::size_t j = c_.size() - 1; j > 0; --j)
      r[j] = r[j - 1] + r[j] * a;
    r[0] = r[0] * a + c_[i];
  }
  return Poly(std::move(r));
}

Poly Poly::dilate(const Scalar &c) const {
  Poly r = *this;
  Scalar pw(1);
  for (auto &v : r.c_) {
    v *= pw;
    pw *= c;
  }
  r.trim();
  return r;
}

Poly Poly::inflate(std::size_t k) const {
  if (k == 1 || is_constant())
    return *this;
  Vec r((c_.size() - 1) * k + 1);
  for (std::size_t i = 0; i < c_.size(); ++i)
    r[i * k] = c_[i];
  return Poly(std::move(r));
}

bool Poly::deflatable(std::size_t k) const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (i % k != 0 && !c_[i].is_zero())
      return false;
  return true;
}

Poly Poly::deflate(std::size_t k) const {
  if (k == 1 || is_zero())
    return *this;
  Vec r((c_.size() - 1) / k + 1);
  for (std::size_t i = 0; i < c_.size(); i += k)
    r[i / k] = c_[i];
  return Poly(std::move(r));
}

std::string Poly::str(const std::string &var) const {
  if (c_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const Scalar &c = c_[i];
    if (c.is_zero())
      continue;
    std::string cs;
    bool negative = false;
    if (c.is_rational()) {
      negative = sgn(c.rational()) < 0;
      cs = Scalar(Rational(abs(c.rational()))).str();
    } else {
      cs = "(" + c.str() + ")";
    }
    if (!first)
      os << (negative ? " - " : " + ");
    else if (negative)
      os << "-";
    first = false;
    if (i == 0) {
      os << cs;
      continue;
    }
    if (cs != "1")
      os << cs << "*";
    os << var;
    if (i > 1)
      os << "^" << i;
  }
  return os.str();
}

namespace {

// Polynomials in x with coefficients in Q[generators]: primitive remainder
// sequence with x as the main variable.
using MVec = std::vector<MPoly>;

void trim_m(MVec &v) {
  while (!v.empty() && v.back().is_zero())
    v.pop_back();
}

MVec cleared(const Poly &p) {
  MPoly l(Rational(1));
  for (const auto &c : p.coeffs()) {
    MPoly d = c.denominator();
    l = *(l * d).divide_exact(gcd(l, d));
  }
  MVec out;
  for (const auto &c : p.coeffs())
    out.push_back(c.numerator() * *l.divide_exact(c.denominator()));
  return out;
}

void make_primitive(MVec &v) {
  MPoly g;
  for (const auto &c : v) {
    if (c.is_zero())
      continue;
    g = gcd(g, c);
    if (g.is_constant())
      break;
  }
  if (!g.is_constant())
    for (auto &c : v)
      c = *c.divide_exact(g);
  Rational lc = v.back().leading_coefficient();
  for (auto &c : v)
    c = c.scaled(1 / lc);
}

MVec pseudo_rem(MVec a, const MVec &b) {
  const MPoly &lb = b.back();
  while (a.size() >= b.size()) {
    MPoly la = a.back();
    std::size_t shift = a.size() - b.size();
    for (auto &c : a)
      c = c * lb;
    for (std::size_t i = 0; i < b.size(); ++i)
      a[i + shift] -= la * b[i];
    trim_m(a);
  }
  return a;
}

Poly symbolic_gcd(const Poly &a, const Poly &b) {
  MVec u = cleared(a), v = cleared(b);
  if (u.size() < v.size())
    std::swap(u, v);
  make_primitive(u);
  make_primitive(v);
  while (!v.empty()) {
    if (v.size() == 1)
      return Poly(Scalar(1));
    MVec r = pseudo_rem(u, v);
    u = std::move(v);
    if (r.empty())
      break;
    make_primitive(r);
    v = std::move(r);
  }
  std::vector<Scalar> c;
  for (const auto &m : u)
    c.push_back(Scalar::fraction(m, MPoly(Rational(1))));
  return Poly(std::move(c)).monic();
}

} // namespace

Poly gcd(const Poly &a, const Poly &b) {
  if (a.is_zero() || b.is_zero())
    return (a.is_zero() ? b : a).monic();
  if (!a.is_rational() || !b.is_rational())
    return symbolic_gcd(a, b);
  Poly u = a, v = b;
  if (u.degree() < v.degree())
    std::swap(u, v);
  while (!v.is_zero()) {
    Poly q, r;
    u.divmod(v, q, r);
    u = std::move(v);
    v = r.monic();
  }
  return u.monic();
}

std::vector<Poly> squarefree_decomposition(const Poly &p) {
  // Yun's algorithm (characteristic zero).
  std::vector<Poly> out{Poly()};
  if (p.degree() <= 0)
    return out;
  Poly f = p.monic();
  Poly d = f.derivative();
  Poly a = gcd(f, d);
  Poly q, r;
  f.divmod(a, q, r);
  Poly b = q;
  d.divmod(a, q, r);
  Poly c = q;
  Poly e = c - b.derivative();
  while (b.degree() > 0) {
    Poly g = gcd(b, e);
    out.push_back(g);
    b.divmod(g, q, r);
    Poly nb = q;
    e.divmod(g, q, r);
    e = q - nb.derivative();
    b = nb;
  }
  return out;
}

namespace {

std::vector<Integer> divisors(Integer n) {
  n = abs(n);
  std::vector<std::pair<Integer, unsigned>> fac;
  Integer m = n;
  for (unsigned long p = 2; Integer(p) * p <= m && p < 2000000ul; ++p) {
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e)
      fac.emplace_back(Integer(p), e);
  }
  if (m > 1)
    fac.emplace_back(m, 1); // large cofactor treated as prime
  std::vector<Integer> ds{Integer(1)};
  for (const auto &[p, e] : fac) {
    std::size_t sz = ds.size();
    Integer pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < sz; ++i)
        ds.push_back(ds[i] * pk);
    }
  }
  return ds;
}

} // namespace

std::vector<Rational> rational_roots(const Poly &p) {
  if (!p.is_rational())
    fail(ErrorKind::Unsupported, "rational root search needs rational coefficients");
  std::vector<Rational> roots;
  if (p.degree() <= 0)
    return roots;
  // Squarefree part, made integral and primitive.
  Poly f = p.monic();
  Poly g = gcd(f, f.derivative());
  Poly q, r;
  f.divmod(g, q, r);
  f = q;
  if (f.valuation() > 0) {
    roots.emplace_back(0);
    std::vector<Scalar> cs(f.coeffs().begin() + 1, f.coeffs().end());
    f = Poly(cs);
  }
  if (f.degree() <= 0)
    return roots;
  Integer l = 1;
  for (const auto &c : f.coeffs())
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.rational().get_den_mpz_t());
  std::vector<Integer> a;
  for (const auto &c : f.coeffs())
    a.push_back(Integer(c.rational() * l));
  const std::size_t n = a.size() - 1;
  auto value_is_zero = [&](const Integer &num, const Integer &den) {
    // sum a_i num^i den^(n-i)
    Integer acc = 0, np = 1;
    std::vector<Integer> dp(n + 1);
    dp[0] = 1;
    for (std::size_t i = 1; i <= n; ++i)
      dp[i] = dp[i - 1] * den;
    for (std::size_t i = 0; i <= n; ++i) {
      acc += a[i] * np * dp[n - i];
      np *= num;
    }
    return acc == 0;
  };
  auto dn = divisors(a[0]);
  auto dd = divisors(a[n]);
  std::set<Rational> found;
  for (const auto &u : dn)
    for (const auto &v : dd) {
      for (int s : {1, -1}) {
        Rational cand(Integer(s * u), v);
        cand.canonicalize();
        if (found.count(cand))
          continue;
        if (value_is_zero(cand.get_num(), cand.get_den()))
          found.insert(cand);
      }
    }
  roots.insert(roots.end(), found.begin(), found.end());
  std::sort(roots.begin(), roots.end());
  return roots;
}

} // namespace consys
