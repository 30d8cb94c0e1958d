#include "consys/operators.hpp"

#include <algorithm>
#include <sstream>

namespace consys {

namespace {

// Prime exponent vector of |q| for a nonzero rational.
std::map<Integer, long> prime_exponents(const Rational &q) {
  std::map<Integer, long> out;
  auto factor = [&](Integer n, long sign) {
    n = abs(n);
    for (Integer p = 2; p * p <= n; ++p)
      while (n % p == 0) {
        out[p] += sign;
        n /= p;
      }
    if (n > 1)
      out[n] += sign;
  };
  factor(q.get_num(), 1);
  factor(q.get_den(), -1);
  return out;
}

// Some nonzero (a, b) with |q1|^a = |q2|^b.
bool multiplicatively_dependent(const Rational &q1, const Rational &q2) {
  auto v1 = prime_exponents(q1), v2 = prime_exponents(q2);
  if (v1.empty() || v2.empty())
    return true;
  const auto &[p0, e0] = *v1.begin();
  Rational ratio = make_rational(v2.count(p0) ? v2[p0] : 0, e0);
  if (sgn(ratio) == 0)
    return false;
  for (const auto &[p, e] : v1)
    if (Rational(v2.count(p) ? v2[p] : 0) != ratio * e)
      return false;
  for (const auto &[p, e] : v2)
    if (!v1.count(p))
      return false;
  return true;
}

bool is_bare_generator(const Scalar &s) {
  auto gens = s.generators();
  return gens.size() == 1 && s == Scalar::generator(gens[0]);
}

void check_dilation(const Scalar &q) {
  if (q.is_rational() && (q.is_zero() || q == Scalar(1) || q == Scalar(-1)))
    fail(ErrorKind::InvalidInput, "dilation factor must not be 0, 1 or -1");
}

Integer floor_of(const Rational &r) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return f;
}

// alpha = frac + shift with shift integer taken from the rational part.
std::pair<Scalar, long> split_exponent(const Scalar &alpha) {
  if (alpha.is_rational()) {
    Integer f = floor_of(alpha.rational());
    return {alpha - Scalar(f), f.get_si()};
  }
  MPoly den = alpha.denominator();
  if (!den.is_constant())
    return {alpha, 0};
  MPoly num = alpha.numerator();
  auto it = num.terms().find(Monomial{});
  if (it == num.terms().end())
    return {alpha, 0};
  Integer f = floor_of(it->second / den.constant_value());
  return {alpha - Scalar(f), f.get_si()};
}

RatFunc x_power(long k) { return RatFunc::x().pow(k); }

Scalar binomial(long n, long k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Scalar(b);
}

} // namespace

// ------------------------------------------------------------ cases

OperatorCase OperatorCase::S() { return OperatorCase(CaseKind::S, Scalar(1), Scalar()); }

OperatorCase OperatorCase::Q(const Scalar &q) {
  check_dilation(q);
  return OperatorCase(CaseKind::Q, q, Scalar());
}

OperatorCase OperatorCase::M(long q) {
  if (q < 2)
    fail(ErrorKind::InvalidInput, "Mahler base must be an integer >= 2");
  return OperatorCase(CaseKind::M, Scalar(q), Scalar());
}

OperatorCase OperatorCase::TwoS(const Scalar &alpha, bool irrational) {
  if (alpha.is_rational())
    fail(ErrorKind::InvalidInput, "second shift must be irrational (a symbolic constant)");
  if (!irrational && !is_bare_generator(alpha))
    fail(ErrorKind::InvalidInput, "second shift must be a declared generator or carry the irrational marker");
  OperatorCase c(CaseKind::TwoS, Scalar(1), alpha);
  c.irrational_ = irrational;
  return c;
}

OperatorCase OperatorCase::TwoQ(const Scalar &q1, const Scalar &q2) {
  check_dilation(q1);
  check_dilation(q2);
  if (q1 == q2 || q1 == q2.inverse())
    fail(ErrorKind::InvalidInput, "dilation factors must be multiplicatively independent");
  if (q1.is_rational() && q2.is_rational() && multiplicatively_dependent(q1.rational(), q2.rational()))
    fail(ErrorKind::InvalidInput, "dilation factors must be multiplicatively independent");
  return OperatorCase(CaseKind::TwoQ, q1, q2);
}

OperatorCase OperatorCase::TwoM(long q1, long q2) {
  if (q1 < 2 || q2 < 2)
    fail(ErrorKind::InvalidInput, "Mahler bases must be integers >= 2");
  if (multiplicatively_dependent(Rational(q1), Rational(q2)))
    fail(ErrorKind::InvalidInput, "Mahler bases " + std::to_string(q1) + " and " + std::to_string(q2) +
                                      " are multiplicatively dependent");
  return OperatorCase(CaseKind::TwoM, Scalar(q1), Scalar(q2));
}

long OperatorCase::mahler_power(int index) const {
  if (!is_mahler())
    fail(ErrorKind::InvalidInput, "not a Mahler case");
  return param(index).rational().get_num().get_si();
}

Scalar OperatorCase::mu() const {
  switch (kind_) {
  case CaseKind::S:
  case CaseKind::Q:
    return Scalar(1);
  case CaseKind::M:
    return p1_;
  default:
    fail(ErrorKind::InvalidInput, "no derivation in case " + name());
  }
}

ExpansionPoint OperatorCase::expansion_point() const {
  return kind_ == CaseKind::S || kind_ == CaseKind::TwoS ? ExpansionPoint::Infinity : ExpansionPoint::Zero;
}

std::string OperatorCase::name() const {
  switch (kind_) {
  case CaseKind::S:
    return "S";
  case CaseKind::Q:
    return "Q(q=" + p1_.str() + ")";
  case CaseKind::M:
    return "M(q=" + p1_.str() + ")";
  case CaseKind::TwoS:
    return "2S(alpha=" + p2_.str() + ")";
  case CaseKind::TwoQ:
    return "2Q(q1=" + p1_.str() + ", q2=" + p2_.str() + ")";
  case CaseKind::TwoM:
    return "2M(q1=" + p1_.str() + ", q2=" + p2_.str() + ")";
  }
  return "?";
}

namespace {

void check_index(const OperatorCase &c, int index) {
  if (index != 1 && !(index == 2 && c.sigma_count() == 2))
    fail(ErrorKind::InvalidInput, "no sigma" + std::to_string(index) + " in case " + c.name());
}

} // namespace

RatFunc sigma_of(const RatFunc &f, const OperatorCase &c, int index) {
  check_index(c, index);
  switch (c.kind()) {
  case CaseKind::S:
  case CaseKind::TwoS:
    return f.taylor_shift(c.param(index));
  case CaseKind::Q:
  case CaseKind::TwoQ:
    return f.dilate(c.param(index));
  case CaseKind::M:
  case CaseKind::TwoM:
    return f.inflate(static_cast<std::size_t>(c.mahler_power(index)));
  }
  return f;
}

RatFunc sigma_power_of(const RatFunc &f, const OperatorCase &c, int index, long k) {
  check_index(c, index);
  if (k < 0)
    fail(ErrorKind::InvalidInput, "negative sigma power");
  if (k == 0)
    return f;
  switch (c.kind()) {
  case CaseKind::S:
  case CaseKind::TwoS:
    return f.taylor_shift(c.param(index) * Scalar(k));
  case CaseKind::Q:
  case CaseKind::TwoQ:
    return f.dilate(c.param(index).pow(k));
  case CaseKind::M:
  case CaseKind::TwoM: {
    Integer p;
    mpz_pow_ui(p.get_mpz_t(), Integer(c.mahler_power(index)).get_mpz_t(), static_cast<unsigned long>(k));
    if (!p.fits_ulong_p() || p > 1000000)
      fail(ErrorKind::ResourceCap, "Mahler power too large");
    return f.inflate(p.get_ui());
  }
  }
  return f;
}

RatFunc sigma_inverse_of(const RatFunc &f, const OperatorCase &c, int index) {
  check_index(c, index);
  switch (c.kind()) {
  case CaseKind::S:
  case CaseKind::TwoS:
    return f.taylor_shift(-c.param(index));
  case CaseKind::Q:
  case CaseKind::TwoQ:
    return f.dilate(c.param(index).inverse());
  default:
    fail(ErrorKind::Unsupported, "sigma is not invertible in Mahler cases");
  }
}

RatFunc delta_of(const RatFunc &f, const OperatorCase &c, long ramification) {
  switch (c.kind()) {
  case CaseKind::S:
    if (ramification != 1)
      fail(ErrorKind::InvalidInput, "ramified variables only exist in Mahler cases");
    return f.derivative();
  case CaseKind::Q:
    if (ramification != 1)
      fail(ErrorKind::InvalidInput, "ramified variables only exist in Mahler cases");
    return f.euler();
  case CaseKind::M:
    return ramification == 1 ? f.euler() : f.euler().scaled(Scalar(1, ramification));
  default:
    fail(ErrorKind::InvalidInput, "no derivation in case " + c.name());
  }
}

CommutationWitness check_commutation(const OperatorCase &c, const RatFunc &f) {
  CommutationWitness w{c.mu(), delta_of(sigma_of(f, c), c), sigma_of(delta_of(f, c), c)};
  if (w.lhs != w.rhs.scaled(w.mu))
    fail(ErrorKind::Internal, "commutation delta sigma = mu sigma delta fails in case " + c.name() + " for " + f.str());
  return w;
}

// ------------------------------------------------------------ closed forms

bool operator<(const TermKey &a, const TermKey &b) {
  if (a.alpha != b.alpha)
    return a.alpha < b.alpha;
  if (a.log_power != b.log_power)
    return a.log_power < b.log_power;
  if (a.rate != b.rate)
    return a.rate < b.rate;
  if (a.mult1 != b.mult1)
    return a.mult1 < b.mult1;
  return a.mult2 < b.mult2;
}

bool operator==(const TermKey &a, const TermKey &b) {
  return a.alpha == b.alpha && a.log_power == b.log_power && a.rate == b.rate && a.mult1 == b.mult1 &&
         a.mult2 == b.mult2;
}

namespace {

ClosedForm make_term(const RatFunc &r, const Scalar &alpha, unsigned j, const TermKey &exp_part) {
  auto [frac, shift] = split_exponent(alpha);
  TermKey key = exp_part;
  key.alpha = frac;
  key.log_power = j;
  ClosedForm out;
  out.add(key, shift == 0 ? r : r * x_power(shift));
  return out;
}

} // namespace

ClosedForm ClosedForm::power_log(const RatFunc &r, const Scalar &alpha, unsigned j) {
  return make_term(r, alpha, j, TermKey{});
}

ClosedForm ClosedForm::exponential(const RatFunc &r, const Scalar &rate, const Scalar &mult1, const Scalar &mult2) {
  TermKey key;
  if (!rate.is_zero()) {
    key.rate = rate;
    key.mult1 = mult1;
    key.mult2 = mult2;
  }
  ClosedForm out;
  out.add(key, r);
  return out;
}

void ClosedForm::add(TermKey key, const RatFunc &r) {
  if (r.is_zero())
    return;
  auto [it, inserted] = terms_.emplace(std::move(key), r);
  if (!inserted) {
    it->second += r;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

ClosedForm operator+(ClosedForm a, const ClosedForm &b) {
  for (const auto &[k, r] : b.terms_)
    a.add(k, r);
  return a;
}

ClosedForm operator-(const ClosedForm &a, const ClosedForm &b) { return a + RatFunc(-1) * b; }

ClosedForm operator*(const RatFunc &r, const ClosedForm &f) {
  ClosedForm out;
  if (r.is_zero())
    return out;
  for (const auto &[k, v] : f.terms_)
    out.add(k, r * v);
  return out;
}

std::string ClosedForm::str() const {
  if (terms_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[k, r] : terms_) {
    if (!first)
      os << " + ";
    first = false;
    os << "(" << r.str() << ")";
    if (!k.alpha.is_zero())
      os << "*x^(" << k.alpha.str() << ")";
    if (k.log_power == 1)
      os << "*log(x)";
    else if (k.log_power > 1)
      os << "*log(x)^" << k.log_power;
    if (!k.rate.is_zero())
      os << "*exp((" << k.rate.str() << ")*x)";
  }
  return os.str();
}

std::string log_constant_name(const Scalar &q) {
  if (is_bare_generator(q))
    return "log_" + q.generators()[0];
  if (q.is_rational() && sgn(q.rational()) > 0) {
    const Rational &r = q.rational();
    std::string s = "log_" + r.get_num().get_str();
    if (r.get_den() != 1)
      s += "_" + r.get_den().get_str();
    return s;
  }
  fail(ErrorKind::Unsupported, "no named logarithm for the constant " + q.str());
}

ClosedForm sigma_of(const ClosedForm &f, const OperatorCase &c, int index) {
  check_index(c, index);
  ClosedForm out;
  for (const auto &[key, r] : f.terms()) {
    RatFunc base = sigma_of(r, c, index);
    TermKey exp_part;
    exp_part.rate = key.rate;
    exp_part.mult1 = key.mult1;
    exp_part.mult2 = key.mult2;
    if (!key.rate.is_zero()) {
      if (c.kind() != CaseKind::S && c.kind() != CaseKind::TwoS)
        fail(ErrorKind::Unsupported, "exponential terms are only closed under shifts");
      base = base.scaled(index == 2 ? key.mult2 : key.mult1);
    }
    switch (c.kind()) {
    case CaseKind::S:
    case CaseKind::TwoS:
      if (!key.alpha.is_zero() || key.log_power != 0)
        fail(ErrorKind::Unsupported, "x^alpha log(x)^j terms are not closed under shifts");
      out = out + make_term(base, key.alpha, 0, exp_part);
      break;
    case CaseKind::Q:
    case CaseKind::TwoQ: {
      const Scalar &q = c.param(index);
      Scalar factor(1);
      if (!key.alpha.is_zero()) {
        if (!q.is_rational() || !key.alpha.is_rational())
          fail(ErrorKind::Unsupported, "q^alpha is not in the constants field");
        auto p = rational_power(q.rational(), key.alpha.rational());
        if (!p)
          fail(ErrorKind::Unsupported, "q^alpha is not in the constants field");
        factor = Scalar(*p);
      }
      base = base.scaled(factor);
      if (key.log_power == 0) {
        out = out + make_term(base, key.alpha, 0, exp_part);
        break;
      }
      Scalar logq = Scalar::generator(log_constant_name(q));
      for (unsigned k = 0; k <= key.log_power; ++k) {
        Scalar coef = binomial(key.log_power, k) * logq.pow(static_cast<long>(key.log_power - k));
        out = out + make_term(base.scaled(coef), key.alpha, k, exp_part);
      }
      break;
    }
    case CaseKind::M:
    case CaseKind::TwoM: {
      long p = c.mahler_power(index);
      Scalar factor = Scalar(p).pow(static_cast<long>(key.log_power));
      out = out + make_term(base.scaled(factor), key.alpha * Scalar(p), key.log_power, exp_part);
      break;
    }
    }
  }
  return out;
}

ClosedForm delta_of(const ClosedForm &f, const OperatorCase &c) {
  if (!c.has_delta())
    fail(ErrorKind::InvalidInput, "no derivation in case " + c.name());
  const bool euler = c.kind() != CaseKind::S;
  ClosedForm out;
  for (const auto &[key, r] : f.terms()) {
    // delta(x^a) = a x^a (euler) or (a/x) x^a; delta(e^(l x)) = l x e^(l x) or l e^(l x).
    RatFunc factor = euler ? RatFunc(key.alpha) + RatFunc::x().scaled(key.rate)
                           : RatFunc(key.alpha) / RatFunc::x() + RatFunc(key.rate);
    RatFunc main = delta_of(r, c) + factor * r;
    out.add(key, main);
    if (key.log_power > 0) {
      TermKey lower = key;
      lower.log_power -= 1;
      RatFunc coef = r.scaled(Scalar(static_cast<long>(key.log_power)));
      out.add(lower, euler ? coef : coef / RatFunc::x());
    }
  }
  return out;
}

// ------------------------------------------------------------ operators

ScalarOperator make_operator(const OperatorCase &c, OpKind kind, std::vector<RatFunc> coeffs) {
  if (kind == OpKind::Delta && !c.has_delta())
    fail(ErrorKind::InvalidInput, "no derivation in case " + c.name());
  if (kind == OpKind::Sigma2 && c.sigma_count() != 2)
    fail(ErrorKind::InvalidInput, "no second sigma in case " + c.name());
  if (coeffs.size() < 2)
    fail(ErrorKind::InvalidInput, "operator order must be at least 1");
  if (coeffs.back().is_zero())
    fail(ErrorKind::InvalidInput, "operator leading coefficient must be nonzero");
  return ScalarOperator{c, kind, std::move(coeffs)};
}

ScalarOperator first_order(const OperatorCase &c, OpKind kind, const RatFunc &a) {
  return make_operator(c, kind, {-a, RatFunc(1)});
}

namespace {

template <class V, class Step> V apply_generic(const ScalarOperator &op, const V &f, Step step) {
  V acc;
  V cur = f;
  for (std::size_t i = 0; i < op.coeffs.size(); ++i) {
    if (!op.coeffs[i].is_zero())
      acc = acc + op.coeffs[i] * cur;
    if (i + 1 < op.coeffs.size())
      cur = step(cur);
  }
  return acc;
}

Series series_step(const ScalarOperator &op, const Series &s) {
  const OperatorCase &c = op.cs;
  if (op.is_delta()) {
    if (c.kind() == CaseKind::S)
      return -s.euler().shifted(s.ramification()); // d/dx = -u^2 d/du
    return s.euler();
  }
  int idx = op.sigma_index();
  switch (c.kind()) {
  case CaseKind::S:
  case CaseKind::TwoS:
    return s.substitute_shift_at_infinity(c.param(idx));
  case CaseKind::Q:
  case CaseKind::TwoQ:
    return s.substitute_scale(c.param(idx));
  default:
    return s.substitute_power(c.mahler_power(idx));
  }
}

long point_valuation(const RatFunc &f, ExpansionPoint at) {
  if (at == ExpansionPoint::Zero)
    return f.valuation();
  return f.den().degree() - f.num().degree();
}

} // namespace

RatFunc apply_operator(const ScalarOperator &op, const RatFunc &f) {
  return apply_generic(op, f, [&](const RatFunc &g) {
    return op.is_delta() ? delta_of(g, op.cs) : sigma_of(g, op.cs, op.sigma_index());
  });
}

ClosedForm apply_operator(const ScalarOperator &op, const ClosedForm &f) {
  return apply_generic(op, f, [&](const ClosedForm &g) {
    return op.is_delta() ? delta_of(g, op.cs) : sigma_of(g, op.cs, op.sigma_index());
  });
}

Series apply_operator(const ScalarOperator &op, const Series &s) {
  const ExpansionPoint at = op.cs.expansion_point();
  Series acc;
  Series cur = s;
  bool have_lowest = false;
  Rational lowest;
  for (std::size_t i = 0; i < op.coeffs.size(); ++i) {
    const RatFunc &c = op.coeffs[i];
    if (!c.is_zero()) {
      long r = cur.ramification();
      long vc = point_valuation(c, at);
      long order;
      if (cur.is_exact())
        order = vc + kDefaultOrder;
      else
        order = (cur.prec() - cur.valuation()) / r + vc + 2;
      Series ec = expand_series(c, at, order);
      Series term = ec * cur;
      Rational low = Rational(vc) + make_rational(cur.valuation(), r);
      if (!have_lowest || low < lowest)
        lowest = low;
      have_lowest = true;
      acc = acc + term;
    }
    if (i + 1 < op.coeffs.size())
      cur = series_step(op, cur);
  }
  if (!acc.is_exact() && make_rational(acc.prec(), acc.ramification()) <= lowest)
    fail(ErrorKind::InsufficientOrder, "truncation too short to produce any coefficient of the result");
  return acc;
}

ScalarOperator compose_multiplication(const ScalarOperator &op, const RatFunc &p) {
  ScalarOperator out{op.cs, op.kind, std::vector<RatFunc>(op.coeffs.size())};
  if (!op.is_delta()) {
    RatFunc sp = p;
    for (std::size_t i = 0; i < op.coeffs.size(); ++i) {
      if (i > 0)
        sp = sigma_of(sp, op.cs, op.sigma_index());
      out.coeffs[i] = op.coeffs[i] * sp;
    }
    return out;
  }
  // delta^i o p = sum_k C(i,k) delta^(i-k)(p) delta^k.
  std::vector<RatFunc> dp{p};
  for (std::size_t i = 1; i < op.coeffs.size(); ++i)
    dp.push_back(delta_of(dp.back(), op.cs));
  for (std::size_t i = 0; i < op.coeffs.size(); ++i) {
    if (op.coeffs[i].is_zero())
      continue;
    for (std::size_t k = 0; k <= i; ++k)
      out.coeffs[k] += op.coeffs[i] * dp[i - k].scaled(binomial(static_cast<long>(i), static_cast<long>(k)));
  }
  return out;
}

ScalarOperator compose(const ScalarOperator &a, const ScalarOperator &b) {
  if (a.cs != b.cs || a.kind != b.kind)
    fail(ErrorKind::InvalidInput, "composition needs operators of the same case and kind");
  ScalarOperator out{a.cs, a.kind, std::vector<RatFunc>(a.coeffs.size() + b.coeffs.size() - 1)};
  for (std::size_t j = 0; j < b.coeffs.size(); ++j) {
    if (b.coeffs[j].is_zero())
      continue;
    ScalarOperator part = compose_multiplication(a, b.coeffs[j]);
    for (std::size_t i = 0; i < part.coeffs.size(); ++i)
      out.coeffs[i + j] += part.coeffs[i];
  }
  while (out.coeffs.size() > 1 && out.coeffs.back().is_zero())
    out.coeffs.pop_back();
  return out;
}

ScalarOperator power(const ScalarOperator &op, unsigned k) {
  if (k == 0)
    fail(ErrorKind::InvalidInput, "operator power must be positive");
  ScalarOperator out = op;
  for (unsigned i = 1; i < k; ++i)
    out = compose(out, op);
  return out;
}

ScalarOperator scaled(const ScalarOperator &op, const RatFunc &left) {
  ScalarOperator out = op;
  for (auto &c : out.coeffs)
    c = left * c;
  return out;
}

ScalarOperator make_monic(const ScalarOperator &op) { return scaled(op, op.leading().inverse()); }

ScalarOperator normalized(const ScalarOperator &op) {
  Poly l(Scalar(1));
  for (const auto &c : op.coeffs) {
    Poly g = gcd(l, c.den());
    Poly q, r;
    (l * c.den()).divmod(g, q, r);
    l = q;
  }
  std::vector<Poly> nums;
  Poly g;
  for (const auto &c : op.coeffs) {
    RatFunc v = c * RatFunc(l);
    nums.push_back(v.num());
    g = gcd(g, v.num());
  }
  ScalarOperator out{op.cs, op.kind, {}};
  Scalar lead;
  for (auto &n : nums) {
    Poly q, r;
    n.divmod(g, q, r);
    n = q;
  }
  lead = nums.back().leading().inverse();
  for (auto &n : nums)
    out.coeffs.push_back(RatFunc(n.scaled(lead)));
  return out;
}

ScalarOperator homogenize(const ScalarOperator &op, const RatFunc &rhs) {
  if (rhs.is_zero())
    fail(ErrorKind::InvalidInput, "operator equation is already homogeneous");
  if (op.is_delta()) {
    ScalarOperator left{op.cs, op.kind, {-delta_of(rhs, op.cs), rhs}};
    return normalized(compose(left, op));
  }
  const int idx = op.sigma_index();
  RatFunc srhs = sigma_of(rhs, op.cs, idx);
  std::vector<RatFunc> c(op.coeffs.size() + 1);
  for (std::size_t i = 0; i < op.coeffs.size(); ++i) {
    c[i] += srhs * op.coeffs[i];
    c[i + 1] -= rhs * sigma_of(op.coeffs[i], op.cs, idx);
  }
  return normalized(ScalarOperator{op.cs, op.kind, std::move(c)});
}

ScalarOperator strip_sigma_power(const ScalarOperator &op) {
  if (op.is_delta() || !op.trailing().is_zero())
    return op;
  if (op.cs.is_mahler())
    fail(ErrorKind::Unsupported, "vanishing trailing coefficient in a Mahler case: sigma is not invertible, "
                                 "apply a sigma-power preprocessing first");
  std::size_t k = 0;
  while (op.coeffs[k].is_zero())
    ++k;
  ScalarOperator out{op.cs, op.kind, {}};
  for (std::size_t i = k; i < op.coeffs.size(); ++i) {
    RatFunc c = op.coeffs[i];
    for (std::size_t s = 0; s < k; ++s)
      c = sigma_inverse_of(c, op.cs, op.sigma_index());
    out.coeffs.push_back(c);
  }
  return out;
}

std::string to_string(const ScalarOperator &op) {
  std::string sym = op.is_delta() ? "delta" : op.kind == OpKind::Sigma2 ? "sigma2" : "sigma";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = op.coeffs.size(); i-- > 0;) {
    if (op.coeffs[i].is_zero())
      continue;
    if (!first)
      os << " + ";
    first = false;
    bool one = op.coeffs[i].is_one();
    if (!one || i == 0)
      os << "(" << op.coeffs[i].str() << ")";
    if (i > 0)
      os << (one ? "" : "*") << sym << (i > 1 ? "^" + std::to_string(i) : "");
  }
  return first ? "0" : os.str();
}

} // namespace consys
