#include "consys/builder.hpp"

#include <map>
#include <sstream>

namespace consys {

namespace {

using Elem = std::vector<RatFunc>;

void add_to(Elem &out, const Elem &v, const RatFunc &c) {
  if (c.is_zero())
    return;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v[k].is_zero())
      out[k] += c * v[k];
}

// Monic tail: op = sigma^m - sum tail[k] sigma^k, i.e. sigma^m f = sum tail[k] sigma^k f.
std::vector<RatFunc> reduction_tail(const ScalarOperator &op) {
  std::vector<RatFunc> tail;
  RatFunc lc = op.leading();
  for (long k = 0; k < op.order(); ++k)
    tail.push_back(-(op.coeffs[static_cast<std::size_t>(k)] / lc));
  return tail;
}

void check_full_rank(const RatMatrix &B, const std::string &name) {
  if (rank(B) == B.rows())
    return;
  auto ker = nullspace(B);
  fail(ErrorKind::NotInvertible, "degenerate operator pair: " + name + " is singular, kernel vector " +
                                     ker.front().transpose().str());
}

ScalarOperator prepare_sigma(const ScalarOperator &S) {
  if (!S.trailing().is_zero())
    return S;
  if (S.cs.is_mahler())
    fail(ErrorKind::InvalidInput,
         "trailing coefficient of the sigma-operator vanishes; apply sigma-power preprocessing first (Mahler sigma "
         "is not invertible)");
  return strip_sigma_power(S);
}

} // namespace

std::string ModuleBasis::label(std::size_t k) const {
  auto [i, j] = labels.at(k);
  std::ostringstream os;
  auto part = [&](const char *name, long e) {
    if (e == 0)
      return;
    os << name;
    if (e > 1)
      os << "^" << e;
    os << " ";
  };
  if (two_sigma) {
    part("sigma1", i);
    part("sigma2", j);
  } else {
    part("sigma", j);
    part("delta", i);
  }
  os << "f";
  return os.str();
}

std::pair<DDSystem, ModuleBasis> build_dd_system(const ScalarOperator &L, const ScalarOperator &S0) {
  if (!L.is_delta() || S0.kind != OpKind::Sigma1)
    fail(ErrorKind::InvalidInput, "expected a delta-operator and a sigma-operator");
  if (L.cs != S0.cs)
    fail(ErrorKind::InvalidInput, "operators belong to different cases");
  const OperatorCase &c = L.cs;
  ScalarOperator S = prepare_sigma(S0);
  const std::size_t n = static_cast<std::size_t>(L.order()), m = static_cast<std::size_t>(S.order());
  const std::size_t N = n * m;
  auto idx = [m](std::size_t i, std::size_t j) { return i * m + j; };
  const Scalar mu = c.mu();

  std::vector<RatFunc> ltail = reduction_tail(L), stail = reduction_tail(S);
  // sigma^j of the L-tail, reused by every delta step.
  std::vector<std::vector<RatFunc>> ltail_sigma(m);
  ltail_sigma[0] = ltail;
  for (std::size_t j = 1; j < m; ++j)
    for (const auto &a : ltail_sigma[j - 1])
      ltail_sigma[j].push_back(sigma_of(a, c));

  auto delta_elem = [&](const Elem &v) {
    Elem out(N);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const RatFunc &cf = v[idx(i, j)];
        if (cf.is_zero())
          continue;
        out[idx(i, j)] += delta_of(cf, c);
        RatFunc t = cf.scaled(mu.pow(static_cast<long>(j)));
        if (i + 1 < n)
          out[idx(i + 1, j)] += t;
        else
          for (std::size_t k = 0; k < n; ++k)
            out[idx(k, j)] += t * ltail_sigma[j][k];
      }
    return out;
  };

  // sigma^m delta^i f = mu^(-m i) delta^i (sigma^m f).
  std::vector<Elem> top(n);
  {
    Elem w(N);
    for (std::size_t k = 0; k < m; ++k)
      w[idx(0, k)] = stail[k];
    for (std::size_t i = 0; i < n; ++i) {
      top[i] = w;
      Scalar f = mu.pow(-static_cast<long>(m * i));
      for (auto &e : top[i])
        e = e.scaled(f);
      if (i + 1 < n)
        w = delta_elem(w);
    }
  }

  auto sigma_elem = [&](const Elem &v) {
    Elem out(N);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const RatFunc &cf = v[idx(i, j)];
        if (cf.is_zero())
          continue;
        RatFunc s = sigma_of(cf, c);
        if (j + 1 < m)
          out[idx(i, j + 1)] += s;
        else
          add_to(out, top[i], s);
      }
    return out;
  };

  RatMatrix A(N, N), B(N, N);
  ModuleBasis basis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      basis.labels.emplace_back(static_cast<long>(i), static_cast<long>(j));
      Elem e(N);
      e[idx(i, j)] = RatFunc(1);
      Elem da = delta_elem(e), sb = sigma_elem(e);
      for (std::size_t k = 0; k < N; ++k) {
        A(idx(i, j), k) = da[k];
        B(idx(i, j), k) = sb[k];
      }
    }
  check_full_rank(B, "B");
  DDSystem sys{c, A, B, 1};
  auto cons = check_consistency(sys);
  if (!cons)
    fail(ErrorKind::Inconsistent, "operator pair has no common module of dimension " + std::to_string(N) +
                                      "; consistency residual " + cons.residual.str());
  return {sys, basis};
}

std::pair<SigmaSigmaSystem, ModuleBasis> build_ss_system(const ScalarOperator &S1in, const ScalarOperator &S2in) {
  if (S1in.kind != OpKind::Sigma1 || S2in.kind != OpKind::Sigma2)
    fail(ErrorKind::InvalidInput, "expected a sigma1-operator and a sigma2-operator");
  if (S1in.cs != S2in.cs)
    fail(ErrorKind::InvalidInput, "operators belong to different cases");
  const OperatorCase &c = S1in.cs;
  ScalarOperator S1 = prepare_sigma(S1in), S2 = prepare_sigma(S2in);
  const std::size_t m1 = static_cast<std::size_t>(S1.order()), m2 = static_cast<std::size_t>(S2.order());
  const std::size_t N = m1 * m2;
  auto idx = [m2](std::size_t i, std::size_t j) { return i * m2 + j; };
  std::vector<RatFunc> t1 = reduction_tail(S1), t2 = reduction_tail(S2);
  // sigma2^j(t1[k]) and sigma1^i(t2[k]).
  std::vector<std::vector<RatFunc>> t1s(m2), t2s(m1);
  t1s[0] = t1;
  for (std::size_t j = 1; j < m2; ++j)
    for (const auto &a : t1s[j - 1])
      t1s[j].push_back(sigma_of(a, c, 2));
  t2s[0] = t2;
  for (std::size_t i = 1; i < m1; ++i)
    for (const auto &a : t2s[i - 1])
      t2s[i].push_back(sigma_of(a, c, 1));

  RatMatrix B1(N, N), B2(N, N);
  ModuleBasis basis;
  basis.two_sigma = true;
  for (std::size_t i = 0; i < m1; ++i)
    for (std::size_t j = 0; j < m2; ++j) {
      basis.labels.emplace_back(static_cast<long>(i), static_cast<long>(j));
      const std::size_t r = idx(i, j);
      if (i + 1 < m1)
        B1(r, idx(i + 1, j)) = RatFunc(1);
      else
        for (std::size_t k = 0; k < m1; ++k)
          B1(r, idx(k, j)) += t1s[j][k];
      if (j + 1 < m2)
        B2(r, idx(i, j + 1)) = RatFunc(1);
      else
        for (std::size_t k = 0; k < m2; ++k)
          B2(r, idx(i, k)) += t2s[i][k];
    }
  check_full_rank(B1, "B1");
  check_full_rank(B2, "B2");
  SigmaSigmaSystem sys{c, B1, B2, 1};
  auto cons = check_consistency(sys);
  if (!cons)
    fail(ErrorKind::Inconsistent, "operator pair has no common module of dimension " + std::to_string(N) +
                                      "; consistency residual " + cons.residual.str());
  return {sys, basis};
}

// ------------------------------------------------------------ annihilators

namespace {

ScalarOperator linear_factor(const OperatorCase &c, OpKind kind, const Scalar &root, long mult) {
  ScalarOperator f = first_order(c, kind, RatFunc(root));
  return power(f, static_cast<unsigned>(mult));
}

ScalarOperator product(const std::vector<ScalarOperator> &fs, const OperatorCase &c, OpKind kind) {
  if (fs.empty())
    return make_operator(c, kind, {RatFunc(0), RatFunc(1)});
  ScalarOperator out = fs.front();
  for (std::size_t k = 1; k < fs.size(); ++k)
    out = compose(out, fs[k]);
  return out;
}

Poly lcm_of_denominators(const ClosedForm &cf) {
  Poly l(Scalar(1));
  for (const auto &[key, r] : cf.terms()) {
    const Poly &d = r.den();
    if (d.degree() <= 0)
      continue;
    Poly q, rem;
    (l * d).divmod(gcd(l, d), q, rem);
    l = q.monic();
  }
  return l;
}

// Exponents beta = alpha + k with multiplicity log_power + 1, from p * cf
// written over polynomial coefficients.
std::map<Scalar, long> power_exponents(const ClosedForm &pcf) {
  std::map<Scalar, long> out;
  for (const auto &[key, r] : pcf.terms()) {
    if (!key.rate.is_zero())
      fail(ErrorKind::Unsupported, "exponential terms need a shift case");
    const auto &co = r.num().coeffs();
    for (std::size_t k = 0; k < co.size(); ++k) {
      if (co[k].is_zero())
        continue;
      Scalar beta = key.alpha + Scalar(static_cast<long>(k));
      long &m = out[beta];
      m = std::max(m, static_cast<long>(key.log_power) + 1);
    }
  }
  return out;
}

struct ExpGroup {
  Scalar rate, mult1, mult2;
  long mult = 0;
};

std::vector<ExpGroup> exponential_groups(const ClosedForm &pcf) {
  std::map<Scalar, ExpGroup> g;
  for (const auto &[key, r] : pcf.terms()) {
    if (!key.alpha.is_zero() || key.log_power != 0)
      fail(ErrorKind::Unsupported, "x^alpha log(x)^j terms are not closed under shifts");
    auto &e = g[key.rate];
    e.rate = key.rate;
    e.mult1 = key.mult1;
    e.mult2 = key.mult2;
    e.mult = std::max(e.mult, r.num().degree() + 1);
  }
  std::vector<ExpGroup> out;
  for (auto &[k, e] : g)
    out.push_back(e);
  return out;
}

Scalar dilation_eigenvalue(const Scalar &q, const Scalar &beta) {
  if (beta.is_integer())
    return q.pow(beta.rational().get_num().get_si());
  if (q.is_rational() && beta.is_rational())
    if (auto p = rational_power(q.rational(), beta.rational()))
      return Scalar(*p);
  fail(ErrorKind::Unsupported, "q^" + beta.str() + " is not in the constants field for q = " + q.str());
}

// First dependency sigma^K f = sum c_k sigma^k f over the rational functions.
ScalarOperator sigma_dependency(const ClosedForm &cf, const OperatorCase &c, OpKind kind, long max_order = 32) {
  const int index = kind == OpKind::Sigma2 ? 2 : 1;
  std::vector<ClosedForm> iter{cf};
  for (long K = 1; K <= max_order; ++K) {
    iter.push_back(sigma_of(iter.back(), c, index));
    std::map<TermKey, std::size_t> rows;
    for (const auto &f : iter)
      for (const auto &[key, r] : f.terms())
        rows.emplace(key, rows.size());
    RatMatrix M(rows.size(), static_cast<std::size_t>(K)), rhs(rows.size(), 1);
    for (long k = 0; k <= K; ++k)
      for (const auto &[key, r] : iter[static_cast<std::size_t>(k)].terms()) {
        if (k < K)
          M(rows[key], static_cast<std::size_t>(k)) = r;
        else
          rhs(rows[key], 0) = r;
      }
    if (auto sol = solve_linear(M, rhs)) {
      std::vector<RatFunc> coeffs;
      for (long k = 0; k < K; ++k)
        coeffs.push_back(-(*sol)(static_cast<std::size_t>(k), 0));
      coeffs.push_back(RatFunc(1));
      return make_operator(c, kind, coeffs);
    }
  }
  fail(ErrorKind::Unsupported, "no sigma-relation of order <= " + std::to_string(max_order) + " found");
}

// Single term c x^beta log^j in case M: sigma^m f = q^(j(m-n)) x^r sigma^n f
// for the first positive m > n with (q^m - q^n) beta integral.
ScalarOperator mahler_monomial_relation(const OperatorCase &c, OpKind kind, const Scalar &beta, long j) {
  if (!beta.is_rational())
    fail(ErrorKind::Unsupported, "case-M exponents must be rational, got " + beta.str());
  const long q = c.mahler_power(kind == OpKind::Sigma2 ? 2 : 1);
  const Rational b = beta.rational();
  for (long m = 2; m <= 64; ++m)
    for (long n = 1; n < m; ++n) {
      Integer qm, qn;
      mpz_ui_pow_ui(qm.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(m));
      mpz_ui_pow_ui(qn.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(n));
      Rational r = Rational(qm - qn) * b;
      r.canonicalize();
      if (r.get_den() != 1)
        continue;
      std::vector<RatFunc> coeffs(static_cast<std::size_t>(m + 1));
      coeffs[static_cast<std::size_t>(m)] = RatFunc(1);
      RatFunc xr = RatFunc::x().pow(r.get_num().get_si());
      coeffs[static_cast<std::size_t>(n)] = -(xr.scaled(Scalar(q).pow(j * (m - n))));
      return make_operator(c, kind, coeffs);
    }
  fail(ErrorKind::Unsupported, "exponent denominator too large for a Mahler relation: " + beta.str());
}

ScalarOperator sigma_annihilator(const ClosedForm &cf, const ClosedForm &pcf, const Poly &p, const OperatorCase &c,
                                 OpKind kind) {
  const int index = kind == OpKind::Sigma2 ? 2 : 1;
  std::vector<ScalarOperator> fs;
  switch (c.kind()) {
  case CaseKind::S:
  case CaseKind::TwoS:
    for (const auto &g : exponential_groups(pcf))
      fs.push_back(linear_factor(c, kind, g.rate.is_zero() ? Scalar(1) : (index == 2 ? g.mult2 : g.mult1), g.mult));
    break;
  case CaseKind::Q:
  case CaseKind::TwoQ:
    for (const auto &[beta, mult] : power_exponents(pcf))
      fs.push_back(linear_factor(c, kind, dilation_eigenvalue(c.param(index), beta), mult));
    break;
  case CaseKind::M:
  case CaseKind::TwoM: {
    auto ex = power_exponents(pcf);
    if (ex.size() == 1 && pcf.terms().size() == 1) {
      const auto &[beta, mult] = *ex.begin();
      return compose_multiplication(mahler_monomial_relation(c, kind, beta, mult - 1), RatFunc(p));
    }
    for (const auto &[beta, mult] : ex)
      if (!beta.is_rational())
        fail(ErrorKind::Unsupported, "case-M exponents must be rational, got " + beta.str());
    return sigma_dependency(cf, c, kind);
  }
  }
  return compose_multiplication(product(fs, c, kind), RatFunc(p));
}

} // namespace

std::pair<ScalarOperator, ScalarOperator> annihilators_of_closed_form(const ClosedForm &cf, const OperatorCase &c) {
  if (cf.is_zero())
    fail(ErrorKind::InvalidInput, "the zero function has no minimal annihilator");
  Poly p = lcm_of_denominators(cf);
  ClosedForm pcf = RatFunc(p) * cf;
  ScalarOperator first = [&] {
    if (!c.has_delta())
      return sigma_annihilator(cf, pcf, p, c, OpKind::Sigma1);
    std::vector<ScalarOperator> fs;
    if (c.kind() == CaseKind::S)
      for (const auto &g : exponential_groups(pcf))
        fs.push_back(linear_factor(c, OpKind::Delta, g.rate, g.mult));
    else
      for (const auto &[beta, mult] : power_exponents(pcf))
        fs.push_back(linear_factor(c, OpKind::Delta, beta, mult));
    return compose_multiplication(product(fs, c, OpKind::Delta), RatFunc(p));
  }();
  ScalarOperator second = sigma_annihilator(cf, pcf, p, c, c.has_delta() ? OpKind::Sigma1 : OpKind::Sigma2);
  for (const auto *op : {&first, &second})
    if (!apply_operator(*op, cf).is_zero())
      fail(ErrorKind::Internal, "constructed annihilator " + to_string(*op) + " does not annihilate " + cf.str());
  return {first, second};
}

std::pair<ScalarOperator, ScalarOperator> first_order_annihilators(const RatFunc &f, const OperatorCase &c) {
  if (f.is_zero())
    fail(ErrorKind::InvalidInput, "the zero function has no first-order annihilator");
  RatFunc inv = f.inverse();
  if (c.has_delta())
    return {first_order(c, OpKind::Delta, delta_of(f, c) * inv), first_order(c, OpKind::Sigma1, sigma_of(f, c) * inv)};
  return {first_order(c, OpKind::Sigma1, sigma_of(f, c, 1) * inv),
          first_order(c, OpKind::Sigma2, sigma_of(f, c, 2) * inv)};
}

} // namespace consys
