#include "consys/mahler.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace consys {

namespace {

RatFunc t_pow(long k) { return RatFunc::x().pow(k); }

void require_two_m(const SigmaSigmaSystem &s, const char *what) {
  if (s.cs.kind() != CaseKind::TwoM)
    fail(ErrorKind::InvalidInput, std::string(what) + " needs a 2M system");
}

void require_consistent(const SigmaSigmaSystem &s, const char *what) {
  if (!check_consistency(s).consistent)
    fail(ErrorKind::Inconsistent, std::string(what) + ": the pair violates sigma1(B2) B1 = sigma2(B1) B2");
}

// f = c t^v u(t) with u(0) = 1.
Scalar leading_coefficient(const RatFunc &f) {
  return f.num().coeff(f.num().valuation()) / f.den().coeff(f.den().valuation());
}

ScalarMatrix value_at_zero(const RatMatrix &A) {
  ScalarMatrix m(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const RatFunc &f = A(i, j);
      if (f.is_zero())
        continue;
      if (f.valuation() < 0)
        fail(ErrorKind::InvalidInput, "matrix has a pole at 0: split the polar part first");
      if (f.valuation() == 0)
        m(i, j) = leading_coefficient(f);
    }
  return m;
}

SeriesMatrix to_series(const ScalarMatrix &m) {
  return m.map([](const Scalar &s) { return Series(s); });
}

SeriesMatrix substitute_power(const SeriesMatrix &m, long p) {
  return m.map([p](const Series &s) { return s.substitute_power(p); });
}

SeriesMatrix truncated(const SeriesMatrix &m, long prec) {
  return m.map([prec](const Series &s) { return s.truncated(prec); });
}

RatMatrix inflated(const RatMatrix &m, long p) {
  return m.map([p](const RatFunc &f) { return f.inflate(static_cast<std::size_t>(p)); });
}

bool constant_pair(const SigmaSigmaSystem &s) { return is_constant(s.B1) && is_constant(s.B2); }

bool constant_diagonal(const RatMatrix &m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!m(i, i).is_constant())
      return false;
  return true;
}

SSCertificate identity_certificate(const SigmaSigmaSystem &s) {
  return gauge(s, RatMatrix::identity(s.dim())).second;
}

SigmaSigmaSystem subsystem(const SigmaSigmaSystem &s, std::size_t start, std::size_t size) {
  return make_ss_system(s.cs, s.B1.block(start, start, size, size), s.B2.block(start, start, size, size),
                        s.ramification);
}

RatMatrix block_diagonal(const RatMatrix &a, const RatMatrix &b) {
  RatMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

// first then second, lifting first to the ramification second starts from.
SSCertificate chain(const SSCertificate &first, const SSCertificate &second) {
  long r1 = first.target.ramification, r2 = second.source.ramification;
  if (r2 % r1 != 0)
    fail(ErrorKind::Internal, "certificate chain with incompatible ramifications");
  return compose(ramified(first, r2 / r1), second);
}

// Fixed point reconstructed by Padé and checked exactly; records the order used.
std::optional<RatMatrix> exact_fixed_point(const RatMatrix &A, long p, long order, long max_order, long &used) {
  const ScalarMatrix A0 = value_at_zero(A);
  const RatMatrix A0r = to_ratmatrix(A0);
  for (long N = std::max(order, 4L);; N = std::min(2 * N, max_order)) {
    used = std::max(used, N);
    SeriesMatrix G = fixed_point_gauge(A, p, N);
    RatMatrix Gr(G.rows(), G.cols());
    bool ok = true;
    for (std::size_t i = 0; i < G.rows() && ok; ++i)
      for (std::size_t j = 0; j < G.cols() && ok; ++j) {
        auto f = pade_reconstruct(G(i, j));
        if (f)
          Gr(i, j) = *f;
        else
          ok = false;
      }
    if (ok && inflated(Gr, p) * A0r == A * Gr)
      return Gr;
    if (N >= max_order)
      return std::nullopt;
  }
}

// ------------------------------------------------------------ reduction

struct Reducer {
  long p;
  long order, max_order;
  long used = 0;

  RatMatrix fixed_point_or_cap(const RatMatrix &A) {
    auto G = exact_fixed_point(A, p, order, max_order, used);
    if (!G)
      fail(ErrorKind::ResourceCap,
           "truncation insufficient: no verified rational gauge up to order " + std::to_string(max_order));
    return *G;
  }

  // n = 1: Z = t^(-v/(p-1)) h Y with h(t) = b(t) h(t^p).
  SSCertificate scalar(const SigmaSigmaSystem &s) {
    const RatFunc &a = s.B1(0, 0);
    long v = a.valuation();
    if (v % (p - 1) != 0)
      fail(ErrorKind::Internal, "monomial exponent not integral after ramification");
    RatFunc b = a / (RatFunc(leading_coefficient(a)) * t_pow(v));
    RatFunc h(1);
    if (!b.is_one())
      h = fixed_point_or_cap(RatMatrix{{b.inverse()}})(0, 0);
    auto cert = gauge(s, RatMatrix{{t_pow(-v / (p - 1)) * h}}).second;
    if (!constant_pair(cert.target))
      fail(ErrorKind::Internal, "scalar reduction left a non-constant coefficient");
    return cert;
  }

  SSCertificate run(const SigmaSigmaSystem &s) {
    if (constant_pair(s))
      return identity_certificate(s);
    const std::size_t n = s.dim();
    if (n == 1)
      return scalar(s);
    if (!s.B1.is_lower_triangular())
      fail(ErrorKind::Unsupported, "triangular preprocessing unavailable: sigma1 matrix is not lower triangular");

    std::size_t k = 0;
    for (std::size_t c = 1; c < n && !k; ++c)
      if (s.B2.block(0, c, c, n - c).is_zero())
        k = c;
    SSCertificate pre = identity_certificate(s);
    SigmaSigmaSystem cur = s;
    if (!k) {
      if (!constant_diagonal(s.B1))
        fail(ErrorKind::Unsupported,
             "triangular preprocessing unavailable: no common block shape and a non-constant diagonal");
      BlockResult bt = block_triangularize(s);
      if (bt.shape.scalar) {
        if (!constant_pair(bt.system))
          fail(ErrorKind::Internal, "scalar sigma1 matrix with a non-constant sigma2 matrix");
        return bt.cert;
      }
      pre = bt.cert;
      cur = bt.system;
      k = bt.shape.split;
    }

    SSCertificate c1 = run(subsystem(cur, 0, k));
    SSCertificate c2 = run(subsystem(cur, k, n - k));
    long R = std::lcm(std::lcm(c1.source.ramification, c2.source.ramification), cur.ramification);
    c1 = ramified(c1, R / c1.source.ramification);
    c2 = ramified(c2, R / c2.source.ramification);
    SigmaSigmaSystem lifted = ramified(cur, R / cur.ramification);
    auto step1 = gauge(lifted, block_diagonal(c1.G, c2.G));
    auto [regular, step2] = polar_split_remove(step1.first, k);
    SSCertificate cert = chain(chain(pre, step1.second), step2);
    if (constant_pair(regular))
      return cert;
    RatMatrix F = fixed_point_or_cap(regular.B1);
    auto step3 = gauge(regular, inverse(F));
    if (!constant_pair(step3.first))
      fail(ErrorKind::Internal, "fixed-point gauge left a non-constant sigma2 matrix");
    return compose(cert, step3.second);
  }
};

// Ramification making every diagonal exponent of B1 divisible by p - 1.
long diagonal_ramification(const RatMatrix &B1, long p) {
  long R = 1;
  for (std::size_t i = 0; i < B1.rows(); ++i) {
    long v = B1(i, i).valuation();
    long g = std::gcd(std::abs(v), p - 1);
    R = std::lcm(R, (p - 1) / g);
  }
  return R;
}

// f(t) = h(t^q) -> h, when possible.
std::optional<RatFunc> deflated(const RatFunc &f, long q) {
  auto k = static_cast<std::size_t>(q);
  if (!f.num().deflatable(k) || !f.den().deflatable(k))
    return std::nullopt;
  return RatFunc(f.num().deflate(k), f.den().deflate(k));
}

RatMatrix swap_matrix(std::size_t n, std::size_t a, std::size_t b) {
  RatMatrix P = RatMatrix::identity(n);
  P(a, a) = RatFunc();
  P(b, b) = RatFunc();
  P(a, b) = RatFunc(1);
  P(b, a) = RatFunc(1);
  return P;
}

} // namespace

SSCertificate ramified(const SSCertificate &cert, long k) {
  if (k == 1)
    return cert;
  return {ramified(cert.G, k), ramified(cert.source, k), ramified(cert.target, k)};
}

DDCertificate ramified(const DDCertificate &cert, long k) {
  if (k == 1)
    return cert;
  return {ramified(cert.G, k), ramified(cert.source, k), ramified(cert.target, k)};
}

SeriesMatrix fixed_point_gauge(const RatMatrix &A, long p, long order) {
  if (!A.is_square())
    fail(ErrorKind::InvalidInput, "fixed_point_gauge needs a square matrix");
  if (p < 2)
    fail(ErrorKind::InvalidInput, "Mahler power must be at least 2");
  const std::size_t n = A.rows();
  const ScalarMatrix A0 = value_at_zero(A);
  if (rank(A0) < n)
    fail(ErrorKind::NotInvertible, "A(0) is singular");
  const SeriesMatrix Ainv = expand_matrix(inverse(A), ExpansionPoint::Zero, order);
  const SeriesMatrix A0s = to_series(A0);
  SeriesMatrix G = to_series(ScalarMatrix::identity(n));
  // G <- A^-1 G(x^p) A(0): every pass fixes the coefficients below p times
  // the previous precision.
  for (int pass = 0; pass < 128; ++pass) {
    SeriesMatrix next = truncated(Ainv * substitute_power(G, p) * A0s, order + 1);
    if (next == G)
      return G;
    G = std::move(next);
  }
  fail(ErrorKind::Internal, "fixed-point iteration did not stabilise");
}

std::optional<RatMatrix> exact_fixed_point_gauge(const RatMatrix &A, long p, long order, long max_order) {
  long used = 0;
  return exact_fixed_point(A, p, order, max_order, used);
}

SeriesMatrix mahler_series_solve(const RatMatrix &A, long p, const SeriesMatrix &seed, long order, const RatMatrix &r) {
  const std::size_t n = A.rows();
  if (!A.is_square() || seed.rows() != n || seed.cols() != 1)
    fail(ErrorKind::InvalidInput, "mahler_series_solve needs a square matrix and a matching seed column");
  if (r.rows() != 0 && (r.rows() != n || r.cols() != 1))
    fail(ErrorKind::InvalidInput, "right-hand side must be a column of the system size");
  if (p < 2)
    fail(ErrorKind::InvalidInput, "Mahler power must be at least 2");
  const RatMatrix Ainv = inverse(A);

  long R = 1, M = Series::kExact, vmin = 0;
  for (std::size_t i = 0; i < n; ++i)
    R = std::lcm(R, seed(i, 0).ramification());
  SeriesMatrix y(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    y(i, 0) = seed(i, 0).ramified(R / seed(i, 0).ramification());
    M = std::min(M, y(i, 0).prec());
    if (!y(i, 0).is_zero())
      vmin = std::min(vmin, y(i, 0).valuation());
  }
  long s = Series::kExact;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!Ainv(i, j).is_zero())
        s = std::min(s, Ainv(i, j).valuation());
  const long T = order * R + 1;
  if (M < Series::kExact && !(p * M + s * R > M))
    fail(ErrorKind::InsufficientOrder, "valuation condition p*M + s > M fails (M = " + std::to_string(M) +
                                           ", s = " + std::to_string(s) + "): increase seed truncation M");

  // A^-1 must be known far enough to multiply a Laurent seed.
  long extra = std::max(0L, -p * vmin / R + 1) + std::max(0L, -s);
  SeriesMatrix Ainv_s = expand_matrix(Ainv, ExpansionPoint::Zero, order + extra + 2);
  SeriesMatrix rs(n, 1);
  if (r.rows() != 0)
    rs = expand_matrix(r, ExpansionPoint::Zero, order + 2);

  for (int pass = 0; pass < 256; ++pass) {
    SeriesMatrix next = truncated(Ainv_s * substitute_power(y, p) - rs, T);
    long prec = Series::kExact, old = Series::kExact;
    for (std::size_t i = 0; i < n; ++i) {
      if (!next(i, 0).agrees_with(y(i, 0)))
        fail(ErrorKind::Inconsistent, "seed contradicts the equation in component " + std::to_string(i));
      prec = std::min(prec, next(i, 0).prec());
      old = std::min(old, y(i, 0).prec());
    }
    if (prec >= T)
      return truncated(next, T);
    if (prec <= old && old < Series::kExact)
      fail(ErrorKind::Internal, "series iteration made no progress");
    y = std::move(next);
  }
  fail(ErrorKind::Internal, "series iteration did not reach the requested order");
}

BlockResult block_triangularize(const SigmaSigmaSystem &sys) {
  require_two_m(sys, "block_triangularize");
  if (!sys.B1.is_lower_triangular() || !constant_diagonal(sys.B1))
    fail(ErrorKind::InvalidInput, "block_triangularize needs a lower triangular sigma1 matrix with constant diagonal");
  require_consistent(sys, "block_triangularize");
  const std::size_t n = sys.dim();
  const long q = sys.cs.mahler_power(2);

  SigmaSigmaSystem cur = sys;
  SSCertificate cert = identity_certificate(sys);
  for (std::size_t step = 0; step <= n; ++step) {
    Scalar d = cur.B1(n - 1, n - 1).constant_value();
    RatMatrix A = cur.B1.scaled(RatFunc(d.inverse()));
    // Largest lower-right identity block of A / a_nn.
    std::size_t m = 1;
    while (m < n && A.block(n - m - 1, n - m - 1, m + 1, m + 1) == RatMatrix::identity(m + 1))
      ++m;
    if (m == n)
      return {cur, cert, BlockShape{true, d, 0}};
    const std::size_t top = n - m;
    std::optional<std::size_t> col, row;
    for (std::size_t l = top; l < n && !col; ++l)
      for (std::size_t r = 0; r < top; ++r)
        if (!cur.B2(r, l).is_zero()) {
          col = l;
          row = r;
          break;
        }
    if (!col)
      return {cur, cert, BlockShape{false, Scalar(), top}};

    const std::size_t l = *col, r = *row;
    const RatFunc &brl = cur.B2(r, l);
    if (!brl.is_constant() || !A(r, r).is_one())
      fail(ErrorKind::Internal, "block triangularization: pivot entry is not the expected constant");
    // Column r of S is B_l(x^(1/q)) / b_rl; ramify once when a q-th root is missing.
    std::vector<RatFunc> column(n);
    for (std::size_t i = 0; i < n && !column.empty(); ++i) {
      auto f = deflated(cur.B2(i, l), q);
      if (!f)
        column.clear();
      else
        column[i] = *f;
    }
    if (column.empty()) {
      cert = ramified(cert, q);
      cur = ramified(cur, q);
      column.assign(n, RatFunc());
      for (std::size_t i = 0; i < n; ++i)
        column[i] = *deflated(cur.B2(i, l), q);
    }
    RatMatrix S = RatMatrix::identity(n);
    RatFunc inv = cur.B2(r, l).inverse();
    for (std::size_t i = 0; i < n; ++i)
      S(i, r) = column[i] * inv;
    auto g = gauge(cur, inverse(S));
    cert = compose(cert, g.second);
    cur = g.first;
    for (std::size_t j = r; j + 1 < top; ++j) {
      auto sw = gauge(cur, swap_matrix(n, j, j + 1));
      cert = compose(cert, sw.second);
      cur = sw.first;
    }
    if (!cur.B1.is_lower_triangular())
      fail(ErrorKind::Internal, "block triangularization lost the triangular shape");
  }
  fail(ErrorKind::Internal, "block triangularization did not terminate");
}

std::pair<SigmaSigmaSystem, SSCertificate> polar_split_remove(const SigmaSigmaSystem &sys, std::size_t split) {
  require_two_m(sys, "polar_split_remove");
  const std::size_t n = sys.dim(), k = split;
  if (k == 0 || k >= n)
    fail(ErrorKind::InvalidInput, "block split must lie strictly inside the matrix");
  for (int idx = 1; idx <= 2; ++idx) {
    const RatMatrix &B = sys.B(idx);
    if (!B.block(0, k, k, n - k).is_zero())
      fail(ErrorKind::InvalidInput, "matrices are not lower block triangular for this split");
    if (!is_constant(B.block(0, 0, k, k)) || !is_constant(B.block(k, k, n - k, n - k)))
      fail(ErrorKind::InvalidInput, "polar removal needs constant diagonal blocks");
  }
  require_consistent(sys, "polar_split_remove");
  const long p = sys.cs.mahler_power(1);
  const ScalarMatrix A11 = constant_part(sys.B1.block(0, 0, k, k));
  const ScalarMatrix A22inv = inverse(constant_part(sys.B1.block(k, k, n - k, n - k)));
  const RatMatrix A21 = sys.B1.block(k, 0, n - k, k);

  long D = 0;
  for (std::size_t i = 0; i < A21.rows(); ++i)
    for (std::size_t j = 0; j < A21.cols(); ++j)
      if (!A21(i, j).is_zero())
        D = std::max(D, -A21(i, j).valuation());
  if (D == 0)
    return {sys, identity_certificate(sys)};

  std::vector<Series> expansions;
  for (std::size_t i = 0; i < A21.rows(); ++i)
    for (std::size_t j = 0; j < A21.cols(); ++j)
      expansions.push_back(expand_series(A21(i, j), ExpansionPoint::Zero, -1));
  // With xi = 1/t the lower-left block X(xi) of the gauge solves
  //   A22 X(xi) - X(xi^p) A11 = polar part of A21 (in xi),
  // one coefficient at a time.
  std::vector<ScalarMatrix> X(static_cast<std::size_t>(D) + 1, ScalarMatrix(n - k, k));
  for (long e = 1; e <= D; ++e) {
    ScalarMatrix P(n - k, k);
    for (std::size_t i = 0; i < n - k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        P(i, j) = expansions[i * k + j].coeff(-e);
    if (e % p == 0)
      P += X[static_cast<std::size_t>(e / p)] * A11;
    X[static_cast<std::size_t>(e)] = A22inv * P;
  }
  for (long e = D / p + 1; e <= D; ++e)
    if (!X[static_cast<std::size_t>(e)].is_zero())
      fail(ErrorKind::Internal, "polar part does not admit a polynomial gauge (consistent input expected)");

  RatMatrix G = RatMatrix::identity(n);
  for (long e = 1; e <= D / p; ++e)
    for (std::size_t i = 0; i < n - k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        G(k + i, j) += RatFunc(X[static_cast<std::size_t>(e)](i, j)) * t_pow(-e);
  auto out = gauge(sys, G);
  for (int idx = 1; idx <= 2; ++idx) {
    RatMatrix L = out.first.B(idx).block(k, 0, n - k, k);
    for (std::size_t i = 0; i < L.rows(); ++i)
      for (std::size_t j = 0; j < L.cols(); ++j)
        if (!L(i, j).is_zero() && L(i, j).valuation() < 0)
          fail(ErrorKind::Internal, "polar part survived the removal gauge");
  }
  return out;
}

ConstantReduction reduce_2m_constants(const SigmaSigmaSystem &sys, long order, long max_order) {
  require_two_m(sys, "reduce_2m_constants");
  require_consistent(sys, "reduce_2m_constants");
  if (sys.dim() > 1 && !sys.B1.is_lower_triangular())
    fail(ErrorKind::Unsupported, "triangular preprocessing unavailable: sigma1 matrix is not lower triangular");
  Reducer red{sys.cs.mahler_power(1), order, max_order};
  long R = diagonal_ramification(sys.B1, red.p);
  SSCertificate cert = red.run(R > 1 ? ramified(sys, R) : sys);
  ScalarMatrix B1 = constant_part(cert.target.B1), B2 = constant_part(cert.target.B2);
  if (B1 * B2 != B2 * B1 || !verify(cert))
    fail(ErrorKind::Internal, "reduction produced an unverifiable certificate");
  return {B1, B2, cert, red.used};
}

RegularSingularResult regular_singular_reduce(const SigmaSigmaSystem &sys, long order) {
  require_two_m(sys, "regular_singular_reduce");
  const long p = sys.cs.mahler_power(1);
  if (sys.dim() == 1) {
    const RatFunc &a = sys.B1(0, 0);
    long v = a.valuation();
    Scalar c = leading_coefficient(a);
    RatFunc b = a / (RatFunc(c) * t_pow(v));
    long extra = v > 0 ? (v + p - 2) / (p - 1) : 0;
    Series h = fixed_point_gauge(RatMatrix{{b.inverse()}}, p, order + extra)(0, 0);
    Rational e = make_rational(-v, p - 1);
    Series mono = Series::monomial(Scalar(1), e.get_num().get_si(), e.get_den().get_si());
    SeriesMatrix G(1, 1);
    G(0, 0) = mono * h;
    ScalarMatrix A0(1, 1);
    A0(0, 0) = c;
    return {A0, G, sys.ramification};
  }
  ConstantReduction red = reduce_2m_constants(sys, std::min(order, kMaxOrder));
  return {red.B1, expand_matrix(red.cert.G, ExpansionPoint::Zero, order), red.cert.source.ramification};
}

std::pair<DDSystem, DDCertificate> nilpotent_normalize(const DDSystem &sys) {
  if (sys.cs.kind() != CaseKind::M)
    fail(ErrorKind::InvalidInput, "nilpotent_normalize is for case M");
  if (!is_constant(sys.A))
    fail(ErrorKind::InvalidInput, "nilpotent_normalize needs a constant delta matrix");
  if (!check_consistency(sys).consistent)
    fail(ErrorKind::Inconsistent, "nilpotent_normalize: the pair violates the consistency condition");
  const std::size_t n = sys.dim();
  const ScalarMatrix A = constant_part(sys.A);
  auto ev = eigenvalues(A);

  // Generalized eigenspaces as columns of T; Z = T^-1 Y block-diagonalises A.
  ScalarMatrix T(n, n);
  std::vector<Rational> exponent(n);
  std::size_t col = 0;
  for (const auto &[lambda, mult] : ev) {
    if (!lambda.is_rational())
      fail(ErrorKind::Unsupported, "spectrum does not split over Q: eigenvalue " + lambda.str());
    ScalarMatrix N = A - ScalarMatrix::identity(n).scaled(lambda), P = ScalarMatrix::identity(n);
    for (std::size_t k = 0; k < mult; ++k)
      P = P * N;
    for (const auto &v : nullspace(P)) {
      if (col == n)
        fail(ErrorKind::Internal, "generalized eigenspaces overflow the dimension");
      T.set_block(0, col, v);
      exponent[col++] = lambda.rational();
    }
  }
  if (col != n)
    fail(ErrorKind::Unsupported, "spectrum does not split over Q");
  auto [blocked, c1] = gauge(sys, to_ratmatrix(inverse(T)));

  // t^(-lambda r) needs lambda r integral.
  long k = 1;
  for (const auto &e : exponent) {
    Rational er = e * sys.ramification;
    k = std::lcm(k, er.get_den().get_si());
  }
  DDCertificate cert = ramified(c1, k);
  DDSystem cur = ramified(blocked, k);
  std::vector<RatFunc> diag;
  for (const auto &e : exponent) {
    Rational er = e * cur.ramification;
    diag.push_back(t_pow(-er.get_num().get_si()));
  }
  auto [out, c2] = gauge(cur, RatMatrix::diagonal(diag));
  if (!is_constant(out.A) || !is_constant(out.B))
    fail(ErrorKind::Inconsistent, "monomial gauge did not produce constant matrices");
  ScalarMatrix An = constant_part(out.A), Bn = constant_part(out.B);
  if (An.scaled(sys.cs.mu()) * Bn != Bn * An)
    fail(ErrorKind::Internal, "normalized pair violates q A B = B A");
  return {out, compose(cert, c2)};
}

} // namespace consys
