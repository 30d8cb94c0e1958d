#include "consys/rational.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <string>

namespace consys {

namespace {

long point_valuation(const RatFunc &f, ExpansionPoint at) {
  if (at == ExpansionPoint::Zero)
    return f.valuation();
  return f.den().degree() - f.num().degree();
}

// Generalised binomial coefficient C(a, m) for rational a.
Scalar binomial(const Scalar &a, long m) {
  Scalar out(1);
  for (long i = 0; i < m; ++i)
    out = out * (a - Scalar(i)) / Scalar(i + 1);
  return out;
}

long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// Action of the operator's basic map on monomials t^j (t = x^(1/r), or
// u = 1/x at infinity):  op^i(t^j) = sum_m kappa(i, j, m) t^(psi(i, j) + m).
class MonomialAction {
public:
  MonomialAction(const ScalarOperator &op, long r) : op_(op), r_(r) {
    const auto k = op.cs.kind();
    infinity_ = op.cs.expansion_point() == ExpansionPoint::Infinity;
    mahler_ = (k == CaseKind::M || k == CaseKind::TwoM) && !op.is_delta();
    if (infinity_ && r != 1)
      fail(ErrorKind::Unsupported, "series at infinity must have integral exponents");
    if (!op.is_delta() && (k == CaseKind::Q || k == CaseKind::TwoQ) && r != 1)
      fail(ErrorKind::Unsupported, "q-dilation of fractional exponents needs q^(1/r)");
    if (mahler_)
      power_ = op.cs.mahler_power(op.sigma_index());
  }

  // Only m = 0 contributes.
  bool single(long i) const { return !infinity_ || op_.is_delta() || i == 0; }

  long psi(long i, long j) const {
    if (mahler_) {
      long out = j;
      for (long s = 0; s < i; ++s)
        out *= power_;
      return out;
    }
    if (infinity_ && op_.is_delta())
      return j + i;
    return j;
  }

  Scalar kappa(long i, long j, long m) const {
    if (infinity_) {
      if (op_.is_delta()) {
        // (d/dx)^i u^j = (-1)^i j (j+1) ... (j+i-1) u^(j+i)
        Scalar out(i % 2 ? -1 : 1);
        for (long s = 0; s < i; ++s)
          out *= Scalar(j + s);
        return m == 0 ? out : Scalar();
      }
      // x -> x + i*a sends u^j to u^j (1 + i a u)^(-j).
      Scalar shift = op_.cs.param(op_.sigma_index()) * Scalar(i);
      return binomial(Scalar(-j), m) * shift.pow(m);
    }
    if (m != 0)
      return Scalar();
    if (op_.is_delta())
      return Scalar(make_rational(j, r_)).pow(i);
    if (mahler_)
      return Scalar(1);
    return op_.cs.param(op_.sigma_index()).pow(i * j);
  }

private:
  const ScalarOperator &op_;
  long r_;
  bool infinity_ = false, mahler_ = false;
  long power_ = 1;
};

struct Recurrence {
  const ScalarOperator &op;
  long r;
  MonomialAction act;
  std::vector<long> w; // valuation of b_i in units of 1/r (LONG_MAX when zero)
  std::vector<Series> b;

  Recurrence(const ScalarOperator &o, long ram) : op(o), r(ram), act(o, ram) {
    for (const auto &c : op.coeffs)
      w.push_back(c.is_zero() ? Series::kExact : point_valuation(c, op.cs.expansion_point()) * r);
  }

  void expand(long max_index) {
    b.clear();
    for (const auto &c : op.coeffs)
      b.push_back(expand_series(c, op.cs.expansion_point(), floor_div(max_index, r) + 1));
  }

  Scalar bcoef(std::size_t i, long idx) const {
    if (idx < w[i] || (idx % r + r) % r != 0)
      return Scalar();
    return b[i].coeff(idx / r);
  }

  long lead(long j) const {
    long e = Series::kExact;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] < Series::kExact)
        e = std::min(e, act.psi(static_cast<long>(i), j) + w[i]);
    return e;
  }

  // Coefficient of t^e in op(t^j).
  Scalar image(long j, long e) const {
    Scalar out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] >= Series::kExact)
        continue;
      long base = act.psi(static_cast<long>(i), j);
      if (act.single(static_cast<long>(i))) {
        Scalar c = bcoef(i, e - base);
        if (!c.is_zero())
          out += c * act.kappa(static_cast<long>(i), j, 0);
        continue;
      }
      for (long m = 0; m <= e - base - w[i]; ++m) {
        Scalar c = bcoef(i, e - base - m);
        if (!c.is_zero())
          out += c * act.kappa(static_cast<long>(i), j, m);
      }
    }
    return out;
  }
};

std::string exponent_text(long idx, long r) {
  Rational e = make_rational(idx, r);
  return e.get_str();
}

// g(u) with u = 1/x, rewritten in x.
RatFunc from_infinity(const RatFunc &g) {
  auto rev = [](const Poly &p) {
    std::vector<Scalar> c(p.coeffs().rbegin(), p.coeffs().rend());
    return Poly(c);
  };
  long shift = g.den().degree() - g.num().degree();
  return RatFunc(rev(g.num()), rev(g.den())) * RatFunc::x().pow(shift);
}

// Residual of op on the series, zero through its honest precision.
std::optional<long> first_violation(const ScalarOperator &op, const Series &y) {
  Series res;
  try {
    res = apply_operator(op, y);
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::InsufficientOrder)
      return std::nullopt;
    throw;
  }
  if (res.is_zero())
    return std::nullopt;
  return res.valuation();
}

} // namespace

Series extend_series_by_operator(const ScalarOperator &op, const Series &seed, long order) {
  const long r = seed.ramification();
  Recurrence rec(op, r);
  const long target = order * r + 1;
  Series known = seed.is_exact() ? seed.truncated(target) : seed;
  const long M = known.prec();
  const long vs = known.is_zero() ? M : known.valuation();

  std::map<long, Scalar> y;
  for (long j = vs; j < std::min(M, target); ++j) {
    Scalar c = known.coeff(j);
    if (!c.is_zero())
      y[j] = c;
  }
  // Leads must increase strictly beyond the seed so each equation has a
  // single new unknown.
  long max_index = M < target ? rec.lead(target - 1) : rec.lead(std::max(vs, M - 1));
  for (const auto &[j, c] : y)
    max_index = std::max(max_index, rec.lead(j));
  long lowest_psi = 0;
  for (std::size_t i = 0; i < rec.w.size(); ++i)
    lowest_psi = std::min(lowest_psi, rec.act.psi(static_cast<long>(i), std::min(vs, 0L)));
  rec.expand(max_index - lowest_psi + 1);
  for (long j = M + 1; j < target; ++j)
    if (rec.lead(j) <= rec.lead(j - 1))
      fail(ErrorKind::Resonance, "resonance at index " + exponent_text(j, r) + ": two unknowns share one equation");

  // Seed consistency on every equation that involves only seed coefficients.
  long lo = Series::kExact;
  for (const auto &[j, c] : y)
    lo = std::min(lo, rec.lead(j));
  const long hi = M < target ? rec.lead(M) : rec.lead(std::max(vs, M - 1)) + 1;
  for (long e = lo; e < hi && lo < Series::kExact; ++e) {
    Scalar acc;
    for (const auto &[j, c] : y)
      acc += c * rec.image(j, e);
    if (!acc.is_zero())
      fail(ErrorKind::Inconsistent, "seed inconsistent with the operator at index " + exponent_text(e, r));
  }

  for (long j = M; j < target; ++j) {
    long e = rec.lead(j);
    Scalar pivot = rec.image(j, e);
    if (pivot.is_zero())
      fail(ErrorKind::Resonance, "resonance at index " + exponent_text(j, r));
    Scalar acc;
    for (const auto &[jj, c] : y)
      acc += c * rec.image(jj, e);
    if (!acc.is_zero())
      y[j] = -acc / pivot;
  }

  long lowest = y.empty() ? 0 : y.begin()->first;
  std::vector<Scalar> coeffs;
  for (const auto &[j, c] : y) {
    coeffs.resize(static_cast<std::size_t>(j - lowest + 1));
    coeffs[static_cast<std::size_t>(j - lowest)] = c;
  }
  return Series(r, lowest, coeffs, target);
}

std::optional<RatFunc> pade_reconstruct(const Series &s, long max_degree) {
  Series c = s.compacted();
  if (c.ramification() != 1)
    fail(ErrorKind::InvalidInput, "Padé reconstruction needs integral exponents");
  if (c.is_exact())
    return to_ratfunc(c);
  if (c.is_zero())
    return RatFunc();
  const long v = c.valuation();
  const long N = c.prec() - v;
  long D = N / 2 - 1;
  if (max_degree >= 0)
    D = std::min(D, max_degree);
  if (D < 0)
    return std::nullopt;
  std::vector<Scalar> u(static_cast<std::size_t>(N));
  for (long k = 0; k < N; ++k)
    u[static_cast<std::size_t>(k)] = c.coeff(v + k);

  // Extended Euclid on (x^N, S): r_i = t_i S mod x^N; stop at deg r_i <= D.
  Poly r0 = Poly::monomial(Scalar(1), static_cast<std::size_t>(N)), r1(u);
  Poly t0, t1(Scalar(1));
  while (r1.degree() > D) {
    Poly q, rem;
    r0.divmod(r1, q, rem);
    Poly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(rem);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (t1.degree() > D || t1.coeff(0).is_zero())
    return std::nullopt;
  RatFunc f = RatFunc(r1, t1) * RatFunc::x().pow(v);
  if (!expand_series(f, ExpansionPoint::Zero, c.prec() - 1).agrees_with(c))
    return std::nullopt;
  return f;
}

RationalSolution solve_rational(const std::vector<ScalarOperator> &ops, const Series &seed,
                                const ReconstructionBudget &budget) {
  if (ops.empty())
    fail(ErrorKind::InvalidInput, "solve_rational needs at least one operator");
  for (const auto &op : ops)
    if (op.cs != ops[0].cs)
      fail(ErrorKind::InvalidInput, "operators belong to different cases");
  const bool at_infinity = ops[0].cs.expansion_point() == ExpansionPoint::Infinity;
  RationalSolution out;
  for (long N = std::max(1L, budget.order);; N = std::min(2 * N, budget.max_order)) {
    out.order_used = N;
    std::optional<Series> y;
    std::string why;
    for (const auto &op : ops) {
      try {
        y = extend_series_by_operator(op, seed, N);
        break;
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::Resonance)
          throw;
        why = e.what();
      }
    }
    if (!y) {
      out.reason = "no operator admits a recurrence for this seed (" + why + ")";
      return out;
    }
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (auto bad = first_violation(ops[i], *y))
        fail(ErrorKind::Inconsistent, "seed/operator contradiction: operator " + std::to_string(i + 1) +
                                          " leaves a residual at index " + exponent_text(*bad, y->ramification()));
    long D = budget.max_degree;
    if (auto g = pade_reconstruct(*y, D)) {
      RatFunc f = at_infinity ? from_infinity(*g) : *g;
      bool ok = true;
      for (const auto &op : ops)
        ok = ok && apply_operator(op, f).is_zero();
      if (ok) {
        out.f = f;
        out.reason = "verified by exact substitution";
        return out;
      }
    }
    if (N >= budget.max_order) {
      out.reason = "no verified rational function up to order " + std::to_string(N) +
                   (D >= 0 ? " and degree " + std::to_string(D) : std::string());
      return out;
    }
  }
}

// ------------------------------------------------------------ constant systems

ClosedFormSolution apply_constant_system(const ScalarMatrix &A, const ClosedFormSolution &y, const OperatorCase &c,
                                         int index) {
  const std::size_t n = A.rows();
  if (y.size() != n)
    fail(ErrorKind::InvalidInput, "solution length does not match the matrix");
  ClosedFormSolution out(n);
  for (std::size_t i = 0; i < n; ++i) {
    ClosedForm acc = c.has_delta() ? delta_of(y[i], c) : sigma_of(y[i], c, index);
    for (std::size_t j = 0; j < n; ++j)
      if (!A(i, j).is_zero())
        acc = acc - RatFunc(A(i, j)) * y[j];
    out[i] = acc;
  }
  return out;
}

std::vector<ClosedFormSolution> solve_constant_system(const ScalarMatrix &A, const OperatorCase &c,
                                                      const std::vector<std::pair<Scalar, Scalar>> &exp_multipliers) {
  if (!c.has_delta())
    fail(ErrorKind::InvalidInput, "single-matrix constant systems are for cases S, Q, M");
  if (!A.is_square())
    fail(ErrorKind::InvalidInput, "constant system matrix must be square");
  const std::size_t n = A.rows();
  std::vector<ClosedFormSolution> out;
  for (const auto &[lambda, mult] : eigenvalues(A)) {
    if (c.kind() == CaseKind::M && !lambda.is_rational())
      fail(ErrorKind::Unsupported, "case M needs rational eigenvalues");
    Scalar multiplier(1);
    if (c.kind() == CaseKind::S && !lambda.is_zero()) {
      auto it = std::find_if(exp_multipliers.begin(), exp_multipliers.end(),
                             [&](const auto &e) { return e.first == lambda; });
      if (it == exp_multipliers.end())
        fail(ErrorKind::Unsupported, "case S needs a declared constant for e^(" + lambda.str() + ")");
      multiplier = it->second;
    }
    const ScalarMatrix N = A - ScalarMatrix::identity(n).scaled(lambda);
    std::vector<ScalarMatrix> powers{ScalarMatrix::identity(n)};
    for (std::size_t k = 1; k <= mult; ++k)
      powers.push_back(powers.back() * N);
    // x^A v = x^lambda sum_k log(x)^k / k! N^k v, and e^(A x) v likewise with x^k.
    for (const auto &v : nullspace(powers[mult])) {
      ClosedFormSolution y(n);
      Scalar fact(1);
      for (std::size_t k = 0; k < mult; ++k) {
        if (k > 0)
          fact *= Scalar(static_cast<long>(k));
        ScalarMatrix w = powers[k] * v;
        for (std::size_t i = 0; i < n; ++i) {
          if (w(i, 0).is_zero())
            continue;
          RatFunc coef(w(i, 0) / fact);
          if (c.kind() == CaseKind::S)
            y[i] = y[i] + ClosedForm::exponential(coef * RatFunc::x().pow(static_cast<long>(k)), lambda, multiplier);
          else
            y[i] = y[i] + ClosedForm::power_log(coef, lambda, static_cast<unsigned>(k));
        }
      }
      out.push_back(std::move(y));
    }
  }
  if (out.size() != n)
    fail(ErrorKind::Internal, "generalized eigenspaces do not span");
  return out;
}

std::vector<ClosedFormSolution> solve_constant_system(const ScalarMatrix &B1, const ScalarMatrix &B2,
                                                      const OperatorCase &c) {
  if (c.has_delta())
    fail(ErrorKind::InvalidInput, "matrix pairs are for cases 2S, 2Q, 2M");
  if (!B1.is_square() || B1.rows() != B2.rows() || !B2.is_square())
    fail(ErrorKind::InvalidInput, "constant pair must be square of equal size");
  if (B1 * B2 != B2 * B1)
    fail(ErrorKind::InvalidInput, "constant pair does not commute");
  const std::size_t n = B1.rows();
  struct Joint {
    ScalarMatrix v;
    Scalar l1, l2;
  };
  std::vector<Joint> joint;
  for (const auto &[l1, m1] : eigenvalues(B1)) {
    auto E = nullspace(B1 - ScalarMatrix::identity(n).scaled(l1));
    ScalarMatrix basis(n, E.size());
    for (std::size_t k = 0; k < E.size(); ++k)
      basis.set_block(0, k, E[k]);
    auto M = solve_linear(basis, B2 * basis);
    if (!M)
      fail(ErrorKind::Internal, "eigenspace is not invariant under the commuting matrix");
    for (const auto &[l2, m2] : eigenvalues(*M))
      for (const auto &w : nullspace(*M - ScalarMatrix::identity(M->rows()).scaled(l2)))
        joint.push_back({basis * w, l1, l2});
  }
  if (joint.size() != n)
    fail(ErrorKind::Unsupported, "constant pair is not simultaneously diagonalizable");

  std::vector<ClosedFormSolution> out;
  std::size_t rate_index = 0;
  for (const auto &j : joint) {
    ClosedForm phi;
    switch (c.kind()) {
    case CaseKind::TwoQ:
    case CaseKind::TwoM: {
      // x^k (2Q) or log(x)^k (2M) with sigma_j acting by q_j^k.
      const bool mahler = c.kind() == CaseKind::TwoM;
      Scalar q1 = mahler ? Scalar(c.mahler_power(1)) : c.param(1);
      Scalar q2 = mahler ? Scalar(c.mahler_power(2)) : c.param(2);
      std::optional<long> found;
      for (long k = mahler ? 0 : -64; k <= 64 && !found; ++k)
        if (q1.pow(k) == j.l1 && q2.pow(k) == j.l2)
          found = k;
      if (!found)
        fail(ErrorKind::Unsupported, "eigenvalue pair (" + j.l1.str() + ", " + j.l2.str() +
                                         ") is not (q1^k, q2^k) for an integer k");
      phi = mahler ? ClosedForm::power_log(RatFunc(1), Scalar(0), static_cast<unsigned>(*found))
                   : ClosedForm(RatFunc::x().pow(*found));
      break;
    }
    default:
      if (j.l1.is_one() && j.l2.is_one())
        phi = ClosedForm(RatFunc(1));
      else
        phi = ClosedForm::exponential(RatFunc(1), Scalar::generator("rate" + std::to_string(++rate_index)), j.l1,
                                      j.l2);
      break;
    }
    ClosedFormSolution y(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!j.v(i, 0).is_zero())
        y[i] = RatFunc(j.v(i, 0)) * phi;
    out.push_back(std::move(y));
  }
  return out;
}

std::vector<SeriesSolution> series_solutions(const DDSystem &sys, long order) {
  if (sys.cs.kind() != CaseKind::Q && sys.cs.kind() != CaseKind::M)
    fail(ErrorKind::InvalidInput, "series solutions at 0 are for cases Q and M");
  if (sys.ramification != 1)
    fail(ErrorKind::Unsupported, "series solutions need an unramified system");
  const std::size_t n = sys.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!sys.A(i, j).is_zero() && sys.A(i, j).valuation() < 0)
        fail(ErrorKind::Unsupported, "delta matrix has a pole at 0");
  SeriesMatrix As = expand_matrix(sys.A, ExpansionPoint::Zero, order);
  std::vector<ScalarMatrix> Ak;
  for (long k = 0; k <= order; ++k)
    Ak.push_back(As.map([k](const Series &s) { return s.coeff(k); }));
  const ScalarMatrix &A0 = Ak[0];
  auto ev = eigenvalues(A0);
  for (const auto &[a, ma] : ev) {
    if (!a.is_rational())
      fail(ErrorKind::Unsupported, "residue spectrum is not rational");
    for (const auto &[b, mb] : ev)
      if (!(a == b) && (a - b).is_integer())
        fail(ErrorKind::Resonance, "eigenvalues " + a.str() + " and " + b.str() + " differ by an integer");
  }
  const ScalarMatrix I = ScalarMatrix::identity(n);
  std::vector<SeriesSolution> out;
  for (const auto &[lambda, mult] : ev) {
    auto vecs = nullspace(A0 - I.scaled(lambda));
    if (vecs.size() != mult)
      fail(ErrorKind::Unsupported, "residue matrix is not diagonalizable (logarithmic solutions)");
    for (const auto &v : vecs) {
      // ((lambda + k) I - A0) y_k = sum_{j >= 1} A_j y_{k-j}
      std::vector<ScalarMatrix> y{v};
      for (long k = 1; k <= order; ++k) {
        ScalarMatrix rhs(n, 1);
        for (long j = 1; j <= k; ++j)
          rhs += Ak[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(k - j)];
        auto yk = solve_linear(I.scaled(lambda + Scalar(k)) - A0, rhs);
        if (!yk)
          fail(ErrorKind::Internal, "Frobenius recurrence is singular");
        y.push_back(*yk);
      }
      SeriesMatrix col(n, 1);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Scalar> c;
        for (const auto &yk : y)
          c.push_back(yk(i, 0));
        col(i, 0) = Series(1, 0, c, order + 1);
      }
      out.push_back({lambda, col});
    }
  }
  return out;
}

// ------------------------------------------------------------ instances

namespace {

class Draw {
public:
  explicit Draw(std::uint64_t seed) : eng_(seed) {}
  long integer(long lo, long hi) { return lo + static_cast<long>(eng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Scalar rational(long height) { return Scalar(integer(-height, height), integer(1, height)); }
  Scalar nonzero(long height) {
    for (;;) {
      Scalar s = rational(height);
      if (!s.is_zero())
        return s;
    }
  }
  Poly poly(long max_deg, long height) {
    std::vector<Scalar> c;
    for (long i = 0, d = integer(0, max_deg); i <= d; ++i)
      c.push_back(rational(height));
    return Poly(c);
  }

private:
  std::mt19937_64 eng_;
};

// Distinct diagonal entries with pairwise non-integral differences.
std::vector<Scalar> spaced_spectrum(Draw &d, std::size_t n, bool nonzero) {
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < n; ++i) {
    Scalar s = Scalar(d.integer(-2, 2)) + Scalar(static_cast<long>(i), static_cast<long>(n) + 1);
    if (nonzero && s.is_zero())
      s = Scalar(static_cast<long>(n) + 2);
    out.push_back(s);
  }
  return out;
}

ScalarMatrix lower_with_diagonal(Draw &d, const std::vector<Scalar> &diag) {
  const std::size_t n = diag.size();
  ScalarMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = diag[i];
    for (std::size_t j = 0; j < i; ++j)
      m(i, j) = d.rational(3);
  }
  return m;
}

ScalarMatrix commuting_partner(Draw &d, const ScalarMatrix &M) {
  const std::size_t n = M.rows();
  for (;;) {
    ScalarMatrix B = ScalarMatrix::identity(n).scaled(d.nonzero(3)) + M.scaled(d.rational(3));
    if (rank(B) == n)
      return B;
  }
}

std::pair<ScalarMatrix, ScalarMatrix> random_constants(Draw &d, const OperatorCase &c, std::size_t n,
                                                       bool distinct) {
  if (c.kind() == CaseKind::M) {
    // q A B = B A with A a scaled nilpotent shift.
    Scalar q = c.mu(), s = d.nonzero(3), b = d.nonzero(3);
    ScalarMatrix A(n, n), B(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      B(i, i) = b / q.pow(static_cast<long>(i));
      if (i + 1 < n)
        A(i, i + 1) = s;
    }
    return {A, B};
  }
  std::vector<Scalar> diag;
  if (distinct)
    diag = spaced_spectrum(d, n, !c.has_delta());
  else
    for (std::size_t i = 0; i < n; ++i)
      diag.push_back(d.nonzero(3));
  ScalarMatrix first = lower_with_diagonal(d, diag);
  if (c.has_delta() && c.kind() != CaseKind::S) {
    // Conjugate by a constant unipotent matrix so A is not triangular.
    ScalarMatrix U = ScalarMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        U(i, j) = d.rational(2);
    first = U * first * inverse(U);
  }
  return {first, commuting_partner(d, first)};
}

RatMatrix random_gauge(Draw &d, const OperatorCase &c, std::size_t n, const GaugeSpec &gs) {
  if (gs.identity)
    return RatMatrix::identity(n);
  RatMatrix L = RatMatrix::identity(n), U = RatMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      L(i, j) = RatFunc(d.poly(gs.max_degree, gs.height));
      if (!gs.lower_only)
        U(j, i) = RatFunc(d.poly(gs.max_degree, gs.height));
    }
  const bool monomials = gs.monomials && c.kind() != CaseKind::S && c.kind() != CaseKind::TwoS;
  std::vector<RatFunc> diag;
  for (std::size_t i = 0; i < n; ++i) {
    RatFunc e(d.nonzero(3));
    if (monomials)
      e *= RatFunc::x().pow(d.integer(gs.monomial_min, gs.monomial_max));
    diag.push_back(e);
  }
  return L * U * RatMatrix::diagonal(diag);
}

} // namespace

Instance gen_instance(const OperatorCase &c, std::size_t n, const ConstantSpec &cs, const GaugeSpec &gs,
                      std::uint64_t seed) {
  if (n == 0)
    fail(ErrorKind::InvalidInput, "instance dimension must be positive");
  Draw d(seed);
  ScalarMatrix first = cs.first, second = cs.second;
  if (first.rows() == 0 && second.rows() == 0) {
    auto pr = random_constants(d, c, n, cs.distinct_spectrum);
    first = pr.first;
    second = pr.second;
  }
  if (first.rows() != n || second.rows() != n || !first.is_square() || !second.is_square())
    fail(ErrorKind::InvalidInput, "planted constants must be " + std::to_string(n) + " x " + std::to_string(n));
  if (c.kind() == CaseKind::Q) {
    try {
      for (const auto &[a, ma] : eigenvalues(first))
        for (const auto &[b, mb] : eigenvalues(first))
          if (!(a == b) && (a - b).is_integer())
            fail(ErrorKind::InvalidInput, "case Q constants need eigenvalue differences outside Z \\ {0}");
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::Unsupported)
        throw;
    }
  }
  RatMatrix G = random_gauge(d, c, n, gs);
  RatMatrix Ginv = inverse(G);
  Instance out;
  out.two_sigma = !c.has_delta();
  if (c.has_delta()) {
    DDSystem planted = make_dd_system(c, to_ratmatrix(first), to_ratmatrix(second));
    if (!check_consistency(planted).consistent)
      fail(ErrorKind::InvalidInput, "planted constants violate the consistency condition of the case");
    DDSystem sys = gauge(planted, Ginv).first;
    out.dd = gauge(sys, G).second;
    if (!(out.dd->target == planted))
      fail(ErrorKind::Internal, "planted certificate does not return to the constants");
  } else {
    SigmaSigmaSystem planted = make_ss_system(c, to_ratmatrix(first), to_ratmatrix(second));
    if (!check_consistency(planted).consistent)
      fail(ErrorKind::InvalidInput, "planted constants do not commute");
    SigmaSigmaSystem sys = gauge(planted, Ginv).first;
    out.ss = gauge(sys, G).second;
    if (!(out.ss->target == planted))
      fail(ErrorKind::Internal, "planted certificate does not return to the constants");
  }
  return out;
}

} // namespace consys
