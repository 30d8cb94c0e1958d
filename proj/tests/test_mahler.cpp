#include "generators.hpp"

#include "consys/mahler.hpp"

#include <doctest.h>

using namespace consys;
using namespace testing;

namespace {

RatMatrix M1(const RatFunc &f) { return RatMatrix{{f}}; }

OperatorCase two_m() { return OperatorCase::TwoM(2, 3); }

// Unipotent pair a = g(x^p) - g(x), b = g(x^q) - g(x).
SigmaSigmaSystem unipotent_pair(const RatFunc &g, long p = 2, long q = 3) {
  RatFunc a = g.inflate(static_cast<std::size_t>(p)) - g, b = g.inflate(static_cast<std::size_t>(q)) - g;
  return make_ss_system(OperatorCase::TwoM(p, q), RatMatrix{{R(1), R(0)}, {a, R(1)}},
                        RatMatrix{{R(1), R(0)}, {b, R(1)}});
}

// Coefficients of the series agree with f's expansion through `order`.
bool matches(const Series &s, const RatFunc &f, long order) {
  Series e = expand_series(f, ExpansionPoint::Zero, order);
  for (long k = -4; k <= order; ++k)
    if (s.coeff(k) != e.coeff(k))
      return false;
  return s.prec() > order;
}

// G(x^p) - A(x) G(x) A(0)^-1 vanishes below `order` + 1.
bool fixed_point_residual_ok(const SeriesMatrix &G, const RatMatrix &A, long p, long order) {
  SeriesMatrix As = expand_matrix(A, ExpansionPoint::Zero, order + 2);
  ScalarMatrix A0 = As.map([](const Series &s) { return s.coeff(0); });
  SeriesMatrix A0inv = inverse(A0).map([](const Scalar &s) { return Series(s); });
  SeriesMatrix lhs = G.map([p](const Series &s) { return s.substitute_power(p); });
  SeriesMatrix res = lhs - As * G * A0inv;
  for (std::size_t i = 0; i < res.rows(); ++i)
    for (std::size_t j = 0; j < res.cols(); ++j)
      if (!res(i, j).truncated(order + 1).is_zero())
        return false;
  return true;
}

std::vector<Scalar> brute_powers_of_two(long order) {
  std::vector<Scalar> out;
  for (long n = 0; n <= order; ++n)
    out.push_back(Scalar(n > 0 && (n & (n - 1)) == 0 ? 1 : 0));
  return out;
}

Poly char_of(std::initializer_list<long> roots) {
  Poly out(1);
  for (long r : roots)
    out = out * Poly(std::vector<Scalar>{Scalar(-r), Scalar(1)});
  return out;
}

} // namespace

TEST_CASE("fixed_point_gauge examples") {
  auto G = fixed_point_gauge(RatMatrix{{R(2), R(1)}, {R(0), R(3)}}, 2, 10);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(matches(G(i, j), R(i == j ? 1 : 0), 10));

  RatMatrix A{{R(1), R(0)}, {X().pow(2) - X(), R(1)}};
  auto H = fixed_point_gauge(A, 2, 20);
  CHECK(matches(H(0, 0), R(1), 20));
  CHECK(matches(H(1, 0), X(), 20));
  CHECK(matches(H(1, 1), R(1), 20));
  CHECK(matches(H(0, 1), R(0), 20));
  auto exact = exact_fixed_point_gauge(A, 2);
  REQUIRE(exact);
  CHECK(*exact == RatMatrix{{R(1), R(0)}, {X(), R(1)}});

  // A = 1 + x: G(x^2) = (1+x) G(x), so G is the product of (1 + x^(2^k))^-1.
  RatMatrix B = M1(R(1) + X());
  auto F = fixed_point_gauge(B, 2, 30);
  CHECK(fixed_point_residual_ok(F, B, 2, 30));
  Series prod(1);
  for (long k = 1; k <= 30; k *= 2)
    prod = prod * Series::from_poly(Poly(1) + Poly::monomial(Scalar(1), static_cast<std::size_t>(k))).inverse().truncated(31);
  for (long k = 0; k <= 30; ++k)
    CHECK(F(0, 0).coeff(k) == prod.coeff(k));
}

TEST_CASE("fixed_point_gauge errors") {
  CHECK_THROWS_AS(fixed_point_gauge(M1(X().inverse()), 2, 8), Error);
  try {
    fixed_point_gauge(RatMatrix{{X(), R(0)}, {R(0), R(1)}}, 2, 8);
    FAIL("expected a singular anchor");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::NotInvertible);
  }
  try {
    fixed_point_gauge(M1(R(1) + X().inverse()), 2, 8);
    FAIL("expected a polar entry");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("polar part") != std::string::npos);
  }
}

TEST_CASE("fixed_point_gauge residual on random regular matrices") {
  Gen g(7);
  for (int t = 0; t < 12; ++t) {
    std::size_t n = static_cast<std::size_t>(g.integer(1, 3));
    RatMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        A(i, j) = g.regular_ratfunc(2, 3);
    for (std::size_t i = 0; i < n; ++i)
      A(i, i) += R(4 + static_cast<long>(i)); // keeps A(0) invertible in practice
    ScalarMatrix A0 = expand_matrix(A, ExpansionPoint::Zero, 0).map([](const Series &s) { return s.coeff(0); });
    if (rank(A0) < n)
      continue;
    long p = g.integer(2, 3), N = 24;
    CHECK(fixed_point_residual_ok(fixed_point_gauge(A, p, N), A, p, N));
  }
}

TEST_CASE("polynomial gauge of unipotent pairs is recovered exactly") {
  Gen g(19);
  for (int t = 0; t < 8; ++t) {
    Poly gp = g.nonzero_poly(5, 4).shifted(1);
    auto sys = unipotent_pair(RatFunc(gp));
    CHECK(check_consistency(sys).consistent);
    auto G = exact_fixed_point_gauge(sys.B1, 2);
    REQUIRE(G);
    CHECK((*G)(1, 0) == RatFunc(gp));
    CHECK((*G)(0, 0).is_one());
    CHECK((*G)(1, 1).is_one());
  }
}

TEST_CASE("mahler_series_solve examples") {
  // A = 1, r = 0, seed 0 + O(x).
  SeriesMatrix zero(1, 1);
  zero(0, 0) = Series(1, 0, {}, 1);
  auto y0 = mahler_series_solve(M1(R(1)), 2, zero, 12);
  CHECK(y0(0, 0).is_zero());
  CHECK(y0(0, 0).prec() > 12);

  // y(x) = y(x^2) + x, seed x + O(x^2).
  SeriesMatrix seed(1, 1);
  seed(0, 0) = Series(1, 1, {Scalar(1)}, 2);
  auto y = mahler_series_solve(M1(R(1)), 2, seed, 15, M1(-X()));
  auto oracle = brute_powers_of_two(15);
  for (long n = 0; n <= 15; ++n)
    CHECK(y(0, 0).coeff(n) == oracle[static_cast<std::size_t>(n)]);

  // f(x^2) = f(x) / (1 + x) with f = 1/(1 - x), seed 1 + x + O(x^2).
  SeriesMatrix s2(1, 1);
  s2(0, 0) = Series(1, 0, {Scalar(1), Scalar(1)}, 2);
  auto f = mahler_series_solve(M1((R(1) + X()).inverse()), 2, s2, 25);
  Series geometric = Series(1) / Series::from_poly(Poly(std::vector<Scalar>{Scalar(1), Scalar(-1)})).truncated(26);
  for (long n = 0; n <= 25; ++n)
    CHECK(f(0, 0).coeff(n) == geometric.coeff(n));
}

TEST_CASE("mahler_series_solve errors") {
  // A^-1 = 1/x has valuation -1: p M + s = M fails at M = 1.
  SeriesMatrix seed(1, 1);
  seed(0, 0) = Series(1, 0, {Scalar(1)}, 1);
  try {
    mahler_series_solve(M1(X()), 2, seed, 10);
    FAIL("expected the valuation condition to fail");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::InsufficientOrder);
    CHECK(std::string(e.what()).find("increase seed truncation") != std::string::npos);
  }
  // Seed 1 + 2x contradicts f(x) = (1 + x) f(x^2) at x^1.
  SeriesMatrix bad(1, 1);
  bad(0, 0) = Series(1, 0, {Scalar(1), Scalar(2)}, 2);
  CHECK_THROWS_AS(mahler_series_solve(M1((R(1) + X()).inverse()), 2, bad, 10), Error);
}

TEST_CASE("mahler_series_solve from rational seeds reconstructs the function") {
  Gen g(23);
  for (int t = 0; t < 10; ++t) {
    RatFunc f = g.regular_ratfunc(2, 4);
    if (f.is_zero() || f.valuation() != 0)
      continue;
    RatFunc A = f.inflate(2) / f; // f(x^2) = A f
    SeriesMatrix seed(1, 1);
    seed(0, 0) = expand_series(f, ExpansionPoint::Zero, 0);
    auto y = mahler_series_solve(M1(A), 2, seed, 20);
    auto back = pade_reconstruct(y(0, 0));
    REQUIRE(back);
    CHECK(*back == f);
  }
}

TEST_CASE("block_triangularize examples") {
  auto c = two_m();
  RatMatrix B{{R(1), R(2)}, {R(0), R(3)}};
  auto id = block_triangularize(make_ss_system(c, RatMatrix::identity(2), B));
  CHECK(id.shape.scalar);
  CHECK(id.shape.d == Scalar(1));
  CHECK(verify(id.cert));

  auto uni = block_triangularize(unipotent_pair(X()));
  CHECK_FALSE(uni.shape.scalar);
  CHECK(uni.shape.split == 1);
  CHECK(uni.system == unipotent_pair(X()));

  // Constant pair (I, B) with b12 != 0 moved by a unipotent gauge: sigma2's
  // upper-right entry stays nonzero, and the procedure restores a shape.
  Gen g(5);
  for (int t = 0; t < 6; ++t) {
    ScalarMatrix Bc{{g.nonzero_rational(3), g.nonzero_rational(3)}, {Scalar(0), g.nonzero_rational(3)}};
    auto base = make_ss_system(c, RatMatrix::identity(2), to_ratmatrix(Bc));
    RatMatrix G{{R(1), R(0)}, {RatFunc(g.nonzero_poly(2, 3).shifted(1)), R(1)}};
    auto moved = gauge(base, G).first;
    REQUIRE_FALSE(moved.B2(0, 1).is_zero());
    auto res = block_triangularize(moved);
    CHECK(verify(res.cert));
    CHECK(res.cert.target == res.system);
    if (res.shape.scalar) {
      CHECK(res.system.B1 == RatMatrix::identity(2).scaled(RatFunc(res.shape.d)));
      CHECK(res.shape.d == Scalar(1));
    } else {
      CHECK(res.system.B2(0, 1).is_zero());
      CHECK(res.system.B1.is_lower_triangular());
    }
  }
}

TEST_CASE("block_triangularize errors") {
  auto c = two_m();
  CHECK_THROWS_AS(block_triangularize(make_ss_system(c, RatMatrix{{R(1), R(1)}, {R(0), R(2)}}, RatMatrix::identity(2))),
                  Error);
  try {
    block_triangularize(make_ss_system(c, RatMatrix{{R(1), R(0)}, {X(), R(1)}}, RatMatrix::identity(2)));
    FAIL("expected an inconsistency");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::Inconsistent);
  }
}

TEST_CASE("polar_split_remove examples") {
  auto c = two_m();
  auto plain = unipotent_pair(X());
  auto [same, cert] = polar_split_remove(plain, 1);
  CHECK(same == plain);
  CHECK(cert.G == RatMatrix::identity(2));

  // Forward-construct a polar lower-left block from G21 = c / x, then remove it.
  Gen g(41);
  for (int t = 0; t < 8; ++t) {
    ScalarMatrix B1 = ScalarMatrix::diagonal({g.nonzero_rational(3), g.nonzero_rational(3)});
    ScalarMatrix B2 = ScalarMatrix::diagonal({g.nonzero_rational(3), g.nonzero_rational(3)});
    auto base = make_ss_system(c, to_ratmatrix(B1), to_ratmatrix(B2));
    RatFunc g21 = RatFunc(g.nonzero_rational(3)) * X().inverse();
    if (g.coin())
      g21 += RatFunc(g.nonzero_rational(3)) * X().pow(-2);
    auto polar = gauge(base, RatMatrix{{R(1), R(0)}, {g21, R(1)}}).first;
    REQUIRE(polar.B1(1, 0).valuation() < 0);
    auto [out, rc] = polar_split_remove(polar, 1);
    CHECK(verify(rc));
    CHECK(rc.G(1, 0) == -g21);
    CHECK(out == base);
  }
}

TEST_CASE("polar_split_remove keeps diagonal blocks and consistency") {
  Gen g(43);
  auto c = two_m();
  for (int t = 0; t < 8; ++t) {
    auto base = unipotent_pair(RatFunc(g.nonzero_poly(2, 3).shifted(1)));
    Scalar a = g.nonzero_rational(3);
    RatFunc g21 = RatFunc(a) * X().pow(-g.integer(1, 3));
    auto polar = gauge(base, RatMatrix{{R(1), R(0)}, {g21, R(1)}}).first;
    auto [out, rc] = polar_split_remove(polar, 1);
    CHECK(check_consistency(out).consistent);
    CHECK(verify(rc));
    for (int idx = 1; idx <= 2; ++idx) {
      CHECK(out.B(idx)(0, 0) == polar.B(idx)(0, 0));
      CHECK(out.B(idx)(1, 1) == polar.B(idx)(1, 1));
      CHECK((out.B(idx)(1, 0).is_zero() || out.B(idx)(1, 0).valuation() >= 0));
    }
  }
}

TEST_CASE("polar_split_remove rejects the non-regular-singular pair") {
  auto c = two_m();
  RatMatrix A{{R(1), R(0)}, {X().inverse(), R(2)}};
  Gen g(3);
  for (int t = 0; t < 6; ++t) {
    RatMatrix B{{RatFunc(g.nonzero_rational(3)), R(0)}, {RatFunc(g.rational(3)), RatFunc(g.nonzero_rational(3))}};
    try {
      polar_split_remove(make_ss_system(c, A, B), 1);
      FAIL("expected rejection");
    } catch (const Error &e) {
      CHECK(e.kind() == ErrorKind::Inconsistent);
    }
  }
}

TEST_CASE("regular_singular_reduce examples") {
  auto c = two_m();
  // y(x^2) = 3x y: y = x v gives v(x^2) = 3 v, i.e. Z = x^-1 Y.
  auto r = regular_singular_reduce(make_ss_system(c, M1(R(3) * X()), M1(X().pow(2))), 16);
  CHECK(r.A0 == ScalarMatrix{{Scalar(3)}});
  CHECK(r.G(0, 0).agrees_with(Series::monomial(Scalar(1), -1)));
  CHECK(r.G(0, 0).prec() > 16);

  // A = 5 (1 + x): G(x^2) 5 (1+x) = 5 G(x), so G = 1/(1 - x).
  auto s = regular_singular_reduce(make_ss_system(c, M1(R(5) * (R(1) + X())), M1(R(1))), 20);
  CHECK(s.A0 == ScalarMatrix{{Scalar(5)}});
  CHECK(matches(s.G(0, 0), (R(1) - X()).inverse(), 20));

  auto k = regular_singular_reduce(make_ss_system(c, M1(R(2)), M1(R(7))), 10);
  CHECK(k.A0 == ScalarMatrix{{Scalar(2)}});
  CHECK(matches(k.G(0, 0), R(1), 10));

  // Monomial with exponent 1/2 after p - 1 = 2.
  auto h = regular_singular_reduce(make_ss_system(OperatorCase::TwoM(3, 2), M1(X()), M1(R(1))), 8);
  CHECK(h.G(0, 0).agrees_with(Series::monomial(Scalar(1), -1, 2)));
  CHECK(h.G(0, 0).coeff_at(Rational(-1, 2)) == Scalar(1));
}

TEST_CASE("reduce_2m_constants examples") {
  auto c = two_m();
  auto cst = make_ss_system(c, RatMatrix{{R(2), R(0)}, {R(1), R(3)}}, RatMatrix{{R(4), R(0)}, {R(1), R(5)}});
  REQUIRE(check_consistency(cst).consistent);
  auto idr = reduce_2m_constants(cst);
  CHECK(idr.cert.G == RatMatrix::identity(2));
  CHECK(to_ratmatrix(idr.B1) == cst.B1);

  auto uni = reduce_2m_constants(unipotent_pair(X()));
  CHECK(uni.B1 == ScalarMatrix::identity(2));
  CHECK(uni.B2 == ScalarMatrix::identity(2));
  CHECK(uni.cert.G == RatMatrix{{R(1), R(0)}, {-X(), R(1)}});
  CHECK(verify(uni.cert));
}

TEST_CASE("reduce_2m_constants recovers planted spectra") {
  auto c = two_m();
  ConstantSpec planted{ScalarMatrix::diagonal({Scalar(1), Scalar(2)}), ScalarMatrix::diagonal({Scalar(1), Scalar(3)})};
  GaugeSpec gs;
  gs.lower_only = true;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto inst = gen_instance(c, 2, planted, gs, seed);
    REQUIRE(inst.ss);
    auto red = reduce_2m_constants(inst.ss->source);
    CHECK(charpoly(red.B1) == char_of({1, 2}));
    CHECK(charpoly(red.B2) == char_of({1, 3}));
    CHECK(red.B1 * red.B2 == red.B2 * red.B1);
    CHECK(verify(red.cert));
  }
  for (std::uint64_t seed = 10; seed < 16; ++seed) {
    auto inst = gen_instance(c, 2, {}, gs, seed);
    const auto &want = inst.ss->target;
    auto red = reduce_2m_constants(inst.ss->source);
    CHECK(charpoly(red.B1) == charpoly(constant_part(want.B1)));
    CHECK(charpoly(red.B2) == charpoly(constant_part(want.B2)));
    CHECK(verify(red.cert));
  }
}

TEST_CASE("reduce_2m_constants errors") {
  auto c = two_m();
  auto sys = gauge(make_ss_system(c, RatMatrix{{R(1), R(0)}, {R(0), R(2)}}, RatMatrix{{R(1), R(0)}, {R(0), R(3)}}),
                   RatMatrix{{R(1), X()}, {R(0), R(1)}})
                 .first;
  REQUIRE_FALSE(sys.B1.is_lower_triangular());
  try {
    reduce_2m_constants(sys);
    FAIL("expected the triangular precondition to fail");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
    CHECK(std::string(e.what()).find("triangular preprocessing unavailable") != std::string::npos);
  }
  CHECK_THROWS_AS(reduce_2m_constants(make_ss_system(c, M1(X()), M1(X()))), Error);
  CHECK_THROWS_AS(reduce_2m_constants(make_ss_system(OperatorCase::TwoQ(2, 3), M1(R(1)), M1(R(1)))), Error);
}

TEST_CASE("nilpotent_normalize examples") {
  auto m = OperatorCase::M(2);
  // Nilpotent A with q A B = B A.
  auto nil = make_dd_system(m, RatMatrix{{R(0), R(1)}, {R(0), R(0)}}, RatMatrix{{R(3), R(0)}, {R(0), R(3, 2)}});
  auto [n1, c1] = nilpotent_normalize(nil);
  CHECK(n1 == nil);
  CHECK(c1.G == RatMatrix::identity(2));

  // A = diag(1/2, 0) needs B with a t = x^(1/2) entry; the gauge diag(t^-1, 1) strips it.
  auto half = make_dd_system(m, RatMatrix{{R(1, 2), R(0)}, {R(0), R(0)}}, RatMatrix{{R(5) * X(), R(0)}, {R(0), R(7)}}, 2);
  REQUIRE(check_consistency(half).consistent);
  auto [n2, c2] = nilpotent_normalize(half);
  CHECK(n2.A.is_zero());
  CHECK(n2.B == RatMatrix{{R(5), R(0)}, {R(0), R(7)}});
  CHECK(c2.G == RatMatrix{{X().inverse(), R(0)}, {R(0), R(1)}});
  CHECK(verify(c2));

  auto zero = make_dd_system(m, RatMatrix(2, 2), RatMatrix{{R(1), R(2)}, {R(3), R(4)}});
  auto [n3, c3] = nilpotent_normalize(zero);
  CHECK(n3 == zero);

  CHECK_THROWS_AS(nilpotent_normalize(make_dd_system(OperatorCase::Q(2), M1(R(1)), M1(R(2)))), Error);
}

TEST_CASE("nilpotent_normalize on monomially shifted constant systems") {
  Gen g(61);
  auto m = OperatorCase::M(2);
  for (int t = 0; t < 8; ++t) {
    std::size_t n = static_cast<std::size_t>(g.integer(1, 3));
    // A = 0 with any constant B, moved by T diag(x^k): A becomes T diag(k) T^-1.
    ScalarMatrix B;
    do
      B = constant_matrix(g, n);
    while (rank(B) < n);
    auto base = make_dd_system(m, RatMatrix(n, n), to_ratmatrix(B));
    std::vector<RatFunc> d;
    for (std::size_t i = 0; i < n; ++i)
      d.push_back(X().pow(g.integer(-2, 2)));
    RatMatrix T = to_ratmatrix(ScalarMatrix::identity(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        T(i, j) = RatFunc(g.rational(2));
    auto moved = gauge(base, T * RatMatrix::diagonal(d)).first;
    REQUIRE(is_constant(moved.A));
    auto [out, cert] = nilpotent_normalize(moved);
    CHECK(verify(cert));
    ScalarMatrix A = constant_part(out.A), P = ScalarMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k)
      P = P * A;
    CHECK(P.is_zero());
    CHECK(is_constant(out.B));
  }
}
