#include "generators.hpp"

#include <doctest.h>

using namespace consys;
using namespace testing;

namespace {

Scalar q() { return Scalar::generator("q"); }
RatMatrix M1(const RatFunc &f) { return RatMatrix{{f}}; }

OperatorCase two_m() { return OperatorCase::TwoM(2, 3); }

// g(x) = x unipotent pair: B1 = [[1,0],[x^2-x,1]], B2 = [[1,0],[x^3-x,1]].
SigmaSigmaSystem unipotent_pair() {
  RatMatrix B1{{R(1), R(0)}, {X().pow(2) - X(), R(1)}};
  RatMatrix B2{{R(1), R(0)}, {X().pow(3) - X(), R(1)}};
  return make_ss_system(two_m(), B1, B2);
}

// Independent residual: entrywise, written out for 1x1 systems.
RatFunc scalar_residual(const OperatorCase &c, const RatFunc &a, const RatFunc &b) {
  return delta_of(b, c) - RatFunc(c.mu()) * sigma_of(a, c) * b + b * a;
}

std::vector<OperatorCase> dd_cases() { return {OperatorCase::S(), OperatorCase::Q(2), OperatorCase::M(2)}; }
std::vector<OperatorCase> ss_cases() {
  return {OperatorCase::TwoS(Scalar::generator("alpha")), OperatorCase::TwoQ(2, 3), two_m()};
}

} // namespace

TEST_CASE("delta-sigma consistency examples") {
  Scalar lam = Scalar::generator("lambda"), c = Scalar::generator("c");
  CHECK(check_consistency(make_dd_system(OperatorCase::Q(q()), M1(RatFunc(lam)), M1(RatFunc(c)))).consistent);
  CHECK(check_consistency(make_dd_system(OperatorCase::M(2), M1(R(1)), M1(X()))).consistent);
  auto bad = check_consistency(make_dd_system(OperatorCase::Q(q()), M1(R(0)), M1(X())));
  CHECK_FALSE(bad.consistent);
  CHECK(bad.residual == M1(X()));
  CHECK(bad.residual(0, 0) == scalar_residual(OperatorCase::Q(q()), R(0), X()));
}

TEST_CASE("sigma-sigma consistency examples") {
  Scalar a = Scalar::generator("a");
  RatMatrix C1{{RatFunc(a), R(1)}, {R(0), RatFunc(a)}}, C2{{R(2), R(3)}, {R(0), R(2)}};
  CHECK(check_consistency(make_ss_system(OperatorCase::TwoQ(2, 3), C1, C2)).consistent);
  CHECK(check_consistency(unipotent_pair()).consistent);
  auto s2 = OperatorCase::TwoS(Scalar::generator("alpha"));
  auto bad = check_consistency(make_ss_system(s2, M1(X()), M1(R(1))));
  CHECK_FALSE(bad.consistent);
  // sigma1(1) x - sigma2(x) 1 = x - (x + alpha)
  CHECK(bad.residual == M1(-RatFunc(Scalar::generator("alpha"))));
}

TEST_CASE("system validation") {
  CHECK_THROWS_AS(make_dd_system(OperatorCase::Q(2), M1(R(1)), M1(R(0))), Error);
  CHECK_THROWS_AS(make_dd_system(OperatorCase::TwoQ(2, 3), M1(R(1)), M1(R(1))), Error);
  CHECK_THROWS_AS(make_dd_system(OperatorCase::Q(2), M1(R(1)), M1(R(1)), 2), Error);
  CHECK_NOTHROW(make_dd_system(OperatorCase::M(2), M1(R(1)), M1(R(1)), 2));
  CHECK_THROWS_AS(make_ss_system(OperatorCase::Q(2), M1(R(1)), M1(R(1))), Error);
}

TEST_CASE("gauge examples") {
  auto cq = OperatorCase::Q(q());
  Scalar a = Scalar::generator("a"), b = Scalar::generator("b");
  auto sys = make_dd_system(cq, M1(RatFunc(a)), M1(RatFunc(b)));
  auto [same, c0] = gauge(sys, RatMatrix::identity(1));
  CHECK(same == sys);
  auto [t, cert] = gauge(sys, M1(X()));
  CHECK(t.A == M1(R(1) + RatFunc(a)));
  CHECK(t.B == M1(RatFunc(q() * b)));
  CHECK(verify(cert));

  // G = B gives (mu sigma(A), sigma(B)).
  Gen g(3);
  for (const auto &c : dd_cases()) {
    auto s = random_consistent_dd(g, c, 2);
    auto [u, cu] = gauge(s, s.B);
    CHECK(u.A == sigma_of(s.A, c).scaled(RatFunc(c.mu())));
    CHECK(u.B == sigma_of(s.B, c));
  }
  CHECK_THROWS_AS(gauge(sys, M1(R(0))), Error);
}

TEST_CASE("two-sigma gauge examples") {
  Gen g(5);
  for (const auto &c : ss_cases()) {
    auto s = random_consistent_ss(g, c, 2);
    CHECK(gauge(s, RatMatrix::identity(2)).first == s);
    auto [u, cu] = gauge(s, s.B2);
    CHECK(u.B1 == sigma_of(s.B1, c, 2));
    CHECK(u.B2 == sigma_of(s.B2, c, 2));
    CHECK(verify(cu));
  }
  // Z = G Y with G = [[1,0],[-x,1]] removes both lower entries.
  auto [t, cert] = gauge(unipotent_pair(), RatMatrix{{R(1), R(0)}, {-X(), R(1)}});
  CHECK(t.B1 == RatMatrix::identity(2));
  CHECK(t.B2 == RatMatrix::identity(2));
  CHECK(verify(cert));
}

TEST_CASE("sigma_shift examples") {
  auto cm = OperatorCase::M(2);
  auto sys = make_dd_system(cm, M1(R(1)), M1(X()));
  auto [s1, c1] = sigma_shift(sys, 1);
  CHECK(s1 == gauge(sys, sys.B).first);
  auto [s2, c2] = sigma_shift(sys, 2);
  CHECK(s2.A == M1(R(4)));
  CHECK(s2.B == M1(X().pow(4)));
  CHECK(verify(c2));

  auto [p2, cp] = sigma_shift(unipotent_pair(), 2);
  CHECK(p2.B1 == RatMatrix{{R(1), R(0)}, {X().pow(18) - X().pow(9), R(1)}});
  CHECK(verify(cp));
  CHECK_THROWS_AS(sigma_shift(make_dd_system(OperatorCase::Q(2), M1(R(0)), M1(X())), 1), Error);
}

TEST_CASE("singular point inventory") {
  Gen g(1);
  auto cst = constant_dd(g, OperatorCase::Q(2), 2);
  CHECK(singular_points(cst).finite.empty());

  auto s = make_dd_system(OperatorCase::S(), M1(R(0)), M1((X() - R(1)).inverse()));
  auto inv = singular_points(s);
  REQUIRE(inv.finite.size() == 1);
  CHECK(inv.finite[0].matrix == "B");
  CHECK(inv.finite[0].factor == Poly(std::vector<Scalar>{Scalar(-1), Scalar(1)}));
  CHECK_FALSE(inv.finite[0].exceptional);
  CHECK(inv.at_infinity == std::vector<std::string>{"B^-1"});

  auto qsys = make_dd_system(OperatorCase::Q(2), M1(X().inverse()), M1(R(1)));
  auto qi = singular_points(qsys);
  REQUIRE(qi.finite.size() == 1);
  CHECK(qi.finite[0].exceptional);
  CHECK(qi.empty_away_from_exceptional());

  // Irreducible quadratic factor stays whole.
  auto irr = make_dd_system(OperatorCase::Q(2), M1((X() * X() + R(1)).inverse()), M1(R(1)));
  REQUIRE(singular_points(irr).finite.size() == 1);
  CHECK(singular_points(irr).finite[0].factor.degree() == 2);
}

TEST_CASE("gauge preserves consistency and acts as a group") {
  Gen g(77);
  for (const auto &c : dd_cases())
    for (int t = 0; t < 6; ++t) {
      std::size_t n = static_cast<std::size_t>(g.integer(1, 3));
      auto sys = random_consistent_dd(g, c, n);
      REQUIRE(check_consistency(sys).consistent);
      RatMatrix G1 = invertible_gauge(g, n, 3, false), G2 = invertible_gauge(g, n, 3, false);
      auto [s1, c1] = gauge(sys, G1);
      CHECK(check_consistency(s1).consistent);
      auto [s12, c12] = gauge(s1, G2);
      auto [direct, cd] = gauge(sys, G2 * G1);
      CHECK(s12 == direct);
      CHECK(verify(c1));
      CHECK(verify(c12));
      CHECK(verify(compose(c1, c12)));
      // A tampered certificate is rejected.
      DDCertificate bad = c1;
      bad.target.A(0, 0) += R(1);
      CHECK_FALSE(verify(bad));
    }
  for (const auto &c : ss_cases())
    for (int t = 0; t < 6; ++t) {
      std::size_t n = static_cast<std::size_t>(g.integer(1, 3));
      auto sys = random_consistent_ss(g, c, n);
      REQUIRE(check_consistency(sys).consistent);
      RatMatrix G1 = invertible_gauge(g, n, 3, false), G2 = invertible_gauge(g, n, 3, false);
      auto [s1, c1] = gauge(sys, G1);
      CHECK(check_consistency(s1).consistent);
      CHECK(gauge(s1, G2).first == gauge(sys, G2 * G1).first);
      CHECK(verify(c1));
    }
}

TEST_CASE("sigma_shift composes") {
  Gen g(9);
  for (const auto &c : {OperatorCase::S(), OperatorCase::Q(2), OperatorCase::M(2)}) {
    auto sys = random_consistent_dd(g, c, 2);
    auto once = sigma_shift(sys, 1).first;
    auto twice = sigma_shift(once, 1).first;
    auto [direct, cert] = sigma_shift(sys, 2);
    CHECK(direct == twice);
    CHECK(verify(cert));
  }
  auto sys = random_consistent_ss(g, OperatorCase::TwoQ(2, 3), 2);
  CHECK(sigma_shift(sigma_shift(sys, 1).first, 1).first == sigma_shift(sys, 2).first);
}

TEST_CASE("ramified systems stay consistent") {
  auto cm = OperatorCase::M(2);
  auto sys = make_dd_system(cm, M1(R(1)), M1(X()));
  auto r = ramified(sys, 2);
  CHECK(r.ramification == 2);
  CHECK(r.B == M1(X().pow(2)));
  CHECK(check_consistency(r).consistent);
  // t = x^(1/2): Z = t Y turns A into A + 1/2.
  auto [t, cert] = gauge(r, M1(X()));
  CHECK(t.A == M1(R(3, 2)));
  CHECK(verify(cert));
}
