#include "support.hpp"

#include "consys/operators.hpp"

#include <doctest.h>

using namespace consys;
using testing::Gen;
using testing::R;
using testing::X;

namespace {

Scalar q() { return Scalar::generator("q"); }

std::vector<OperatorCase> delta_cases() { return {OperatorCase::S(), OperatorCase::Q(q()), OperatorCase::Q(2), OperatorCase::M(2), OperatorCase::M(3)}; }

// Expansion orders: symbolic constants make coefficients grow, so keep them short.
long order_for(const OperatorCase &c, long n) { return c.param().is_rational() ? n : n / 3; }

// Independent power-of-two indicator.
bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

TEST_CASE("case validation") {
  CHECK_THROWS_AS(OperatorCase::Q(1), Error);
  CHECK_THROWS_AS(OperatorCase::Q(-1), Error);
  CHECK_THROWS_AS(OperatorCase::Q(0), Error);
  CHECK_NOTHROW(OperatorCase::Q(q()));
  CHECK_THROWS_AS(OperatorCase::M(1), Error);
  CHECK_THROWS_AS(OperatorCase::TwoM(2, 4), Error);
  CHECK_THROWS_AS(OperatorCase::TwoM(6, 36), Error);
  CHECK_NOTHROW(OperatorCase::TwoM(2, 3));
  CHECK_NOTHROW(OperatorCase::TwoM(4, 6));
  CHECK_THROWS_AS(OperatorCase::TwoQ(2, 8), Error);
  CHECK_THROWS_AS(OperatorCase::TwoQ(Scalar(1, 2), 4), Error);
  CHECK_NOTHROW(OperatorCase::TwoQ(2, 3));
  CHECK_THROWS_AS(OperatorCase::TwoS(Scalar(1, 2)), Error);
  CHECK_NOTHROW(OperatorCase::TwoS(Scalar::generator("alpha")));
  CHECK_THROWS_AS(OperatorCase::TwoS(Scalar::generator("alpha") * Scalar(2)), Error);
  CHECK_NOTHROW(OperatorCase::TwoS(Scalar::generator("alpha") * Scalar(2), true));
  CHECK(OperatorCase::M(3).mu() == Scalar(3));
  CHECK_THROWS_AS(OperatorCase::TwoM(2, 3).mu(), Error);
}

TEST_CASE("sigma_of and delta_of examples") {
  CHECK(sigma_of(X() * X(), OperatorCase::S()) == (X() + R(1)) * (X() + R(1)));
  RatFunc geo = (R(1) - X()).inverse();
  CHECK(sigma_of(geo, OperatorCase::Q(q())) == (R(1) - RatFunc(q()) * X()).inverse());
  CHECK(sigma_of(X() / (R(1) + X()), OperatorCase::M(2)) == X() * X() / (R(1) + X() * X()));
  CHECK(delta_of(X().pow(3), OperatorCase::Q(q())) == R(3) * X().pow(3));
  CHECK(delta_of(X().pow(3), OperatorCase::S()) == R(3) * X().pow(2));
  // Quotient rule by hand: x d/dx (1-x)^-1 = x (1-x)^-2.
  CHECK(delta_of(geo, OperatorCase::M(2)) == X() * geo * geo);
  CHECK_THROWS_AS(delta_of(X(), OperatorCase::TwoM(2, 3)), Error);
  auto c2 = OperatorCase::TwoS(Scalar::generator("alpha"));
  CHECK(sigma_of(X(), c2, 2) == X() + RatFunc(Scalar::generator("alpha")));
  CHECK(sigma_inverse_of(sigma_of(geo, OperatorCase::Q(q())), OperatorCase::Q(q())) == geo);
  CHECK_THROWS_AS(sigma_inverse_of(X(), OperatorCase::M(2)), Error);
}

TEST_CASE("check_commutation examples") {
  auto w = check_commutation(OperatorCase::S(), X() * X());
  CHECK(w.mu == Scalar(1));
  CHECK(w.lhs == R(2) * X() + R(2));
  auto wq = check_commutation(OperatorCase::Q(q()), X().pow(3));
  CHECK(wq.lhs == RatFunc(Scalar(3) * q().pow(3)) * X().pow(3));
  auto wm = check_commutation(OperatorCase::M(2), X());
  CHECK(wm.mu == Scalar(2));
  CHECK(wm.lhs == R(2) * X() * X());
  CHECK(wm.rhs == X() * X());
}

TEST_CASE("commutation and endomorphism properties on random functions") {
  Gen g(21);
  for (const auto &c : delta_cases()) {
    for (int t = 0; t < 25; ++t) {
      RatFunc f = g.ratfunc(4), h = g.ratfunc(3);
      CHECK_NOTHROW(check_commutation(c, f));
      CHECK(sigma_of(f * h, c) == sigma_of(f, c) * sigma_of(h, c));
      CHECK(sigma_of(f + h, c) == sigma_of(f, c) + sigma_of(h, c));
      CHECK(delta_of(f * h, c) == delta_of(f, c) * h + f * delta_of(h, c));
    }
  }
}

TEST_CASE("apply_operator on series examples") {
  auto cq = OperatorCase::Q(q());
  Series x = expand_series(X(), ExpansionPoint::Zero, 10);
  CHECK(apply_operator(first_order(cq, OpKind::Delta, R(1)), x).is_zero());
  CHECK(apply_operator(first_order(cq, OpKind::Sigma1, RatFunc(q())), x).is_zero());

  auto cm = OperatorCase::M(2);
  std::vector<Scalar> c(17);
  for (long n = 0; n <= 16; ++n)
    c[static_cast<std::size_t>(n)] = is_power_of_two(n) ? Scalar(1) : Scalar(0);
  Series f(1, 0, c, 17);
  auto op = make_operator(cm, OpKind::Sigma1, {X(), -(R(1) + X()), R(1)});
  Series res = apply_operator(op, f);
  CHECK(res.is_zero());
  CHECK(res.prec() >= 17);

  Series tiny(1, 0, {}, 6); // zero through x^5, nothing known beyond
  CHECK_THROWS_AS(apply_operator(make_operator(cm, OpKind::Sigma1, {X().pow(-20), R(1)}), tiny), Error);
}

TEST_CASE("apply_operator commutes with expansion") {
  Gen g(4);
  for (const auto &c : delta_cases()) {
    for (int t = 0; t < 6; ++t) {
      RatFunc f = g.nonzero_ratfunc(3);
      OpKind kind = g.coin() ? OpKind::Delta : OpKind::Sigma1;
      auto op = make_operator(c, kind, {g.ratfunc(2), g.ratfunc(2), g.nonzero_ratfunc(2)});
      Series lhs = apply_operator(op, expand_series(f, c.expansion_point(), order_for(c, 30)));
      Series rhs = expand_series(apply_operator(op, f), c.expansion_point(), order_for(c, 80));
      CHECK(lhs.agrees_with(rhs));
      CHECK(lhs.order() >= order_for(c, 30) / 3);
    }
  }
}

TEST_CASE("homogenize examples") {
  auto cm = OperatorCase::M(2);
  auto h = homogenize(first_order(cm, OpKind::Sigma1, R(1)), -X());
  CHECK(h.coeffs == std::vector<RatFunc>{X(), -(R(1) + X()), R(1)});
  auto cs = OperatorCase::S();
  auto d = homogenize(make_operator(cs, OpKind::Delta, {R(0), R(1)}), R(1));
  CHECK(d.coeffs == std::vector<RatFunc>{R(0), R(0), R(1)});
  auto s = homogenize(first_order(cs, OpKind::Sigma1, R(1)), R(1));
  CHECK(s.coeffs == std::vector<RatFunc>{R(1), R(-2), R(1)});
  CHECK_THROWS_AS(homogenize(s, R(0)), Error);
}

TEST_CASE("homogenized operators annihilate constructed solutions") {
  Gen g(8);
  for (const auto &c : delta_cases()) {
    for (int t = 0; t < 8; ++t) {
      RatFunc f = g.nonzero_ratfunc(2);
      OpKind kind = t % 2 ? OpKind::Delta : OpKind::Sigma1;
      auto op = make_operator(c, kind, {g.ratfunc(2), g.nonzero_ratfunc(1)});
      RatFunc rhs = apply_operator(op, f);
      if (rhs.is_zero())
        continue;
      auto h = homogenize(op, rhs);
      CHECK(h.order() == op.order() + 1);
      CHECK(apply_operator(h, f).is_zero());
      Series ser = apply_operator(h, expand_series(f, c.expansion_point(), order_for(c, 40)));
      CHECK(ser.is_zero());
    }
  }
}

TEST_CASE("composition matches sequential application") {
  Gen g(13);
  for (const auto &c : delta_cases()) {
    OpKind kind = c.kind() == CaseKind::S ? OpKind::Delta : OpKind::Sigma1;
    auto a = make_operator(c, kind, {g.ratfunc(2), g.nonzero_ratfunc(2)});
    auto b = make_operator(c, kind, {g.ratfunc(2), g.ratfunc(1), g.nonzero_ratfunc(1)});
    RatFunc f = g.nonzero_ratfunc(2);
    CHECK(apply_operator(compose(a, b), f) == apply_operator(a, apply_operator(b, f)));
    RatFunc p = g.nonzero_ratfunc(2);
    CHECK(apply_operator(compose_multiplication(a, p), f) == apply_operator(a, p * f));
  }
}

TEST_CASE("strip_sigma_power") {
  auto cq = OperatorCase::Q(q());
  auto op = make_operator(cq, OpKind::Sigma1, {R(0), -X(), R(1)}); // sigma^2 - x sigma
  auto s = strip_sigma_power(op);
  CHECK(s.order() == 1);
  // sigma^2 - x sigma = sigma o (sigma - x/q)
  CHECK(s.coeffs[0] == -X() / RatFunc(q()));
  CHECK_THROWS_AS(strip_sigma_power(make_operator(OperatorCase::M(2), OpKind::Sigma1, {R(0), R(1)})), Error);
}

TEST_CASE("closed forms under delta and sigma") {
  auto cq = OperatorCase::Q(q());
  ClosedForm lg = ClosedForm::power_log(R(1), Scalar(0), 1);
  CHECK(delta_of(lg, cq) == ClosedForm(R(1)));
  ClosedForm slg = sigma_of(lg, cq);
  CHECK(slg - lg == ClosedForm(RatFunc(Scalar::generator("log_q"))));
  // x^(3/2) is stored as x * x^(1/2).
  ClosedForm h = ClosedForm::power_log(R(1), Scalar(3, 2));
  REQUIRE(h.terms().size() == 1);
  CHECK(h.terms().begin()->first.alpha == Scalar(1, 2));
  CHECK(h.terms().begin()->second == X());
  auto cm = OperatorCase::M(3);
  ClosedForm s = sigma_of(ClosedForm::power_log(R(1), Scalar(1, 2)), cm);
  CHECK(s == ClosedForm::power_log(R(1), Scalar(3, 2)));
  CHECK(delta_of(h, cm) == ClosedForm::power_log(R(3, 2), Scalar(3, 2)));
  // d/dx e^(2x) (x+1) = e^(2x) (2x + 3).
  auto cs = OperatorCase::S();
  Scalar c = Scalar::generator("c");
  ClosedForm e = ClosedForm::exponential(X() + R(1), 2, c);
  CHECK(delta_of(e, cs) == ClosedForm::exponential(R(2) * X() + R(3), 2, c));
  CHECK(sigma_of(e, cs) == ClosedForm::exponential(RatFunc(c) * (X() + R(2)), 2, c));
  CHECK_THROWS_AS(sigma_of(ClosedForm::power_log(R(1), Scalar(1, 2)), cs), Error);
}
