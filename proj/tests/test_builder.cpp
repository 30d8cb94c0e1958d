#include "generators.hpp"

#include <doctest.h>

using namespace consys;
using namespace testing;

namespace {

Scalar q() { return Scalar::generator("q"); }
RatMatrix M1(const RatFunc &f) { return RatMatrix{{f}}; }

std::vector<OperatorCase> all_cases() {
  return {OperatorCase::S(),         OperatorCase::Q(2),        OperatorCase::M(2),
          OperatorCase::TwoS(Scalar::generator("alpha")), OperatorCase::TwoQ(2, 3), OperatorCase::TwoM(2, 3)};
}

bool consistent_build(const std::pair<ScalarOperator, ScalarOperator> &p, std::size_t &dim) {
  if (p.first.cs.has_delta()) {
    auto [sys, basis] = build_dd_system(p.first, p.second);
    dim = sys.dim();
    return check_consistency(sys).consistent && basis.labels.size() == dim;
  }
  auto [sys, basis] = build_ss_system(p.first, p.second);
  dim = sys.dim();
  return check_consistency(sys).consistent && basis.labels.size() == dim;
}

} // namespace

TEST_CASE("build_dd_system examples") {
  auto cq = OperatorCase::Q(q());
  auto [s, basis] = build_dd_system(first_order(cq, OpKind::Delta, R(1)), first_order(cq, OpKind::Sigma1, RatFunc(q())));
  CHECK(s.A == M1(R(1)));
  CHECK(s.B == M1(RatFunc(q())));
  CHECK(basis.label(0) == "f");

  auto cm = OperatorCase::M(2);
  auto [m, mb] = build_dd_system(first_order(cm, OpKind::Delta, R(1)), first_order(cm, OpKind::Sigma1, X()));
  CHECK(m.A == M1(R(1)));
  CHECK(m.B == M1(X()));

  Gen g(2);
  auto c2 = OperatorCase::Q(2);
  auto [big, bb] = build_dd_system(constant_operator(g, c2, OpKind::Delta, 2), constant_operator(g, c2, OpKind::Sigma1, 3));
  CHECK(big.dim() == 6);
  CHECK(check_consistency(big).consistent);
  CHECK(bb.label(5) == "sigma^2 delta f");
}

TEST_CASE("build_dd_system hand-computed log pair") {
  // f = log(x) in case M, q = 2: delta^2 f = 0 and sigma f = 2 f.
  // Basis (f, delta f): delta -> [[0,1],[0,0]], sigma f = 2 f, sigma(delta f) = delta f.
  auto cm = OperatorCase::M(2);
  auto [s, b] = build_dd_system(make_operator(cm, OpKind::Delta, {R(0), R(0), R(1)}),
                                first_order(cm, OpKind::Sigma1, R(2)));
  CHECK(s.A == RatMatrix{{R(0), R(1)}, {R(0), R(0)}});
  CHECK(s.B == RatMatrix{{R(2), R(0)}, {R(0), R(1)}});
}

TEST_CASE("build_dd_system errors") {
  auto cm = OperatorCase::M(2);
  auto L = first_order(cm, OpKind::Delta, R(0));
  auto S = make_operator(cm, OpKind::Sigma1, {R(0), -X(), R(1)});
  CHECK_THROWS_AS(build_dd_system(L, S), Error);
  // Incompatible pair: delta with sigma - x (residual x, as in the consistency example).
  auto cq = OperatorCase::Q(2);
  try {
    build_dd_system(first_order(cq, OpKind::Delta, R(0)), first_order(cq, OpKind::Sigma1, X()));
    FAIL("expected an inconsistency");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::Inconsistent);
  }
  // Case Q strips a sigma power: sigma^2 - 2 sigma behaves like sigma - 2.
  auto [s, b] = build_dd_system(first_order(cq, OpKind::Delta, R(1)), make_operator(cq, OpKind::Sigma1, {R(0), R(-2), R(1)}));
  CHECK(s.B == M1(R(2)));
  CHECK_THROWS_AS(build_dd_system(first_order(cq, OpKind::Delta, R(1)), first_order(OperatorCase::Q(3), OpKind::Sigma1, R(3))), Error);
}

TEST_CASE("build_ss_system examples") {
  Scalar q1 = Scalar::generator("q1"), q2 = Scalar::generator("q2");
  auto c = OperatorCase::TwoQ(q1, q2);
  auto [s, b] = build_ss_system(first_order(c, OpKind::Sigma1, RatFunc(q1)), first_order(c, OpKind::Sigma2, RatFunc(q2)));
  CHECK(s.B1 == M1(RatFunc(q1)));
  CHECK(s.B2 == M1(RatFunc(q2)));

  auto m = OperatorCase::TwoM(2, 3);
  auto [t, tb] = build_ss_system(first_order(m, OpKind::Sigma1, X()), first_order(m, OpKind::Sigma2, X().pow(2)));
  CHECK(t.B1 == M1(X()));
  CHECK(t.B2 == M1(X().pow(2)));
  CHECK(sigma_of(X().pow(2), m, 1) * X() == X().pow(5));
  CHECK(check_consistency(t).consistent);

  Gen g(4);
  auto c2 = OperatorCase::TwoQ(2, 3);
  auto [u, ub] = build_ss_system(constant_operator(g, c2, OpKind::Sigma1, 2), constant_operator(g, c2, OpKind::Sigma2, 2));
  CHECK(u.dim() == 4);
  CHECK(check_consistency(u).consistent);
  CHECK(ub.label(3) == "sigma1 sigma2 f");
}

TEST_CASE("first-order round trip on rational functions") {
  Gen g(31);
  for (const auto &c : all_cases())
    for (int t = 0; t < 4; ++t) {
      RatFunc f = g.nonzero_ratfunc(2, 4);
      auto p = first_order_annihilators(f, c);
      CHECK(apply_operator(p.first, f).is_zero());
      CHECK(apply_operator(p.second, f).is_zero());
      if (c.has_delta()) {
        auto [sys, b] = build_dd_system(p.first, p.second);
        CHECK(sys.A == M1(delta_of(f, c) / f));
        CHECK(sys.B == M1(sigma_of(f, c) / f));
        // Series of the generator solves both equations to truncation order.
        Series fs = expand_series(f, c.expansion_point(), 20);
        Series lhs = apply_operator(make_operator(c, OpKind::Delta, {RatFunc(0), R(1)}), fs);
        Series rhs = expand_series(sys.A(0, 0), c.expansion_point(), 40) * fs;
        CHECK(lhs.agrees_with(rhs));
      } else {
        auto [sys, b] = build_ss_system(p.first, p.second);
        CHECK(sys.B1 == M1(sigma_of(f, c, 1) / f));
        CHECK(sys.B2 == M1(sigma_of(f, c, 2) / f));
      }
    }
}

TEST_CASE("compatible pairs build consistent systems") {
  Gen g(12);
  for (const auto &c : all_cases())
    for (int t = 0; t < 6; ++t) {
      auto p = compatible_pair(g, c);
      std::size_t dim = 0;
      CHECK(consistent_build(p, dim));
      CHECK(dim == static_cast<std::size_t>(p.first.order() * p.second.order()));
    }
}

TEST_CASE("annihilators of closed forms: examples") {
  auto cm = OperatorCase::M(3);
  auto [L, S] = annihilators_of_closed_form(ClosedForm::power_log(R(1), Scalar(1, 2)), cm);
  CHECK(L.coeffs == std::vector<RatFunc>{R(-1, 2), R(1)});
  CHECK(S.coeffs == std::vector<RatFunc>{R(0), -X().pow(3), R(1)});

  auto cq = OperatorCase::Q(q());
  auto [Lq, Sq] = annihilators_of_closed_form(ClosedForm::power_log(R(1), Scalar(0), 1), cq);
  CHECK(Lq.coeffs == std::vector<RatFunc>{R(0), R(0), R(1)});
  CHECK(Sq.coeffs == std::vector<RatFunc>{R(1), R(-2), R(1)});

  auto cs = OperatorCase::S();
  Scalar c = Scalar::generator("c");
  auto [Ls, Ss] = annihilators_of_closed_form(ClosedForm::exponential(X() + R(1), 2, c), cs);
  CHECK(Ls.coeffs == std::vector<RatFunc>{R(4), R(-4), R(1)});
  RatFunc cc(c);
  CHECK(Ss.coeffs == std::vector<RatFunc>{cc * cc, R(-2) * cc, R(1)});

  CHECK_THROWS_AS(annihilators_of_closed_form(ClosedForm::power_log(R(1), Scalar::generator("a")), cm), Error);
  CHECK_THROWS_AS(annihilators_of_closed_form(ClosedForm::power_log(R(1), Scalar(1, 2)), cs), Error);
}

TEST_CASE("annihilators of random closed forms annihilate") {
  Gen g(50);
  Scalar c1 = Scalar::generator("c1"), c2 = Scalar::generator("c2");
  for (int t = 0; t < 50; ++t) {
    int which = t % 5;
    ClosedForm cf;
    OperatorCase cs = OperatorCase::S();
    switch (which) {
    case 0: // case Q, integer exponents with logs
      cs = OperatorCase::Q(2);
      cf = ClosedForm::power_log(g.nonzero_ratfunc(1, 3), Scalar(g.integer(-1, 2)), static_cast<unsigned>(g.integer(0, 1))) +
           ClosedForm::power_log(g.nonzero_ratfunc(1, 3), Scalar(0), 0);
      break;
    case 1: // case Q, x^(1/2) with q = 4
      cs = OperatorCase::Q(4);
      cf = ClosedForm::power_log(g.nonzero_ratfunc(1, 3), Scalar(1, 2), static_cast<unsigned>(g.integer(0, 1)));
      break;
    case 2: // case M, rational exponents
      cs = OperatorCase::M(2);
      cf = ClosedForm::power_log(g.nonzero_ratfunc(1, 3), Scalar(g.integer(0, 2), 3), static_cast<unsigned>(g.integer(0, 1)));
      if (g.coin())
        cf = cf + ClosedForm::power_log(R(1), Scalar(1, 2));
      break;
    case 3: // case S, exponentials
      cf = ClosedForm::exponential(RatFunc(g.nonzero_poly(2, 3)), 1, c1) +
           ClosedForm::exponential(g.nonzero_ratfunc(1, 3), 0, Scalar(1));
      break;
    case 4: // case 2S with two exponential multipliers
      cs = OperatorCase::TwoS(Scalar::generator("alpha"));
      cf = ClosedForm::exponential(RatFunc(g.nonzero_poly(1, 3)), 2, c1, c2);
      break;
    }
    auto [a, b] = annihilators_of_closed_form(cf, cs);
    CHECK(apply_operator(a, cf).is_zero());
    CHECK(apply_operator(b, cf).is_zero());
  }
}
