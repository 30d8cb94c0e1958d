#pragma once

// Operator cases (the pair delta/sigma or sigma1/sigma2 with its commutation
// factor mu), scalar skew operators, closed-form solutions and their actions.

#include "consys/matrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace consys {

enum class CaseKind { S, Q, M, TwoS, TwoQ, TwoM };

class OperatorCase {
public:
  // delta = d/dx, sigma: x -> x+1, mu = 1.
  static OperatorCase S();
  // delta = x d/dx, sigma: x -> q x, mu = 1; rational q must avoid 0, 1, -1.
  static OperatorCase Q(const Scalar &q);
  // delta = x d/dx, sigma: x -> x^q, mu = q; q >= 2.
  static OperatorCase M(long q);
  // sigma1: x -> x+1, sigma2: x -> x+alpha; alpha a generator or marked irrational.
  static OperatorCase TwoS(const Scalar &alpha, bool irrational = false);
  // sigma_i: x -> q_i x.
  static OperatorCase TwoQ(const Scalar &q1, const Scalar &q2);
  // sigma_i: x -> x^(q_i), multiplicatively independent q_i >= 2.
  static OperatorCase TwoM(long q1, long q2);

  CaseKind kind() const { return kind_; }
  bool has_delta() const { return kind_ == CaseKind::S || kind_ == CaseKind::Q || kind_ == CaseKind::M; }
  bool is_mahler() const { return kind_ == CaseKind::M || kind_ == CaseKind::TwoM; }
  bool sigma_invertible() const { return !is_mahler(); }
  int sigma_count() const { return has_delta() ? 1 : 2; }
  // Parameter of sigma_index: q (Q, M), q_i (TwoQ, TwoM), shift 1 or alpha (S, TwoS).
  const Scalar &param(int index = 1) const { return index == 2 ? p2_ : p1_; }
  long mahler_power(int index = 1) const; // requires is_mahler()
  bool irrational_marker() const { return irrational_; }
  // Commutation factor in delta sigma = mu sigma delta (S, Q, M only).
  Scalar mu() const;
  // Expansion point where series solutions live: infinity for shifts, zero otherwise.
  ExpansionPoint expansion_point() const;
  std::string name() const;

  friend bool operator==(const OperatorCase &a, const OperatorCase &b) {
    return a.kind_ == b.kind_ && a.p1_ == b.p1_ && a.p2_ == b.p2_;
  }
  friend bool operator!=(const OperatorCase &a, const OperatorCase &b) { return !(a == b); }

private:
  OperatorCase(CaseKind k, Scalar p1, Scalar p2) : kind_(k), p1_(std::move(p1)), p2_(std::move(p2)) {}
  CaseKind kind_;
  Scalar p1_, p2_;
  bool irrational_ = false;
};

// sigma_index applied to f; for Mahler cases f may live in t = x^(1/N)
// (the substitution t -> t^q is the same).
RatFunc sigma_of(const RatFunc &f, const OperatorCase &c, int index = 1);
RatFunc sigma_power_of(const RatFunc &f, const OperatorCase &c, int index, long k);
// Inverse substitution; Mahler cases reject (sigma is not surjective there).
RatFunc sigma_inverse_of(const RatFunc &f, const OperatorCase &c, int index = 1);
// delta f; for Mahler cases with entries in t = x^(1/N), delta = (1/N) t d/dt.
RatFunc delta_of(const RatFunc &f, const OperatorCase &c, long ramification = 1);

struct CommutationWitness {
  Scalar mu;
  RatFunc lhs; // delta(sigma f)
  RatFunc rhs; // sigma(delta f)
};

// Asserts delta(sigma f) = mu sigma(delta f); a mismatch is an internal error.
CommutationWitness check_commutation(const OperatorCase &c, const RatFunc &f);

// ------------------------------------------------------------ closed forms

// One summand r(x) * x^alpha * log(x)^j * e^(rate x). Under sigma the
// exponential picks up the declared multipliers: sigma1 -> mult1, sigma2 -> mult2.
struct TermKey {
  Scalar alpha;
  unsigned log_power = 0;
  Scalar rate;
  Scalar mult1 = Scalar(1);
  Scalar mult2 = Scalar(1);
};
bool operator<(const TermKey &a, const TermKey &b);
bool operator==(const TermKey &a, const TermKey &b);

class ClosedForm {
public:
  ClosedForm() = default;
  ClosedForm(const RatFunc &r) { add(TermKey{}, r); }
  // r * x^alpha * log(x)^j; rational alpha is reduced to [0, 1) with the
  // integer part moved into r.
  static ClosedForm power_log(const RatFunc &r, const Scalar &alpha, unsigned j = 0);
  // r * e^(rate x) with sigma multipliers e^rate (and e^(rate*alpha) for TwoS).
  static ClosedForm exponential(const RatFunc &r, const Scalar &rate, const Scalar &mult1,
                                const Scalar &mult2 = Scalar(1));

  void add(TermKey key, const RatFunc &r);
  bool is_zero() const { return terms_.empty(); }
  const std::map<TermKey, RatFunc> &terms() const { return terms_; }

  friend ClosedForm operator+(ClosedForm a, const ClosedForm &b);
  friend ClosedForm operator-(const ClosedForm &a, const ClosedForm &b);
  friend ClosedForm operator*(const RatFunc &r, const ClosedForm &f);
  friend bool operator==(const ClosedForm &a, const ClosedForm &b) { return a.terms_ == b.terms_; }

  std::string str() const;

private:
  std::map<TermKey, RatFunc> terms_;
};

ClosedForm sigma_of(const ClosedForm &f, const OperatorCase &c, int index = 1);
ClosedForm delta_of(const ClosedForm &f, const OperatorCase &c);

// Name of the generator standing for log(q), e.g. "log_q", "log_2", "log_3_2".
std::string log_constant_name(const Scalar &q);

// ------------------------------------------------------------ operators

enum class OpKind { Delta, Sigma1, Sigma2 };

// sum coeffs[i] * op^i, op = delta or sigma_index.
struct ScalarOperator {
  OperatorCase cs;
  OpKind kind;
  std::vector<RatFunc> coeffs;

  long order() const { return static_cast<long>(coeffs.size()) - 1; }
  const RatFunc &leading() const { return coeffs.back(); }
  const RatFunc &trailing() const { return coeffs.front(); }
  int sigma_index() const { return kind == OpKind::Sigma2 ? 2 : 1; }
  bool is_delta() const { return kind == OpKind::Delta; }
};

// Validates case/kind compatibility, order >= 1 and a nonzero leading coefficient.
ScalarOperator make_operator(const OperatorCase &c, OpKind kind, std::vector<RatFunc> coeffs);
// op - a with op the bare delta/sigma (first order, monic).
ScalarOperator first_order(const OperatorCase &c, OpKind kind, const RatFunc &a);

RatFunc apply_operator(const ScalarOperator &op, const RatFunc &f);
ClosedForm apply_operator(const ScalarOperator &op, const ClosedForm &f);
// Series live at the case's expansion point; the result's precision is the
// honest one and may be smaller than the input's.
Series apply_operator(const ScalarOperator &op, const Series &s);

// a o b (same case and kind).
ScalarOperator compose(const ScalarOperator &a, const ScalarOperator &b);
// op o (multiplication by p).
ScalarOperator compose_multiplication(const ScalarOperator &op, const RatFunc &p);
ScalarOperator power(const ScalarOperator &op, unsigned k);
ScalarOperator scaled(const ScalarOperator &op, const RatFunc &left);
// Left-multiplied so the leading coefficient is 1.
ScalarOperator make_monic(const ScalarOperator &op);
// Coefficients made coprime polynomials, leading polynomial monic.
ScalarOperator normalized(const ScalarOperator &op);
// Operator annihilating every f with op(f) = rhs.
ScalarOperator homogenize(const ScalarOperator &op, const RatFunc &rhs);
// For invertible sigma: drop a right factor sigma^k when b_0 = ... = b_{k-1} = 0.
ScalarOperator strip_sigma_power(const ScalarOperator &op);

std::string to_string(const ScalarOperator &op);

} // namespace consys
