#pragma once

// Series extension by scalar operators, Padé reconstruction, certified
// rational solutions, closed-form solutions of constant systems and
// seeded generation of consistent instances.

#include "consys/systems.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace consys {

inline constexpr long kMaxOrder = 1024;

struct ReconstructionBudget {
  long order = 64;      // series terms used by the first attempt
  long max_degree = -1; // -1: floor(N/2) - 1 for the current N
  long max_order = kMaxOrder;
};

// Unique extension of the seed with op(y) = 0 through exponent `order`
// (units of x). The recurrence solves every new coefficient from the lowest
// equation it enters; a vanishing pivot is a Resonance error, a seed that
// violates an equation is an Inconsistent error naming the exponent.
Series extend_series_by_operator(const ScalarOperator &op, const Series &seed, long order);

// Rational function of numerator and denominator degree <= max_degree
// matching every known coefficient of s (-1: floor(N/2) - 1 with N the
// number of known terms). Ramification must compact to 1.
std::optional<RatFunc> pade_reconstruct(const Series &s, long max_degree = -1);

struct RationalSolution {
  std::optional<RatFunc> f; // set only when verified against every operator
  long order_used = 0;
  std::string reason;
  bool certified() const { return f.has_value(); }
};

// Extends the seed with the first operator that admits a recurrence, checks
// the others on the extension, then alternates Padé and exact verification
// while doubling the order. Never returns an unverified function.
RationalSolution solve_rational(const std::vector<ScalarOperator> &ops, const Series &seed,
                                const ReconstructionBudget &budget = {});

// One fundamental solution: a column of closed forms.
using ClosedFormSolution = std::vector<ClosedForm>;

// delta(y) - A y, or sigma_index(y) - A y in two-sigma cases; zero for solutions.
ClosedFormSolution apply_constant_system(const ScalarMatrix &A, const ClosedFormSolution &y, const OperatorCase &c,
                                         int index = 1);

// Fundamental solutions of delta Y = A Y (cases S, Q, M), or of
// sigma_j Y = B_j Y with constant commuting B_j (cases 2S, 2Q, 2M).
// Case S needs the multiplier e^lambda of every nonzero eigenvalue lambda
// as a pair (lambda, multiplier).
std::vector<ClosedFormSolution> solve_constant_system(const ScalarMatrix &A, const OperatorCase &c,
                                                      const std::vector<std::pair<Scalar, Scalar>> &exp_multipliers = {});
std::vector<ClosedFormSolution> solve_constant_system(const ScalarMatrix &B1, const ScalarMatrix &B2,
                                                      const OperatorCase &c);

// Frobenius solutions x^lambda * (series) of delta Y = A Y at 0 (cases Q, M)
// for A regular at 0 whose residue A(0) has a rational spectrum without
// integer differences. One column per eigenvector of A(0).
struct SeriesSolution {
  Scalar exponent;
  SeriesMatrix y; // n x 1, exponents relative to x^exponent
};
std::vector<SeriesSolution> series_solutions(const DDSystem &sys, long order);

// ------------------------------------------------------------ instances

struct ConstantSpec {
  // Planted constants (A, B) or (B1, B2); empty matrices request random ones.
  ScalarMatrix first, second;
  // Random constants: distinct rational eigenvalues for the first matrix.
  bool distinct_spectrum = true;
};

struct GaugeSpec {
  bool identity = false;
  long max_degree = 2; // polynomial entries of the unipotent factors
  long height = 3;
  long monomial_min = -1, monomial_max = 1; // diagonal exponents
  bool monomials = true;
  // Lower unipotent factors only; keeps sigma1 lower triangular in case 2M.
  bool lower_only = false;
};

// Planted certificate: source is the generated system, target the
// constants, G reduces one to the other.
struct Instance {
  bool two_sigma = false;
  std::optional<DDCertificate> dd; // cases S, Q, M
  std::optional<SSCertificate> ss; // cases 2S, 2Q, 2M
};

// Deterministic in (case, n, specs, seed): the planted constants gauged by G^-1.
Instance gen_instance(const OperatorCase &c, std::size_t n, const ConstantSpec &cs, const GaugeSpec &gs,
                      std::uint64_t seed);

} // namespace consys
