#pragma once

// Systems from scalar operator pairs, and operator pairs from closed forms.
//
// build_dd_system works on the abstract module generated by f with L f = 0,
// S f = 0: generators sigma^j delta^i f (i < ord L, j < ord S), reduced with
// delta sigma = mu sigma delta, L for delta^n and S for sigma^m.

#include "consys/systems.hpp"

#include <string>
#include <utility>
#include <vector>

namespace consys {

struct ModuleBasis {
  bool two_sigma = false;
  // Generator k stands for sigma^j delta^i f (or sigma1^i sigma2^j f) with
  // (i, j) = labels[k].
  std::vector<std::pair<long, long>> labels;
  std::string label(std::size_t k) const;
};

// L a delta-operator, S a sigma-operator of the same case. A vanishing
// trailing coefficient of S is divided out in cases S and Q and rejected in
// case M. Throws Inconsistent when the pair has no full common module
// (residual reported), NotInvertible for a singular B.
std::pair<DDSystem, ModuleBasis> build_dd_system(const ScalarOperator &L, const ScalarOperator &S);
// S1 a sigma1-operator, S2 a sigma2-operator of a two-sigma case.
std::pair<SigmaSigmaSystem, ModuleBasis> build_ss_system(const ScalarOperator &S1, const ScalarOperator &S2);

// (delta-op, sigma-op) annihilating cf, or (sigma1-op, sigma2-op) in
// two-sigma cases; both verified by exact application.
std::pair<ScalarOperator, ScalarOperator> annihilators_of_closed_form(const ClosedForm &cf, const OperatorCase &c);

// First-order pair (delta - delta(f)/f, sigma - sigma(f)/f) for nonzero
// rational f, sigma1/sigma2 in two-sigma cases.
std::pair<ScalarOperator, ScalarOperator> first_order_annihilators(const RatFunc &f, const OperatorCase &c);

} // namespace consys
