#pragma once

// Automata with binary output and the Mahler relations of their
// generating series  F(x) = sum_n a(n) x^n.

#include "consys/io.hpp"
#include "consys/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace consys {

struct DFAO {
  long base = 2;
  std::vector<std::vector<std::size_t>> delta; // delta[state][digit]
  std::vector<int> output;                     // 0 or 1
  std::size_t initial = 0;
  bool lsd_first = true; // least significant digit read first

  std::size_t states() const { return output.size(); }
  // Output after reading n (empty word for n = 0).
  int run(unsigned long long n) const;
};

// Validates shape, totality and binary outputs.
DFAO make_dfao(long base, std::vector<std::vector<std::size_t>> delta, std::vector<int> output, std::size_t initial,
               bool lsd_first = true);
DFAO dfao_from_json(const json &j);
json to_json(const DFAO &a);

// Equivalent least-significant-first automaton (subset construction on the
// reversed transitions); identity on LSD input.
DFAO to_lsd(const DFAO &a);

// First n values whose output changes when zeros are appended to the
// representation (as the most significant digits); empty when invariant.
std::vector<unsigned long long> leading_zero_violations(const DFAO &a, unsigned long long limit = 64);

// a(0), ..., a(count - 1) by running the automaton.
Series brute_force_series(const DFAO &a, long count);

struct MahlerRelation {
  DFAO lsd;   // minimal, reachable states, initial first
  RatMatrix P; // F(x) = P(x) F(x^k), sums of monomials x^j
  bool invertible = false;
  RatMatrix system; // P^-1: F(x^k) = P^-1 F(x), when invertible
  std::optional<ScalarOperator> annihilator; // of F_initial; absent when degenerate
  bool degenerate = false;                   // F_initial = 0
  long elimination_order = 0;                // before order reduction
  long residual_terms = 0;                   // annihilator checked on this many terms
  std::vector<std::string> warnings;
};

MahlerRelation automaton_to_mahler(const DFAO &a, long residual_terms = 128);

} // namespace consys
