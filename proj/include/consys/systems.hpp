#pragma once

// First-order system pairs
//   delta(Y) = A Y, sigma(Y) = B Y          (cases S, Q, M)
//   sigma1(Y) = B1 Y, sigma2(Y) = B2 Y      (cases 2S, 2Q, 2M)
// with their consistency conditions, gauge transformations Z = G Y and
// singularity inventories.
//
// In Mahler cases entries may live in t = x^(1/r) (r = ramification); sigma
// acts on t exactly as on x and delta = (1/r) t d/dt.

#include "consys/operators.hpp"

#include <string>
#include <utility>
#include <vector>

namespace consys {

struct DDSystem {
  OperatorCase cs;
  RatMatrix A, B;
  long ramification = 1;
  std::size_t dim() const { return A.rows(); }
};

struct SigmaSigmaSystem {
  OperatorCase cs;
  RatMatrix B1, B2;
  long ramification = 1;
  std::size_t dim() const { return B1.rows(); }
  const RatMatrix &B(int index) const { return index == 2 ? B2 : B1; }
};

// Validating constructors: square matrices of equal size, invertible sigma
// matrices, ramification only in Mahler cases.
DDSystem make_dd_system(const OperatorCase &c, RatMatrix A, RatMatrix B, long ramification = 1);
SigmaSigmaSystem make_ss_system(const OperatorCase &c, RatMatrix B1, RatMatrix B2, long ramification = 1);

bool operator==(const DDSystem &a, const DDSystem &b);
bool operator==(const SigmaSigmaSystem &a, const SigmaSigmaSystem &b);

// Entrywise actions.
RatMatrix sigma_of(const RatMatrix &m, const OperatorCase &c, int index = 1);
RatMatrix sigma_power_of(const RatMatrix &m, const OperatorCase &c, int index, long k);
RatMatrix delta_of(const RatMatrix &m, const OperatorCase &c, long ramification = 1);

struct Consistency {
  bool consistent = true;
  // delta(B) - mu sigma(A) B + B A, or sigma1(B2) B1 - sigma2(B1) B2.
  RatMatrix residual;
  explicit operator bool() const { return consistent; }
};

Consistency check_consistency(const DDSystem &sys);
Consistency check_consistency(const SigmaSigmaSystem &sys);

// Z = G Y maps (A, B) to (delta(G) G^-1 + G A G^-1, sigma(G) B G^-1), and
// B_j to sigma_j(G) B_j G^-1 for two-sigma systems.
template <class System> struct GaugeCertificate {
  RatMatrix G;
  System source, target;
};
using DDCertificate = GaugeCertificate<DDSystem>;
using SSCertificate = GaugeCertificate<SigmaSigmaSystem>;

// Exact check of the gauge relations (no inverse needed: target * G = ...).
bool verify(const DDCertificate &cert);
bool verify(const SSCertificate &cert);

// Throws NotInvertible for singular G; if the input is consistent the
// output is asserted consistent.
std::pair<DDSystem, DDCertificate> gauge(const DDSystem &sys, const RatMatrix &G);
std::pair<SigmaSigmaSystem, SSCertificate> gauge(const SigmaSigmaSystem &sys, const RatMatrix &G);

// first then second: G = G2 G1. Endpoints must match.
DDCertificate compose(const DDCertificate &first, const DDCertificate &second);
SSCertificate compose(const SSCertificate &first, const SSCertificate &second);

// sigma^N applied to the system: (mu^N sigma^N(A), sigma^N(B)) via
// G = sigma^(N-1)(B) ... sigma(B) B, resp. sigma2^N of both matrices via the
// product of sigma2-iterates of B2. Requires a consistent input.
std::pair<DDSystem, DDCertificate> sigma_shift(const DDSystem &sys, long N);
std::pair<SigmaSigmaSystem, SSCertificate> sigma_shift(const SigmaSigmaSystem &sys, long N);

// Same system written in t' with t = t'^k (Mahler cases).
DDSystem ramified(const DDSystem &sys, long k);
SigmaSigmaSystem ramified(const SigmaSigmaSystem &sys, long k);
RatMatrix ramified(const RatMatrix &m, long k);

struct SingularFactor {
  std::string matrix; // "A", "B", "B^-1", "B1", ...
  Poly factor;        // monic; linear when the root is in the constants field
  bool exceptional;   // x itself in cases Q, M, 2Q, 2M
};

struct SingularInventory {
  std::vector<SingularFactor> finite;
  std::vector<std::string> at_infinity; // matrices with a pole at infinity
  bool empty_away_from_exceptional() const;
};

SingularInventory singular_points(const DDSystem &sys);
SingularInventory singular_points(const SigmaSigmaSystem &sys);

} // namespace consys
