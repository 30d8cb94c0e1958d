#pragma once

// Constructive reduction for Mahler systems y(x^p) = A(x) y:
// x-adic fixed points, formal series solutions, block triangular shapes,
// removal of polar parts and reduction of consistent 2M pairs to constants.
//
// Ramified entries are rational functions of t = x^(1/r); every routine
// works in t, where the Mahler substitution is again t -> t^p.

#include "consys/rational.hpp"

#include <cstddef>
#include <optional>
#include <utility>

namespace consys {

// G(0) = I and G(x^p) = A(x) G(x) A(0)^-1 through exponent `order`.
// A must be regular at 0 with A(0) invertible.
SeriesMatrix fixed_point_gauge(const RatMatrix &A, long p, long order);

// Same gauge reconstructed entrywise by Padé and checked by exact
// substitution; the order doubles from `order` up to `max_order`.
std::optional<RatMatrix> exact_fixed_point_gauge(const RatMatrix &A, long p, long order = 16,
                                                 long max_order = kMaxOrder);

// Solution of y(x) = A(x)^-1 y(x^p) - r(x) extending the seed (an n x 1
// column known below its precision M). Requires p M + s > M with s the
// valuation of A^-1; otherwise InsufficientOrder ("increase seed truncation").
SeriesMatrix mahler_series_solve(const RatMatrix &A, long p, const SeriesMatrix &seed, long order,
                                 const RatMatrix &r = {});

struct BlockShape {
  bool scalar = false; // sigma1 matrix is d * I
  Scalar d;
  std::size_t split = 0; // size of the upper diagonal block otherwise
};

struct BlockResult {
  SigmaSigmaSystem system;
  SSCertificate cert; // source: the input, ramified when a q-th root was needed
  BlockShape shape;
};

// Both matrices lower block triangular with a common shape, for a
// consistent 2M pair whose sigma1 matrix is lower triangular with constant
// diagonal. Candidate entries b_rl above the identity block: minimal column
// l, then the uppermost row r.
BlockResult block_triangularize(const SigmaSigmaSystem &sys);

// For a consistent 2M pair, lower block triangular with constant diagonal
// blocks of sizes (split, n - split): removes the polar part of the lower
// left blocks with a unipotent gauge polynomial in 1/t.
std::pair<SigmaSigmaSystem, SSCertificate> polar_split_remove(const SigmaSigmaSystem &sys, std::size_t split);

struct RegularSingularResult {
  ScalarMatrix A0;
  SeriesMatrix G; // Z = G Y; series in t = x^(1/ramification), Puiseux monomials exact
  long ramification = 1;
};

// Gauge over formal series reducing sigma1 to a constant matrix. For n = 1
// it is t^(-s/(p-1)) times the fixed point of c(t) = b(t) c(t^p); larger
// pairs go through the exact reduction and are expanded to `order`.
RegularSingularResult regular_singular_reduce(const SigmaSigmaSystem &sys, long order);

struct ConstantReduction {
  ScalarMatrix B1, B2;
  SSCertificate cert; // target constant; source = input ramified by cert.source.ramification
  long order_used = 0;
};

// Consistent 2M pair with lower triangular sigma1 matrix (or dimension 1)
// to constant commuting matrices, with an exact certificate. Series orders
// double from `order` up to `max_order` (ResourceCap beyond).
ConstantReduction reduce_2m_constants(const SigmaSigmaSystem &sys, long order = 16, long max_order = kMaxOrder);

// Case M, constant A with rational eigenvalues: nilpotent A and constant B
// via a constant change of basis and diag(t^(-lambda)).
std::pair<DDSystem, DDCertificate> nilpotent_normalize(const DDSystem &sys);

// Certificate written in t' with t = t'^k.
SSCertificate ramified(const SSCertificate &cert, long k);
DDCertificate ramified(const DDCertificate &cert, long k);

} // namespace consys
