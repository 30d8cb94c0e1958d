#include "consys/systems.hpp"

#include <algorithm>

namespace consys {

namespace {

void check_square_pair(const RatMatrix &a, const RatMatrix &b, const char *what) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows() || a.rows() == 0)
    fail(ErrorKind::InvalidInput, std::string(what) + ": matrices must be square of the same positive size");
}

void check_ramification(const OperatorCase &c, long r) {
  if (r < 1)
    fail(ErrorKind::InvalidInput, "ramification must be positive");
  if (r > 1 && !c.is_mahler())
    fail(ErrorKind::InvalidInput, "fractional powers of x are only allowed in Mahler cases");
}

void check_invertible(const RatMatrix &m, const std::string &name) {
  if (rank(m) < m.rows())
    fail(ErrorKind::NotInvertible, name + " is not invertible: det = 0");
}

RatMatrix product_of_iterates(const RatMatrix &B, const OperatorCase &c, int index, long N) {
  // sigma^(N-1)(B) ... sigma(B) B
  RatMatrix G = RatMatrix::identity(B.rows());
  RatMatrix cur = B;
  for (long k = 0; k < N; ++k) {
    G = cur * G;
    if (k + 1 < N)
      cur = sigma_of(cur, c, index);
  }
  return G;
}

Poly denominator_lcm(const RatMatrix &m) {
  Poly l(Scalar(1));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Poly &d = m(i, j).den();
      if (d.degree() > 0) {
        Poly q, r;
        (l * d).divmod(gcd(l, d), q, r);
        l = q.monic();
      }
    }
  return l;
}

bool pole_at_infinity(const RatMatrix &m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero() && m(i, j).num().degree() > m(i, j).den().degree())
        return true;
  return false;
}

void add_poles(SingularInventory &inv, const std::string &name, const RatMatrix &m, bool zero_exceptional) {
  Poly l = denominator_lcm(m);
  if (l.degree() > 0) {
    auto parts = squarefree_decomposition(l);
    std::vector<Poly> factors;
    for (std::size_t k = 1; k < parts.size(); ++k) {
      Poly rest = parts[k];
      if (rest.degree() <= 0)
        continue;
      if (rest.is_rational())
        for (const auto &root : rational_roots(rest)) {
          Poly lin(std::vector<Scalar>{Scalar(-root), Scalar(1)});
          factors.push_back(lin);
          Poly q, r;
          rest.divmod(lin, q, r);
          rest = q;
        }
      if (rest.degree() > 0)
        factors.push_back(rest.monic());
    }
    std::sort(factors.begin(), factors.end(), [](const Poly &a, const Poly &b) {
      return a.degree() != b.degree() ? a.degree() < b.degree() : a.str() < b.str();
    });
    for (const auto &f : factors)
      inv.finite.push_back({name, f, zero_exceptional && f == Poly::x()});
  }
  if (pole_at_infinity(m))
    inv.at_infinity.push_back(name);
}

} // namespace

DDSystem make_dd_system(const OperatorCase &c, RatMatrix A, RatMatrix B, long ramification) {
  if (!c.has_delta())
    fail(ErrorKind::InvalidInput, "case " + c.name() + " has no derivation; use a two-sigma system");
  check_square_pair(A, B, "delta-sigma system");
  check_ramification(c, ramification);
  check_invertible(B, "B");
  return DDSystem{c, std::move(A), std::move(B), ramification};
}

SigmaSigmaSystem make_ss_system(const OperatorCase &c, RatMatrix B1, RatMatrix B2, long ramification) {
  if (c.sigma_count() != 2)
    fail(ErrorKind::InvalidInput, "case " + c.name() + " has a single sigma; use a delta-sigma system");
  check_square_pair(B1, B2, "sigma-sigma system");
  check_ramification(c, ramification);
  check_invertible(B1, "B1");
  check_invertible(B2, "B2");
  return SigmaSigmaSystem{c, std::move(B1), std::move(B2), ramification};
}

bool operator==(const DDSystem &a, const DDSystem &b) {
  return a.cs == b.cs && a.ramification == b.ramification && a.A == b.A && a.B == b.B;
}

bool operator==(const SigmaSigmaSystem &a, const SigmaSigmaSystem &b) {
  return a.cs == b.cs && a.ramification == b.ramification && a.B1 == b.B1 && a.B2 == b.B2;
}

RatMatrix sigma_of(const RatMatrix &m, const OperatorCase &c, int index) {
  return m.map([&](const RatFunc &f) { return sigma_of(f, c, index); });
}

RatMatrix sigma_power_of(const RatMatrix &m, const OperatorCase &c, int index, long k) {
  return m.map([&](const RatFunc &f) { return sigma_power_of(f, c, index, k); });
}

RatMatrix delta_of(const RatMatrix &m, const OperatorCase &c, long ramification) {
  return m.map([&](const RatFunc &f) { return delta_of(f, c, ramification); });
}

Consistency check_consistency(const DDSystem &sys) {
  const auto &c = sys.cs;
  RatMatrix res = delta_of(sys.B, c, sys.ramification) -
                  (sigma_of(sys.A, c) * sys.B).scaled(RatFunc(c.mu())) + sys.B * sys.A;
  return Consistency{res.is_zero(), res};
}

Consistency check_consistency(const SigmaSigmaSystem &sys) {
  const auto &c = sys.cs;
  RatMatrix res = sigma_of(sys.B2, c, 1) * sys.B1 - sigma_of(sys.B1, c, 2) * sys.B2;
  return Consistency{res.is_zero(), res};
}

bool verify(const DDCertificate &cert) {
  const auto &s = cert.source, &t = cert.target;
  const auto &G = cert.G;
  if (s.cs != t.cs || s.ramification != t.ramification || s.dim() != t.dim() || G.rows() != s.dim() ||
      !G.is_square())
    return false;
  if (rank(G) < G.rows())
    return false;
  return t.A * G == delta_of(G, s.cs, s.ramification) + G * s.A && t.B * G == sigma_of(G, s.cs) * s.B;
}

bool verify(const SSCertificate &cert) {
  const auto &s = cert.source, &t = cert.target;
  const auto &G = cert.G;
  if (s.cs != t.cs || s.ramification != t.ramification || s.dim() != t.dim() || G.rows() != s.dim() ||
      !G.is_square())
    return false;
  if (rank(G) < G.rows())
    return false;
  return t.B1 * G == sigma_of(G, s.cs, 1) * s.B1 && t.B2 * G == sigma_of(G, s.cs, 2) * s.B2;
}

std::pair<DDSystem, DDCertificate> gauge(const DDSystem &sys, const RatMatrix &G) {
  if (G.rows() != sys.dim() || !G.is_square())
    fail(ErrorKind::InvalidInput, "gauge matrix has the wrong size");
  RatMatrix Gi = inverse(G);
  const auto &c = sys.cs;
  DDSystem out{c, (delta_of(G, c, sys.ramification) + G * sys.A) * Gi, sigma_of(G, c) * sys.B * Gi,
               sys.ramification};
  if (check_consistency(sys) && !check_consistency(out))
    fail(ErrorKind::Internal, "gauge transformation broke consistency");
  return {out, DDCertificate{G, sys, out}};
}

std::pair<SigmaSigmaSystem, SSCertificate> gauge(const SigmaSigmaSystem &sys, const RatMatrix &G) {
  if (G.rows() != sys.dim() || !G.is_square())
    fail(ErrorKind::InvalidInput, "gauge matrix has the wrong size");
  RatMatrix Gi = inverse(G);
  const auto &c = sys.cs;
  SigmaSigmaSystem out{c, sigma_of(G, c, 1) * sys.B1 * Gi, sigma_of(G, c, 2) * sys.B2 * Gi, sys.ramification};
  if (check_consistency(sys) && !check_consistency(out))
    fail(ErrorKind::Internal, "gauge transformation broke consistency");
  return {out, SSCertificate{G, sys, out}};
}

DDCertificate compose(const DDCertificate &first, const DDCertificate &second) {
  if (!(first.target == second.source))
    fail(ErrorKind::InvalidInput, "certificates do not chain");
  return DDCertificate{second.G * first.G, first.source, second.target};
}

SSCertificate compose(const SSCertificate &first, const SSCertificate &second) {
  if (!(first.target == second.source))
    fail(ErrorKind::InvalidInput, "certificates do not chain");
  return SSCertificate{second.G * first.G, first.source, second.target};
}

std::pair<DDSystem, DDCertificate> sigma_shift(const DDSystem &sys, long N) {
  if (N < 1)
    fail(ErrorKind::InvalidInput, "shift count must be positive");
  auto cons = check_consistency(sys);
  if (!cons)
    fail(ErrorKind::Inconsistent, "sigma shift needs a consistent system; residual " + cons.residual.str());
  const auto &c = sys.cs;
  RatMatrix G = product_of_iterates(sys.B, c, 1, N);
  DDSystem out{c, sigma_power_of(sys.A, c, 1, N).scaled(RatFunc(c.mu().pow(N))), sigma_power_of(sys.B, c, 1, N),
               sys.ramification};
  DDCertificate cert{G, sys, out};
  if (!verify(cert))
    fail(ErrorKind::Internal, "sigma shift certificate does not verify");
  return {out, cert};
}

std::pair<SigmaSigmaSystem, SSCertificate> sigma_shift(const SigmaSigmaSystem &sys, long N) {
  if (N < 1)
    fail(ErrorKind::InvalidInput, "shift count must be positive");
  auto cons = check_consistency(sys);
  if (!cons)
    fail(ErrorKind::Inconsistent, "sigma shift needs a consistent system; residual " + cons.residual.str());
  const auto &c = sys.cs;
  RatMatrix G = product_of_iterates(sys.B2, c, 2, N);
  SigmaSigmaSystem out{c, sigma_power_of(sys.B1, c, 2, N), sigma_power_of(sys.B2, c, 2, N), sys.ramification};
  SSCertificate cert{G, sys, out};
  if (!verify(cert))
    fail(ErrorKind::Internal, "sigma shift certificate does not verify");
  return {out, cert};
}

RatMatrix ramified(const RatMatrix &m, long k) {
  if (k < 1)
    fail(ErrorKind::InvalidInput, "ramification factor must be positive");
  return m.map([&](const RatFunc &f) { return f.inflate(static_cast<std::size_t>(k)); });
}

DDSystem ramified(const DDSystem &sys, long k) {
  check_ramification(sys.cs, sys.ramification * k);
  return DDSystem{sys.cs, ramified(sys.A, k), ramified(sys.B, k), sys.ramification * k};
}

SigmaSigmaSystem ramified(const SigmaSigmaSystem &sys, long k) {
  check_ramification(sys.cs, sys.ramification * k);
  return SigmaSigmaSystem{sys.cs, ramified(sys.B1, k), ramified(sys.B2, k), sys.ramification * k};
}

bool SingularInventory::empty_away_from_exceptional() const {
  return std::all_of(finite.begin(), finite.end(), [](const SingularFactor &f) { return f.exceptional; });
}

SingularInventory singular_points(const DDSystem &sys) {
  SingularInventory inv;
  const bool zero_ok = sys.cs.kind() != CaseKind::S;
  add_poles(inv, "A", sys.A, zero_ok);
  add_poles(inv, "B", sys.B, zero_ok);
  add_poles(inv, "B^-1", inverse(sys.B), zero_ok);
  return inv;
}

SingularInventory singular_points(const SigmaSigmaSystem &sys) {
  SingularInventory inv;
  const bool zero_ok = sys.cs.kind() != CaseKind::TwoS;
  add_poles(inv, "B1", sys.B1, zero_ok);
  add_poles(inv, "B1^-1", inverse(sys.B1), zero_ok);
  add_poles(inv, "B2", sys.B2, zero_ok);
  add_poles(inv, "B2^-1", inverse(sys.B2), zero_ok);
  return inv;
}

} // namespace consys
