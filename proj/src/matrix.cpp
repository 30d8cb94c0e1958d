#include "consys/matrix.hpp"

#include <algorithm>
#include <map>

namespace consys {

RatMatrix to_ratmatrix(const ScalarMatrix &m) {
  return m.map([](const Scalar &s) { return RatFunc(s); });
}

bool is_constant(const RatMatrix &m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_constant())
        return false;
  return true;
}

ScalarMatrix constant_part(const RatMatrix &m) {
  if (!is_constant(m))
    fail(ErrorKind::InvalidInput, "matrix has non-constant entries");
  return m.map([](const RatFunc &f) { return f.constant_value(); });
}

SeriesMatrix expand_matrix(const RatMatrix &m, ExpansionPoint at, long order, long ramification) {
  return m.map([&](const RatFunc &f) { return expand_series(f, at, order, ramification); });
}

Poly charpoly(const ScalarMatrix &m) {
  if (!m.is_square())
    fail(ErrorKind::InvalidInput, "characteristic polynomial of a non-square matrix");
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
  const std::size_t n = m.rows();
  std::vector<Scalar> c(n + 1);
  c[n] = Scalar(1);
  ScalarMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk;
    for (std::size_t i = 0; i < n; ++i)
      mk(i, i) += c[n - k + 1];
    ScalarMatrix am = m * mk;
    Scalar tr;
    for (std::size_t i = 0; i < n; ++i)
      tr += am(i, i);
    c[n - k] = -tr / Scalar(static_cast<long>(k));
  }
  return Poly(c);
}

std::vector<std::pair<Scalar, std::size_t>> eigenvalues(const ScalarMatrix &m) {
  if (!m.is_square())
    fail(ErrorKind::InvalidInput, "eigenvalues of a non-square matrix");
  std::vector<std::pair<Scalar, std::size_t>> out;
  if (m.is_lower_triangular() || m.transpose().is_lower_triangular()) {
    std::map<Scalar, std::size_t> count;
    std::vector<Scalar> order;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (!count.count(m(i, i)))
        order.push_back(m(i, i));
      ++count[m(i, i)];
    }
    for (const auto &s : order)
      out.emplace_back(s, count[s]);
    return out;
  }
  Poly p = charpoly(m);
  if (!p.is_rational())
    fail(ErrorKind::Unsupported, "spectrum does not split over the constants field");
  auto sqf = squarefree_decomposition(p);
  std::size_t total = 0;
  for (std::size_t mult = 1; mult < sqf.size(); ++mult) {
    for (const auto &root : rational_roots(sqf[mult])) {
      out.emplace_back(Scalar(root), mult);
      total += mult;
    }
  }
  if (total != m.rows())
    fail(ErrorKind::Unsupported, "spectrum does not split over the constants field");
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
  return out;
}

} // namespace consys
