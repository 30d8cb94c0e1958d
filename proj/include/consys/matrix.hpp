#pragma once

// Dense matrices over an exact field-like type T (Scalar, RatFunc, Series).
// T must default-construct to zero, construct from long, and offer is_zero().

#include "consys/error.hpp"
#include "consys/ratfunc.hpp"
#include "consys/series.hpp"

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace consys {

template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), d_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    for (const auto &row : rows) {
      if (row.size() != c_)
        fail(ErrorKind::InvalidInput, "ragged matrix literal");
      d_.insert(d_.end(), row.begin(), row.end());
    }
  }
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = T(1);
    return m;
  }
  static Matrix diagonal(const std::vector<T> &d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
      m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool is_square() const { return r_ == c_; }
  T &operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }

  bool is_zero() const {
    for (const auto &e : d_)
      if (!e.is_zero())
        return false;
    return true;
  }
  bool is_lower_triangular() const {
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = i + 1; j < c_; ++j)
        if (!(*this)(i, j).is_zero())
          return false;
    return true;
  }
  bool is_diagonal() const { return is_lower_triangular() && transpose().is_lower_triangular(); }

  template <class F> auto map(F &&f) const {
    using U = std::decay_t<decltype(f(std::declval<const T &>()))>;
    Matrix<U> m(r_, c_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j)
        m(i, j) = f((*this)(i, j));
    return m;
  }

  Matrix transpose() const {
    Matrix m(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j)
        m(j, i) = (*this)(i, j);
    return m;
  }
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j)
        m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix &b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        (*this)(r0 + i, c0 + j) = b(i, j);
  }
  Matrix column(std::size_t j) const { return block(0, j, r_, 1); }
  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < c_; ++j)
      std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < r_; ++i)
      std::swap((*this)(i, a), (*this)(i, b));
  }

  Matrix operator-() const {
    Matrix m = *this;
    for (auto &e : m.d_)
      e = -e;
    return m;
  }
  Matrix &operator+=(const Matrix &o) {
    check_same(o);
    for (std::size_t k = 0; k < d_.size(); ++k)
      d_[k] += o.d_[k];
    return *this;
  }
  Matrix &operator-=(const Matrix &o) {
    check_same(o);
    for (std::size_t k = 0; k < d_.size(); ++k)
      d_[k] -= o.d_[k];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.c_ != b.r_)
      fail(ErrorKind::InvalidInput, "matrix dimensions do not match for product");
    Matrix m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const T &x = a(i, k);
        if (x.is_zero())
          continue;
        for (std::size_t j = 0; j < b.c_; ++j)
          if (!b(k, j).is_zero())
            m(i, j) += x * b(k, j);
      }
    return m;
  }
  Matrix &operator*=(const Matrix &o) { return *this = *this * o; }
  Matrix scaled(const T &s) const {
    Matrix m = *this;
    for (auto &e : m.d_)
      e = s * e;
    return m;
  }

  friend bool operator==(const Matrix &a, const Matrix &b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.d_ == b.d_; }
  friend bool operator!=(const Matrix &a, const Matrix &b) { return !(a == b); }

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < r_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < c_; ++j)
        os << (j ? ", " : "") << (*this)(i, j);
      os << "]";
    }
    os << "]";
    return os.str();
  }

private:
  void check_same(const Matrix &o) const {
    if (r_ != o.r_ || c_ != o.c_)
      fail(ErrorKind::InvalidInput, "matrix dimensions do not match");
  }
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> d_;
};

using ScalarMatrix = Matrix<Scalar>;
using RatMatrix = Matrix<RatFunc>;
using SeriesMatrix = Matrix<Series>;

// Pivot preference during elimination: smaller is simpler.
inline long pivot_cost(const Scalar &s) { return s.is_rational() ? 0 : 1 + static_cast<long>(s.numerator().terms().size()); }
inline long pivot_cost(const RatFunc &f) { return f.num().degree() + f.den().degree(); }

// Row echelon reduction in place; returns pivot columns.
template <class T> std::vector<std::size_t> row_reduce(Matrix<T> &m, bool reduced) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::optional<std::size_t> best;
    for (std::size_t i = row; i < m.rows(); ++i)
      if (!m(i, col).is_zero() && (!best || pivot_cost(m(i, col)) < pivot_cost(m(*best, col))))
        best = i;
    if (!best)
      continue;
    m.swap_rows(row, *best);
    T inv = T(1) / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j)
      m(row, j) = m(row, j) * inv;
    for (std::size_t i = reduced ? 0 : row + 1; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero())
        continue;
      T f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero())
          m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class T> T determinant(Matrix<T> m) {
  if (!m.is_square())
    fail(ErrorKind::InvalidInput, "determinant of a non-square matrix");
  T det(1);
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::optional<std::size_t> best;
    for (std::size_t i = col; i < n; ++i)
      if (!m(i, col).is_zero() && (!best || pivot_cost(m(i, col)) < pivot_cost(m(*best, col))))
        best = i;
    if (!best)
      return T();
    if (*best != col) {
      m.swap_rows(col, *best);
      det = -det;
    }
    det *= m(col, col);
    T inv = T(1) / m(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (m(i, col).is_zero())
        continue;
      T f = m(i, col) * inv;
      for (std::size_t j = col; j < n; ++j)
        if (!m(col, j).is_zero())
          m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

template <class T> std::size_t rank(Matrix<T> m) { return row_reduce(m, false).size(); }

template <class T> Matrix<T> inverse(const Matrix<T> &m) {
  if (!m.is_square())
    fail(ErrorKind::InvalidInput, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix<T> aug(n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, Matrix<T>::identity(n));
  auto piv = row_reduce(aug, true);
  if (piv.size() < n || piv.back() >= n)
    fail(ErrorKind::NotInvertible, "matrix is not invertible: det = 0");
  return aug.block(0, n, n, n);
}

// Basis of {v : m v = 0}, each vector as an n x 1 matrix.
template <class T> std::vector<Matrix<T>> nullspace(Matrix<T> m) {
  auto piv = row_reduce(m, true);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : piv)
    is_pivot[p] = true;
  std::vector<Matrix<T>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free])
      continue;
    Matrix<T> v(m.cols(), 1);
    v(free, 0) = T(1);
    for (std::size_t k = 0; k < piv.size(); ++k)
      v(piv[k], 0) = -m(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Some solution of m x = b, if any.
template <class T> std::optional<Matrix<T>> solve_linear(const Matrix<T> &m, const Matrix<T> &b) {
  Matrix<T> aug(m.rows(), m.cols() + b.cols());
  aug.set_block(0, 0, m);
  aug.set_block(0, m.cols(), b);
  auto piv = row_reduce(aug, true);
  Matrix<T> x(m.cols(), b.cols());
  for (std::size_t k = 0; k < piv.size(); ++k) {
    if (piv[k] >= m.cols())
      return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j)
      x(piv[k], j) = aug(k, m.cols() + j);
  }
  return x;
}

// Entrywise helpers for matrices over RatFunc.
RatMatrix to_ratmatrix(const ScalarMatrix &m);
bool is_constant(const RatMatrix &m);
ScalarMatrix constant_part(const RatMatrix &m); // requires is_constant
SeriesMatrix expand_matrix(const RatMatrix &m, ExpansionPoint at, long order, long ramification = 1);

// Characteristic polynomial det(t I - m) (in the variable of Poly).
Poly charpoly(const ScalarMatrix &m);

// Eigenvalues with algebraic multiplicity, when the spectrum splits over
// the constants field (rational characteristic polynomial, or triangular).
std::vector<std::pair<Scalar, std::size_t>> eigenvalues(const ScalarMatrix &m);

} // namespace consys
