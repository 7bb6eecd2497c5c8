#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cma/arith/poly.hpp"

namespace cma {

/// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    for (const auto& row : rows) {
      if (row.size() != c_) throw InvalidArgument("exact_arith", "ragged matrix literal");
      for (long v : row) a_.emplace_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  static Matrix scalar(std::size_t n, const T& s) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.r_; ++i) {
      if (rows[i].size() != m.c_) throw InvalidArgument("exact_arith", "ragged matrix rows");
      for (std::size_t j = 0; j < m.c_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static Matrix from_columns(const std::vector<std::vector<T>>& cols) {
    return from_rows(cols).transpose();
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool is_square() const { return r_ == c_; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(a_.begin() + i * c_, a_.begin() + (i + 1) * c_);
  }
  std::vector<T> column(std::size_t j) const {
    std::vector<T> v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  Matrix transpose() const {
    Matrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_shape(b);
    Matrix m(a);
    for (std::size_t k = 0; k < m.a_.size(); ++k) m.a_[k] += b.a_[k];
    return m;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_shape(b);
    Matrix m(a);
    for (std::size_t k = 0; k < m.a_.size(); ++k) m.a_[k] -= b.a_[k];
    return m;
  }
  Matrix operator-() const {
    Matrix m(*this);
    for (auto& v : m.a_) v = -v;
    return m;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw InvalidArgument("exact_arith", "matrix shape mismatch in product");
    Matrix m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.c_; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }
  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix m(a);
    for (auto& v : m.a_) v *= s;
    return m;
  }
  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& x) {
    if (a.c_ != x.size()) throw InvalidArgument("exact_arith", "matrix-vector shape mismatch");
    std::vector<T> y(a.r_, T(0));
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t j = 0; j < a.c_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }

  const std::vector<T>& data() const { return a_; }

  T trace() const {
    T t(0);
    for (std::size_t i = 0; i < std::min(r_, c_); ++i) t += (*this)(i, i);
    return t;
  }

 private:
  void check_shape(const Matrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw InvalidArgument("exact_arith", "matrix shape mismatch");
  }
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> a_;
};

using MatQ = Matrix<BigRat>;
using MatZ = Matrix<BigInt>;

inline MatQ to_rational(const MatZ& m) {
  MatQ q(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = m(i, j);
  return q;
}

inline bool is_integral(const MatQ& m) {
  for (const auto& v : m.data())
    if (!is_integer(v)) return false;
  return true;
}

inline MatZ to_integer(const MatQ& m) {
  if (!is_integral(m)) throw InvalidArgument("exact_arith", "matrix has non-integral entries");
  MatZ z(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) z(i, j) = m(i, j).get_num();
  return z;
}

/// True iff every entry lies in Z[1/S] (denominators are S-smooth).
inline bool is_s_integral(const BigRat& q, const std::vector<BigInt>& primes) {
  BigInt d = q.get_den();
  for (const auto& p : primes)
    while (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) d /= p;
  return d == 1;
}

inline bool is_s_integral(const MatQ& m, const std::vector<BigInt>& primes) {
  for (const auto& v : m.data())
    if (!is_s_integral(v, primes)) return false;
  return true;
}

/// True iff q = +-prod p^k over p in primes (a unit of Z[1/S]).
inline bool is_s_unit(const BigRat& q, const std::vector<BigInt>& primes) {
  if (q == 0) return false;
  auto smooth = [&](BigInt n) {
    n = abs(n);
    for (const auto& p : primes)
      while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) n /= p;
    return n == 1;
  };
  return smooth(q.get_num()) && smooth(q.get_den());
}

namespace detail {

/// Row echelon form over Q in place; returns pivot columns and the
/// determinant sign/scale bookkeeping through `det` when square.
inline std::vector<std::size_t> row_reduce(MatQ& m, BigRat* det = nullptr, bool reduced = false) {
  std::vector<std::size_t> pivots;
  BigRat d = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
      d = -d;
    }
    const BigRat p = m(row, col);
    d *= p;
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) /= p;
    for (std::size_t i = reduced ? 0 : row + 1; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const BigRat f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  if (det) *det = (pivots.size() == m.rows() && m.is_square()) ? d : BigRat(0);
  return pivots;
}

}  // namespace detail

inline BigRat determinant(const MatQ& m) {
  if (!m.is_square()) throw InvalidArgument("exact_arith", "determinant of a non-square matrix");
  if (m.rows() == 0) return 1;
  MatQ w(m);
  BigRat d;
  detail::row_reduce(w, &d);
  return d;
}

inline BigInt determinant(const MatZ& m) {
  if (!m.is_square()) throw InvalidArgument("exact_arith", "determinant of a non-square matrix");
  std::vector<std::vector<BigInt>> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return bareiss_determinant(std::move(rows));
}

inline std::size_t rank(const MatQ& m) {
  MatQ w(m);
  return detail::row_reduce(w).size();
}

/// Inverse over Q; throws on a singular matrix.
inline MatQ inverse(const MatQ& m) {
  if (!m.is_square()) throw InvalidArgument("exact_arith", "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  MatQ aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = detail::row_reduce(aug, nullptr, true);
  if (piv.size() < n || piv[n - 1] != n - 1)
    throw InvalidArgument("exact_arith", "singular matrix");
  MatQ inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// Basis (as columns) of the right kernel {x : m x = 0} over Q.
inline std::vector<std::vector<BigRat>> kernel(const MatQ& m) {
  MatQ w(m);
  auto piv = detail::row_reduce(w, nullptr, true);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<std::vector<BigRat>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<BigRat> v(m.cols(), BigRat(0));
    v[free] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -w(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solution of m x = b, or nullopt when inconsistent. Returns one
/// particular solution (free variables zero).
inline std::optional<std::vector<BigRat>> solve(const MatQ& m, const std::vector<BigRat>& b) {
  if (b.size() != m.rows()) throw InvalidArgument("exact_arith", "solve shape mismatch");
  MatQ aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto piv = detail::row_reduce(aug, nullptr, true);
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  std::vector<BigRat> x(m.cols(), BigRat(0));
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, m.cols());
  return x;
}

/// Characteristic polynomial det(xI - m) by Faddeev-LeVerrier.
inline PolyQ charpoly(const MatQ& a) {
  if (!a.is_square()) throw InvalidArgument("exact_arith", "charpoly of a non-square matrix");
  const std::size_t n = a.rows();
  std::vector<BigRat> c(n + 1, BigRat(0));
  c[n] = 1;
  MatQ m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + MatQ::scalar(n, c[n - k + 1]);
    MatQ am = a * m;
    c[n - k] = -am.trace() / BigRat(static_cast<long>(k));
  }
  return PolyQ(std::move(c));
}

template <class T>
Matrix<T> matrix_power(const Matrix<T>& m, long k) {
  Matrix<T> r = Matrix<T>::identity(m.rows()), b = m;
  while (k > 0) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

/// Block-diagonal matrix diag(a, b).
template <class T>
Matrix<T> block_diagonal(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

}  // namespace cma
