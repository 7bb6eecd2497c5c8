#pragma once

// Integer linear algebra: echelon forms with unimodular transforms,
// integer kernels, Smith normal form.

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "cma/arith/matrix.hpp"

namespace cma {

using IntVector = std::vector<BigInt>;

struct EchelonResult {
  MatZ echelon;    // U * A, row echelon over Z
  MatZ transform;  // unimodular U
  std::size_t rank = 0;
};

/// Row echelon form over Z by extended-gcd row operations.
inline EchelonResult integer_row_echelon(const MatZ& a) {
  const std::size_t m = a.rows(), n = a.cols();
  MatZ h(a);
  MatZ u = MatZ::identity(m);
  auto combine = [&](MatZ& mat, std::size_t r1, std::size_t r2, const BigInt& s, const BigInt& t,
                     const BigInt& x, const BigInt& y) {
    // (r1, r2) <- (s r1 + t r2, x r1 + y r2)
    for (std::size_t j = 0; j < mat.cols(); ++j) {
      BigInt v1 = s * mat(r1, j) + t * mat(r2, j);
      BigInt v2 = x * mat(r1, j) + y * mat(r2, j);
      mat(r1, j) = v1;
      mat(r2, j) = v2;
    }
  };
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    for (std::size_t i = row + 1; i < m; ++i) {
      if (h(i, col) == 0) continue;
      BigInt g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h(row, col).get_mpz_t(),
                 h(i, col).get_mpz_t());
      BigInt x = -h(i, col) / g, y = h(row, col) / g;
      combine(h, row, i, s, t, x, y);
      combine(u, row, i, s, t, x, y);
    }
    if (h(row, col) == 0) continue;
    if (h(row, col) < 0) {
      for (std::size_t j = 0; j < n; ++j) h(row, j) = -h(row, j);
      for (std::size_t j = 0; j < m; ++j) u(row, j) = -u(row, j);
    }
    // reduce entries above the pivot into [0, pivot)
    for (std::size_t i = 0; i < row; ++i) {
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), h(row, col).get_mpz_t());
      if (q == 0) continue;
      for (std::size_t j = 0; j < n; ++j) h(i, j) -= q * h(row, j);
      for (std::size_t j = 0; j < m; ++j) u(i, j) -= q * u(row, j);
    }
    ++row;
  }
  return {std::move(h), std::move(u), row};
}

/// Z-basis of the lattice {v in Z^n : a v = 0}.
inline std::vector<IntVector> integer_kernel(const MatZ& a) {
  auto res = integer_row_echelon(a.transpose());
  std::vector<IntVector> basis;
  for (std::size_t i = res.rank; i < res.transform.rows(); ++i)
    basis.push_back(res.transform.row(i));
  return basis;
}

/// Hermite normal form (row style) of the lattice spanned by the rows.
inline MatZ hermite_normal_form(const MatZ& a) {
  auto res = integer_row_echelon(a);
  MatZ h(res.rank, a.cols());
  for (std::size_t i = 0; i < res.rank; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(i, j) = res.echelon(i, j);
  return h;
}

/// Invariant factors d_1 | d_2 | ... (nonzero ones only) of an integer
/// matrix.
inline std::vector<BigInt> smith_invariants(const MatZ& a) {
  MatZ m(a);
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<BigInt> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // pick the smallest nonzero entry as pivot
    bool found = false;
    std::size_t pi = 0, pj = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (m(i, j) != 0 && (!found || abs(m(i, j)) < abs(m(pi, pj)))) {
          found = true;
          pi = i;
          pj = j;
        }
    if (!found) break;
    for (std::size_t j = 0; j < cols; ++j) std::swap(m(t, j), m(pi, j));
    for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, t), m(i, pj));
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), m(i, t).get_mpz_t(), m(t, t).get_mpz_t());
        for (std::size_t j = t; j < cols; ++j) m(i, j) -= q * m(t, j);
        if (m(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), m(t, j).get_mpz_t(), m(t, t).get_mpz_t());
        for (std::size_t i = t; i < rows; ++i) m(i, j) -= q * m(i, t);
        if (m(t, j) != 0) clean = false;
      }
      if (!clean) {
        // move a smaller remainder into the pivot position
        std::size_t bi = t, bj = t;
        for (std::size_t i = t; i < rows; ++i)
          if (m(i, t) != 0 && abs(m(i, t)) < abs(m(bi, bj))) { bi = i; bj = t; }
        for (std::size_t j = t; j < cols; ++j)
          if (m(t, j) != 0 && abs(m(t, j)) < abs(m(bi, bj))) { bi = t; bj = j; }
        for (std::size_t j = 0; j < cols; ++j) std::swap(m(t, j), m(bi, j));
        for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, t), m(i, bj));
        continue;
      }
      // enforce divisibility of the remaining block by the pivot
      for (std::size_t i = t + 1; i < rows && clean; ++i)
        for (std::size_t j = t + 1; j < cols && clean; ++j)
          if (!mpz_divisible_p(m(i, j).get_mpz_t(), m(t, t).get_mpz_t())) {
            for (std::size_t k = t; k < cols; ++k) m(t, k) += m(i, k);
            clean = false;
          }
    }
    diag.push_back(abs(m(t, t)));
    ++t;
  }
  return diag;
}

/// Pairwise size reduction of a lattice basis: repeatedly subtract the
/// rounded projection of one vector onto another while the squared length
/// drops. Cheap and enough to make small coefficient boxes meaningful.
inline std::vector<IntVector> size_reduce(std::vector<IntVector> basis) {
  auto dot = [](const IntVector& a, const IntVector& b) {
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  bool changed = true;
  for (int round = 0; changed && round < 200; ++round) {
    changed = false;
    std::sort(basis.begin(), basis.end(),
              [&](const IntVector& a, const IntVector& b) { return dot(a, a) < dot(b, b); });
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (i == j) continue;
        BigInt nj = dot(basis[j], basis[j]);
        if (nj == 0) continue;
        BigRat mu(dot(basis[i], basis[j]), nj);
        mu.canonicalize();
        BigInt q = floor_rat(mu + BigRat(1, 2));
        if (q == 0) continue;
        IntVector cand(basis[i]);
        for (std::size_t k = 0; k < cand.size(); ++k) cand[k] -= q * basis[j][k];
        if (dot(cand, cand) < dot(basis[i], basis[i])) {
          basis[i] = std::move(cand);
          changed = true;
        }
      }
  }
  return basis;
}

}  // namespace cma
