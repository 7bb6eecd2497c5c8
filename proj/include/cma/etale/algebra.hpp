#pragma once

// Etale algebras E = E_1 x ... x E_l over Q, each E_k = Q[x]/(f_k), with a
// fixed Z-basis of an order. Elements are stored by their coordinates in
// that basis.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cma/arith/matrix.hpp"
#include "cma/arith/poly.hpp"
#include "cma/etale/irreducibility.hpp"

namespace cma {

struct AlgebraElement {
  std::vector<BigRat> coords;

  AlgebraElement() = default;
  explicit AlgebraElement(std::vector<BigRat> c) : coords(std::move(c)) {}
  AlgebraElement(std::initializer_list<long> c) {
    for (long v : c) coords.emplace_back(v);
  }

  std::size_t size() const { return coords.size(); }
  const BigRat& operator[](std::size_t i) const { return coords[i]; }
  BigRat& operator[](std::size_t i) { return coords[i]; }
  bool is_zero() const {
    for (const auto& c : coords)
      if (c != 0) return false;
    return true;
  }

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.coords == b.coords;
  }
  friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }
  friend bool operator<(const AlgebraElement& a, const AlgebraElement& b) {
    return a.coords < b.coords;
  }
};

/// Failure witness of is_order: b_i * b_j (or 1 when i = j = 0) has a
/// non-integral coordinate k. Indices are 1-based.
struct OrderWitness {
  std::size_t i = 0, j = 0, k = 0;
  BigRat value;
};

struct OrderCheck {
  bool ok = false;
  std::optional<OrderWitness> witness;
  explicit operator bool() const { return ok; }
};

class EtaleAlgebra {
 public:
  /// factors: monic irreducible f_k; order_basis: rows are the basis
  /// elements in the concatenated power bases.
  EtaleAlgebra(std::vector<PolyZ> factors, MatQ order_basis)
      : factors_(std::move(factors)), basis_(std::move(order_basis)) {
    if (factors_.empty()) throw InvalidArgument("etale_algebra", "no factors");
    n_ = 0;
    for (const auto& f : factors_) {
      if (f.degree() < 1) throw InvalidArgument("etale_algebra", "factor of degree < 1");
      auto irr = decide_irreducible(f);
      if (!irr.decided)
        throw Unsupported("etale_algebra", "cannot certify irreducibility of " + pretty(f));
      if (!irr.irreducible)
        throw InvalidArgument("etale_algebra", pretty(f) + " is reducible (" + irr.reason + ")");
      offsets_.push_back(n_);
      n_ += static_cast<std::size_t>(f.degree());
    }
    if (basis_.rows() != n_ || basis_.cols() != n_)
      throw InvalidArgument("etale_algebra", "order basis must be " + std::to_string(n_) + "x" +
                                                 std::to_string(n_));
    if (determinant(basis_) == 0) throw InvalidArgument("etale_algebra", "singular order basis");
    to_order_ = cma::inverse(basis_.transpose());
    build_structure_constants();
  }

  /// Power basis of the given factors.
  static EtaleAlgebra power_basis(std::vector<PolyZ> factors) {
    std::size_t n = 0;
    for (const auto& f : factors) n += static_cast<std::size_t>(std::max(f.degree(), 0));
    return EtaleAlgebra(std::move(factors), MatQ::identity(n));
  }

  std::size_t degree() const { return n_; }
  std::size_t num_factors() const { return factors_.size(); }
  const std::vector<PolyZ>& factors() const { return factors_; }
  const PolyZ& factor(std::size_t k) const { return factors_.at(k); }
  std::size_t factor_offset(std::size_t k) const { return offsets_.at(k); }
  std::size_t factor_degree(std::size_t k) const {
    return static_cast<std::size_t>(factors_.at(k).degree());
  }
  const MatQ& order_basis() const { return basis_; }
  bool is_field() const { return factors_.size() == 1; }

  /// Structure constants: coordinates of b_i * b_j.
  const std::vector<BigRat>& product_coords(std::size_t i, std::size_t j) const {
    return mult_[i * n_ + j];
  }

  // --- coordinate changes ---------------------------------------------

  std::vector<BigRat> to_power(const AlgebraElement& a) const {
    check(a);
    return basis_.transpose() * a.coords;
  }
  AlgebraElement from_power(const std::vector<BigRat>& p) const {
    if (p.size() != n_) throw InvalidArgument("etale_algebra", "power coordinate length mismatch");
    return AlgebraElement(to_order_ * p);
  }

  // --- distinguished elements -----------------------------------------

  AlgebraElement zero() const { return AlgebraElement(std::vector<BigRat>(n_, BigRat(0))); }
  AlgebraElement one() const {
    std::vector<BigRat> p(n_, BigRat(0));
    for (auto off : offsets_) p[off] = 1;
    return from_power(p);
  }
  AlgebraElement scalar(const BigRat& c) const { return scale(c, one()); }
  /// Class of x in factor k, zero in the other factors.
  AlgebraElement generator(std::size_t k) const {
    std::vector<BigRat> p(n_, BigRat(0));
    const PolyZ& f = factors_.at(k);
    if (f.degree() == 1)
      p[offsets_[k]] = BigRat(-f.coeff(0));
    else
      p[offsets_[k] + 1] = 1;
    return from_power(p);
  }
  /// Class of x when E is a field.
  AlgebraElement x() const { return generator(0); }
  /// The idempotent of factor k.
  AlgebraElement idempotent(std::size_t k) const {
    std::vector<BigRat> p(n_, BigRat(0));
    p[offsets_.at(k)] = 1;
    return from_power(p);
  }
  /// Basis element b_i (0-based).
  AlgebraElement basis_element(std::size_t i) const {
    std::vector<BigRat> c(n_, BigRat(0));
    c.at(i) = 1;
    return AlgebraElement(std::move(c));
  }

  // --- arithmetic -----------------------------------------------------

  AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) const {
    check(a);
    check(b);
    AlgebraElement r(a);
    for (std::size_t i = 0; i < n_; ++i) r.coords[i] += b.coords[i];
    return r;
  }
  AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) const {
    return add(a, scale(BigRat(-1), b));
  }
  AlgebraElement scale(const BigRat& c, const AlgebraElement& a) const {
    check(a);
    AlgebraElement r(a);
    for (auto& v : r.coords) v *= c;
    return r;
  }
  AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) const {
    check(a);
    check(b);
    std::vector<BigRat> r(n_, BigRat(0));
    for (std::size_t i = 0; i < n_; ++i) {
      if (a.coords[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (b.coords[j] == 0) continue;
        const BigRat ab = a.coords[i] * b.coords[j];
        const auto& c = mult_[i * n_ + j];
        for (std::size_t k = 0; k < n_; ++k)
          if (c[k] != 0) r[k] += ab * c[k];
      }
    }
    return AlgebraElement(std::move(r));
  }
  /// Matrix of multiplication by a: column j holds the coordinates of a*b_j.
  MatQ regular_rep(const AlgebraElement& a) const {
    check(a);
    MatQ m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (a.coords[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        const auto& c = mult_[i * n_ + j];
        for (std::size_t k = 0; k < n_; ++k)
          if (c[k] != 0) m(k, j) += a.coords[i] * c[k];
      }
    }
    return m;
  }
  BigRat norm(const AlgebraElement& a) const { return determinant(regular_rep(a)); }
  BigRat trace(const AlgebraElement& a) const { return regular_rep(a).trace(); }

  bool is_unit(const AlgebraElement& a) const { return norm(a) != 0; }
  AlgebraElement inverse(const AlgebraElement& a) const {
    auto sol = solve(regular_rep(a), one().coords);
    if (!sol) throw InvalidArgument("etale_algebra", "element is a zero divisor");
    return AlgebraElement(std::move(*sol));
  }
  AlgebraElement pow(const AlgebraElement& a, long e) const {
    AlgebraElement base = e < 0 ? inverse(a) : a;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    AlgebraElement r = one();
    while (k > 0) {
      if (k & 1UL) r = mul(r, base);
      base = mul(base, base);
      k >>= 1U;
    }
    return r;
  }
  /// Element with the given multiplication matrix, if it is one.
  std::optional<AlgebraElement> from_regular_rep(const MatQ& m) const {
    if (m.rows() != n_ || m.cols() != n_) return std::nullopt;
    AlgebraElement a(m * one().coords);
    if (regular_rep(a) == m) return a;
    return std::nullopt;
  }

  bool element_is_integral(const AlgebraElement& a) const {
    check(a);
    for (const auto& c : a.coords)
      if (!is_integer(c)) return false;
    return true;
  }

  OrderCheck is_order() const {
    const auto u = one();
    for (std::size_t k = 0; k < n_; ++k)
      if (!is_integer(u.coords[k])) return {false, OrderWitness{0, 0, k + 1, u.coords[k]}};
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) {
        const auto& c = mult_[i * n_ + j];
        for (std::size_t k = 0; k < n_; ++k)
          if (!is_integer(c[k])) return {false, OrderWitness{i + 1, j + 1, k + 1, c[k]}};
      }
    return {true, std::nullopt};
  }

  /// The same order presented in another Z-basis: new_basis_i = sum_j
  /// change(i, j) old_basis_j with change in GL_n(Z).
  EtaleAlgebra rebased(const MatZ& change) const {
    if (abs(determinant(change)) != 1)
      throw InvalidArgument("etale_algebra", "basis change not in GL_n(Z)");
    return EtaleAlgebra(factors_, to_rational(change) * basis_);
  }

 private:
  void check(const AlgebraElement& a) const {
    if (a.coords.size() != n_)
      throw InvalidArgument("etale_algebra", "element has " + std::to_string(a.coords.size()) +
                                                 " coordinates, expected " + std::to_string(n_));
  }

  /// Product of power-coordinate vectors.
  std::vector<BigRat> power_mul(const std::vector<BigRat>& a, const std::vector<BigRat>& b) const {
    std::vector<BigRat> r(n_, BigRat(0));
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      const std::size_t off = offsets_[k], d = factor_degree(k);
      std::vector<BigRat> pa(a.begin() + off, a.begin() + off + d);
      std::vector<BigRat> pb(b.begin() + off, b.begin() + off + d);
      PolyQ prod = rem(PolyQ(pa) * PolyQ(pb), to_rational(factors_[k]));
      for (std::size_t j = 0; j < d; ++j) r[off + j] = prod.coeff(j);
    }
    return r;
  }

  void build_structure_constants() {
    std::vector<std::vector<BigRat>> rows(n_);
    for (std::size_t i = 0; i < n_; ++i) rows[i] = basis_.row(i);
    mult_.assign(n_ * n_, {});
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) {
        mult_[i * n_ + j] = to_order_ * power_mul(rows[i], rows[j]);
        mult_[j * n_ + i] = mult_[i * n_ + j];
      }
  }

  std::vector<PolyZ> factors_;
  MatQ basis_;
  MatQ to_order_;
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<BigRat>> mult_;
};

using EtaleAlgebraDatum = EtaleAlgebra;

// Free-function forms of the element operations.

inline MatQ regular_rep(const EtaleAlgebra& e, const AlgebraElement& a) { return e.regular_rep(a); }
inline BigRat norm(const EtaleAlgebra& e, const AlgebraElement& a) { return e.norm(a); }
inline BigRat trace(const EtaleAlgebra& e, const AlgebraElement& a) { return e.trace(a); }
inline OrderCheck is_order(const EtaleAlgebra& e) { return e.is_order(); }
inline bool element_is_integral(const EtaleAlgebra& e, const AlgebraElement& a) {
  return e.element_is_integral(a);
}

}  // namespace cma
