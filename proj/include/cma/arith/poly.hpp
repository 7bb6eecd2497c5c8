#pragma once

// Dense univariate polynomials over Z (BigInt) and Q (BigRat).
// Coefficients are stored in ascending degree; the zero polynomial has no
// coefficients and degree -1.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cma/arith/bigint.hpp"

namespace cma {

template <class C>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<C> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<long> coeffs) {
    for (long v : coeffs) c_.emplace_back(v);
    trim();
  }

  static Poly constant(const C& v) { return Poly(std::vector<C>{v}); }
  static Poly monomial(const C& v, std::size_t k) {
    std::vector<C> c(k + 1, C(0));
    c[k] = v;
    return Poly(std::move(c));
  }
  static Poly x() { return monomial(C(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<C>& coeffs() const { return c_; }

  C coeff(std::size_t i) const { return i < c_.size() ? c_[i] : C(0); }
  const C& leading() const {
    if (c_.empty()) throw InvalidArgument("exact_arith", "leading coefficient of zero");
    return c_.back();
  }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  template <class T>
  T eval(const T& x) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + T(*it);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<C> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return Poly(std::move(d));
  }

  Poly operator-() const {
    std::vector<C> c(c_);
    for (auto& v : c) v = -v;
    return Poly(std::move(c));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<C> c(std::max(a.c_.size(), b.c_.size()), C(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<C> c(a.c_.size() + b.c_.size() - 1, C(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend Poly operator*(const C& s, const Poly& a) {
    std::vector<C> c(a.c_);
    for (auto& v : c) v *= s;
    return Poly(std::move(c));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly pow(unsigned k) const {
    Poly r = constant(C(1)), b = *this;
    while (k) {
      if (k & 1U) r *= b;
      b *= b;
      k >>= 1U;
    }
    return r;
  }

  /// Composition this(g).
  Poly compose(const Poly& g) const {
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * g + constant(*it);
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<C> c_;
};

using PolyZ = Poly<BigInt>;
using PolyQ = Poly<BigRat>;

inline PolyQ to_rational(const PolyZ& f) {
  std::vector<BigRat> c;
  c.reserve(f.coeffs().size());
  for (const auto& v : f.coeffs()) c.emplace_back(v);
  return PolyQ(std::move(c));
}

/// Integer polynomial with coprime coefficients and positive leading
/// coefficient, proportional to f.
inline PolyZ primitive_part(const PolyQ& f) {
  if (f.is_zero()) throw InvalidArgument("exact_arith", "primitive part of zero");
  BigInt l = 1;
  for (const auto& v : f.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  std::vector<BigInt> c;
  BigInt g = 0;
  for (const auto& v : f.coeffs()) {
    BigRat w = v * l;
    c.push_back(w.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w.get_num_mpz_t());
  }
  if (f.leading() < 0) g = -g;
  for (auto& v : c) v /= g;
  return PolyZ(std::move(c));
}

inline bool has_integer_coeffs(const PolyQ& f) {
  return std::all_of(f.coeffs().begin(), f.coeffs().end(),
                     [](const BigRat& v) { return is_integer(v); });
}

inline PolyZ to_integer(const PolyQ& f) {
  if (!has_integer_coeffs(f))
    throw InvalidArgument("exact_arith", "polynomial has non-integral coefficients");
  std::vector<BigInt> c;
  for (const auto& v : f.coeffs()) c.push_back(v.get_num());
  return PolyZ(std::move(c));
}

inline PolyQ monic(const PolyQ& f) {
  if (f.is_zero()) throw InvalidArgument("exact_arith", "monic of the zero polynomial");
  return BigRat(1) / f.leading() * f;
}

/// Euclidean division over Q: f = q*g + r with deg r < deg g.
inline std::pair<PolyQ, PolyQ> divmod(const PolyQ& f, const PolyQ& g) {
  if (g.is_zero()) throw InvalidArgument("exact_arith", "division by the zero polynomial");
  std::vector<BigRat> r = f.coeffs();
  const int dg = g.degree();
  if (f.degree() < dg) return {PolyQ(), f};
  std::vector<BigRat> q(f.degree() - dg + 1, BigRat(0));
  const BigRat inv_lead = BigRat(1) / g.leading();
  for (int k = f.degree() - dg; k >= 0; --k) {
    BigRat t = r[k + dg] * inv_lead;
    q[k] = t;
    if (t == 0) continue;
    for (int j = 0; j <= dg; ++j) r[k + j] -= t * g.coeffs()[j];
  }
  r.resize(dg);
  return {PolyQ(std::move(q)), PolyQ(std::move(r))};
}

inline PolyQ rem(const PolyQ& f, const PolyQ& g) { return divmod(f, g).second; }

/// Monic gcd. gcd(f, 0) = monic(f); gcd(0, 0) is rejected.
inline PolyQ poly_gcd(PolyQ a, PolyQ b) {
  if (a.is_zero() && b.is_zero())
    throw InvalidArgument("exact_arith", "gcd of two zero polynomials");
  while (!b.is_zero()) {
    PolyQ r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

/// f / gcd(f, f'), monic.
inline PolyQ squarefree_part(const PolyQ& f) {
  if (f.is_zero()) throw InvalidArgument("exact_arith", "squarefree part of zero");
  if (f.degree() == 0) return PolyQ::constant(BigRat(1));
  return monic(divmod(f, poly_gcd(f, f.derivative())).first);
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination. Kept here so the resultant does not depend on matrix.hpp.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = t;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Res(f, g) as the Sylvester determinant.
inline BigInt resultant(const PolyZ& f, const PolyZ& g) {
  if (f.is_zero() || g.is_zero()) return 0;
  const int m = f.degree(), n = g.degree();
  if (m == 0 && n == 0) return 1;
  const std::size_t size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<BigInt>> s(size, std::vector<BigInt>(size, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s[i][i + j] = f.coeffs()[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s[n + i][i + j] = g.coeffs()[n - j];
  return bareiss_determinant(std::move(s));
}

/// disc(f) = (-1)^{d(d-1)/2} Res(f, f') for monic f of degree >= 1.
inline BigInt discriminant(const PolyZ& f) {
  if (f.degree() < 1) throw InvalidArgument("exact_arith", "discriminant needs degree >= 1");
  if (!f.is_monic()) throw InvalidArgument("exact_arith", "discriminant needs a monic polynomial");
  const int d = f.degree();
  if (d == 1) return 1;
  BigInt r = resultant(f, f.derivative());
  return ((d * (d - 1) / 2) % 2 == 0) ? r : BigInt(-r);
}

/// Integer roots of a monic integer polynomial (rational root test).
inline std::vector<BigInt> integer_roots(const PolyZ& f) {
  if (f.is_zero()) throw InvalidArgument("exact_arith", "roots of the zero polynomial");
  std::vector<BigInt> roots;
  std::size_t shift = 0;
  while (shift < f.coeffs().size() && f.coeffs()[shift] == 0) ++shift;
  if (shift > 0) roots.emplace_back(0);
  if (static_cast<int>(shift) == f.degree()) return roots;
  const BigInt& c0 = f.coeffs()[shift];
  for (const BigInt& d : divisors(c0)) {
    for (const BigInt& cand : {BigInt(d), BigInt(-d)})
      if (f.eval(cand) == 0) roots.push_back(cand);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Rational roots of an integer polynomial (any leading coefficient).
inline std::vector<BigRat> rational_roots(const PolyZ& f) {
  if (f.is_zero()) throw InvalidArgument("exact_arith", "roots of the zero polynomial");
  std::vector<BigRat> roots;
  std::size_t shift = 0;
  while (shift < f.coeffs().size() && f.coeffs()[shift] == 0) ++shift;
  if (shift > 0) roots.emplace_back(0);
  if (static_cast<int>(shift) == f.degree()) return roots;
  PolyQ fq = to_rational(f);
  for (const BigInt& a : divisors(f.coeffs()[shift]))
    for (const BigInt& b : divisors(f.leading()))
      for (const BigRat& cand : {make_rat(a, b), make_rat(-a, b)})
        if (fq.eval(cand) == 0 &&
            std::find(roots.begin(), roots.end(), cand) == roots.end())
          roots.push_back(cand);
  std::sort(roots.begin(), roots.end());
  return roots;
}

template <class C>
std::vector<std::string> to_strings(const Poly<C>& f) {
  std::vector<std::string> out;
  for (const auto& v : f.coeffs()) out.push_back(to_string(v));
  return out;
}

inline PolyZ polyz_from_strings(const std::vector<std::string>& s) {
  std::vector<BigInt> c;
  for (const auto& v : s) c.push_back(parse_integer(v));
  return PolyZ(std::move(c));
}

/// Human-readable form, e.g. "x^3 + x - 1".
template <class C>
std::string pretty(const Poly<C>& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (int k = f.degree(); k >= 0; --k) {
    const C& c = f.coeffs()[k];
    if (c == 0) continue;
    const bool neg = c < 0;
    C mag = neg ? C(-c) : c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (k == 0 || mag != 1) out += to_string(mag);
    if (k >= 1) out += "x";
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out;
}

}  // namespace cma
