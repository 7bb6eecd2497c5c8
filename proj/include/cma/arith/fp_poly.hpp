#pragma once

// Polynomials over F_p (p < 2^63) and their factorization into
// irreducibles: squarefree decomposition, distinct-degree splitting, then
// equal-degree splitting (Cantor-Zassenhaus). Randomness is seeded from a
// hash of (f, p) so results are reproducible.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cma/arith/poly.hpp"

namespace cma {

class FpPoly {
 public:
  using u64 = std::uint64_t;

  explicit FpPoly(u64 p) : p_(p) {
    if (p < 2) throw InvalidArgument("exact_arith", "modulus must be >= 2");
  }
  FpPoly(u64 p, std::vector<u64> coeffs) : p_(p), c_(std::move(coeffs)) {
    if (p < 2) throw InvalidArgument("exact_arith", "modulus must be >= 2");
    for (auto& v : c_) v %= p_;
    trim();
  }
  /// Reduction of an integer polynomial.
  FpPoly(u64 p, const PolyZ& f) : FpPoly(p) {
    BigInt pp(static_cast<unsigned long>(p));
    for (const auto& v : f.coeffs()) {
      BigInt r;
      mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), pp.get_mpz_t());
      c_.push_back(r.get_ui());
    }
    trim();
  }

  static FpPoly constant(u64 p, u64 v) { return FpPoly(p, std::vector<u64>{v}); }
  static FpPoly x(u64 p) { return FpPoly(p, std::vector<u64>{0, 1}); }

  u64 modulus() const { return p_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  const std::vector<u64>& coeffs() const { return c_; }
  u64 coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  u64 leading() const { return c_.empty() ? 0 : c_.back(); }

  u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p_ ? s - p_ : s; }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
  u64 mul(u64 a, u64 b) const {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p_);
  }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1 % p_;
    while (e) {
      if (e & 1U) r = mul(r, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return r;
  }
  /// Inverse modulo p (p prime).
  u64 inv(u64 a) const {
    if (a % p_ == 0) throw InvalidArgument("exact_arith", "inverse of zero mod p");
    return pow(a, p_ - 2);
  }

  u64 eval(u64 x) const {
    u64 acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = add(mul(acc, x), *it);
    return acc;
  }

  FpPoly monic() const {
    if (is_zero()) throw InvalidArgument("exact_arith", "monic of the zero polynomial");
    const u64 il = inv(leading());
    std::vector<u64> c(c_);
    for (auto& v : c) v = mul(v, il);
    return FpPoly(p_, std::move(c));
  }

  FpPoly derivative() const {
    std::vector<u64> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(mul(c_[i], i % p_));
    return FpPoly(p_, std::move(d));
  }

  friend FpPoly operator+(const FpPoly& a, const FpPoly& b) {
    a.check_same(b);
    std::vector<u64> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.add(a.coeff(i), b.coeff(i));
    return FpPoly(a.p_, std::move(c));
  }
  friend FpPoly operator-(const FpPoly& a, const FpPoly& b) {
    a.check_same(b);
    std::vector<u64> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.sub(a.coeff(i), b.coeff(i));
    return FpPoly(a.p_, std::move(c));
  }
  friend FpPoly operator*(const FpPoly& a, const FpPoly& b) {
    a.check_same(b);
    if (a.is_zero() || b.is_zero()) return FpPoly(a.p_);
    std::vector<u64> c(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        c[i + j] = a.add(c[i + j], a.mul(a.c_[i], b.c_[j]));
    return FpPoly(a.p_, std::move(c));
  }
  friend bool operator==(const FpPoly& a, const FpPoly& b) {
    return a.p_ == b.p_ && a.c_ == b.c_;
  }
  /// Total order used to canonicalize factor lists: degree, then
  /// coefficients from the top.
  friend bool operator<(const FpPoly& a, const FpPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return std::lexicographical_compare(a.c_.rbegin(), a.c_.rend(), b.c_.rbegin(),
                                        b.c_.rend());
  }

  /// Euclidean division (p prime).
  std::pair<FpPoly, FpPoly> divmod(const FpPoly& g) const {
    check_same(g);
    if (g.is_zero()) throw InvalidArgument("exact_arith", "division by zero polynomial");
    std::vector<u64> r(c_);
    const int dg = g.degree();
    if (degree() < dg) return {FpPoly(p_), *this};
    std::vector<u64> q(degree() - dg + 1, 0);
    const u64 il = inv(g.leading());
    for (int k = degree() - dg; k >= 0; --k) {
      u64 t = mul(r[k + dg], il);
      q[k] = t;
      if (t == 0) continue;
      for (int j = 0; j <= dg; ++j) r[k + j] = sub(r[k + j], mul(t, g.c_[j]));
    }
    r.resize(dg);
    return {FpPoly(p_, std::move(q)), FpPoly(p_, std::move(r))};
  }
  FpPoly operator%(const FpPoly& g) const { return divmod(g).second; }
  FpPoly operator/(const FpPoly& g) const { return divmod(g).first; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  void check_same(const FpPoly& o) const {
    if (o.p_ != p_) throw InvalidArgument("exact_arith", "mixed moduli");
  }

  u64 p_;
  std::vector<u64> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
inline FpPoly gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : a.monic();
}

inline FpPoly powmod(FpPoly base, const BigInt& e, const FpPoly& m) {
  FpPoly r = FpPoly::constant(m.modulus(), 1) % m;
  base = base % m;
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = (r * r) % m;
    if (mpz_tstbit(e.get_mpz_t(), i)) r = (r * base) % m;
  }
  return r;
}

struct FactorMultiplicity {
  FpPoly factor;
  int multiplicity;
};

namespace detail {

inline std::uint64_t hash_poly(const FpPoly& f, std::uint64_t salt) {
  std::uint64_t h = 1469598103934665603ULL ^ salt;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFFU;
      h *= 1099511628211ULL;
    }
  };
  mix(f.modulus());
  for (auto v : f.coeffs()) mix(v);
  return h;
}

/// Polynomial whose coefficients at multiples of p are the coefficients of
/// the result: the p-th root of a polynomial with zero derivative.
inline FpPoly pth_root(const FpPoly& f) {
  const auto p = f.modulus();
  std::vector<std::uint64_t> c;
  for (std::size_t i = 0; i < f.coeffs().size(); i += p) c.push_back(f.coeffs()[i]);
  return FpPoly(p, std::move(c));
}

/// Squarefree decomposition of a monic polynomial: pairs (g_i, i) with
/// f = prod g_i^i and each g_i squarefree.
inline void squarefree_decompose(const FpPoly& f, int scale,
                                 std::vector<std::pair<FpPoly, int>>& out) {
  if (f.degree() < 1) return;
  FpPoly d = f.derivative();
  if (d.is_zero()) {
    squarefree_decompose(pth_root(f), scale * static_cast<int>(f.modulus()), out);
    return;
  }
  FpPoly c = gcd(f, d);
  FpPoly w = f / c;
  int i = 1;
  while (w.degree() > 0) {
    FpPoly y = gcd(w, c);
    FpPoly z = w / y;
    if (z.degree() > 0) out.emplace_back(z.monic(), i * scale);
    ++i;
    w = y;
    c = c / y;
  }
  if (c.degree() > 0)
    squarefree_decompose(pth_root(c).monic(), scale * static_cast<int>(f.modulus()), out);
}

/// Distinct-degree split of a squarefree monic polynomial: pairs
/// (product of all irreducible factors of degree d, d).
inline std::vector<std::pair<FpPoly, int>> distinct_degree(FpPoly f) {
  const auto p = f.modulus();
  std::vector<std::pair<FpPoly, int>> out;
  FpPoly h = FpPoly::x(p) % f;
  const BigInt pp(static_cast<unsigned long>(p));
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    h = powmod(h, pp, f);
    FpPoly g = gcd(h - FpPoly::x(p), f);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f.monic(), f.degree());
  return out;
}

/// Exhaustive splitting of a product of degree-d irreducibles: roots by
/// evaluation when d = 1, otherwise trial division by every monic
/// polynomial of degree d. Only used when random splitting gives up.
inline void exhaustive_equal_degree(const FpPoly& g, int d, std::vector<FpPoly>& out) {
  const auto p = g.modulus();
  if (g.degree() == d) {
    out.push_back(g.monic());
    return;
  }
  if (d == 1) {
    if (static_cast<double>(p) * g.degree() > 1e4)
      throw BudgetExceeded("exact_arith", "exhaustive root search too large");
    for (std::uint64_t a = 0; a < p; ++a)
      if (g.eval(a) == 0) out.push_back(FpPoly(p, std::vector<FpPoly::u64>{a == 0 ? 0 : p - a, 1}));
    return;
  }
  double count = 1;
  for (int i = 0; i < d; ++i) count *= static_cast<double>(p);
  if (count > 1e6)
    throw BudgetExceeded("exact_arith", "exhaustive factor search too large");
  std::vector<std::uint64_t> digits(d, 0);
  FpPoly rest = g;
  while (rest.degree() > d) {
    std::vector<std::uint64_t> c(digits);
    c.push_back(1);
    FpPoly cand(p, std::move(c));
    if ((rest % cand).is_zero()) {
      out.push_back(cand);
      rest = rest / cand;
      continue;
    }
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == p) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  out.push_back(rest.monic());
}

inline void equal_degree(const FpPoly& g, int d, std::mt19937_64& rng,
                         std::vector<FpPoly>& out) {
  if (g.degree() == d) {
    out.push_back(g.monic());
    return;
  }
  const auto p = g.modulus();
  constexpr int kMaxAttempts = 200;
  BigInt e = 0;
  if (p != 2) {
    e = BigInt(static_cast<unsigned long>(p));
    mpz_pow_ui(e.get_mpz_t(), e.get_mpz_t(), static_cast<unsigned long>(d));
    e = (e - 1) / 2;
  }
  std::uniform_int_distribution<std::uint64_t> coeff(0, p - 1);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<std::uint64_t> c(g.degree());
    for (auto& v : c) v = coeff(rng);
    FpPoly a(p, std::move(c));
    if (a.degree() < 1) continue;
    FpPoly b(p);
    if (p == 2) {
      // trace map a + a^2 + ... + a^(2^(dk-1)) over the full extension
      FpPoly t = a % g, acc = a % g;
      for (int i = 1; i < d; ++i) {
        t = (t * t) % g;
        acc = acc + t;
      }
      b = acc;
    } else {
      b = powmod(a, e, g) - FpPoly::constant(p, 1);
    }
    FpPoly h = gcd(b, g);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      equal_degree(h, d, rng, out);
      equal_degree(g / h, d, rng, out);
      return;
    }
  }
  exhaustive_equal_degree(g, d, out);
}

}  // namespace detail

/// Irreducible factorization of a nonzero polynomial over F_p, as monic
/// factors with multiplicities, sorted canonically. The leading coefficient
/// is dropped: the product of the factors is monic(f).
inline std::vector<FactorMultiplicity> factor_mod_p(const FpPoly& f) {
  if (f.is_zero()) throw InvalidArgument("exact_arith", "factorization of the zero polynomial");
  if (!is_prime(BigInt(static_cast<unsigned long>(f.modulus()))))
    throw InvalidArgument("exact_arith",
                          "modulus " + std::to_string(f.modulus()) + " is not prime");
  std::vector<std::pair<FpPoly, int>> sqf;
  detail::squarefree_decompose(f.monic(), 1, sqf);
  std::mt19937_64 rng(detail::hash_poly(f, 0x5eedULL));
  std::vector<FactorMultiplicity> out;
  for (const auto& [part, mult] : sqf) {
    for (const auto& [block, d] : detail::distinct_degree(part)) {
      std::vector<FpPoly> pieces;
      detail::equal_degree(block, d, rng, pieces);
      for (auto& q : pieces) out.push_back({std::move(q), mult});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.factor == b.factor) return a.multiplicity < b.multiplicity;
    return a.factor < b.factor;
  });
  // merge identical factors coming from different squarefree layers
  std::vector<FactorMultiplicity> merged;
  for (auto& fm : out) {
    if (!merged.empty() && merged.back().factor == fm.factor)
      merged.back().multiplicity += fm.multiplicity;
    else
      merged.push_back(std::move(fm));
  }
  return merged;
}

inline std::vector<FactorMultiplicity> factor_mod_p(const PolyZ& f, std::uint64_t p) {
  if (!is_prime(BigInt(static_cast<unsigned long>(p))))
    throw InvalidArgument("exact_arith", "modulus " + std::to_string(p) + " is not prime");
  return factor_mod_p(FpPoly(p, f));
}

/// Sorted degrees of the irreducible factors (with multiplicity).
inline std::vector<int> factor_degree_pattern(const std::vector<FactorMultiplicity>& fs) {
  std::vector<int> out;
  for (const auto& fm : fs)
    for (int i = 0; i < fm.multiplicity; ++i) out.push_back(fm.factor.degree());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cma
