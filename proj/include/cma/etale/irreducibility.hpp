#pragma once

// Irreducibility of monic integer polynomials over Q. Degrees <= 4 are
// decided exactly; higher degrees need a certificate from factorization
// patterns modulo several primes, otherwise the input is rejected.

#include <set>
#include <string>
#include <vector>

#include "cma/arith/fp_poly.hpp"
#include "cma/arith/poly.hpp"

namespace cma {

struct IrreducibilityResult {
  bool decided = false;
  bool irreducible = false;
  std::string reason;
};

namespace detail {

/// Monic integer quartic splits as a product of two integer quadratics?
inline bool has_quadratic_factorization(const PolyZ& f) {
  const BigInt a = f.coeff(3), b = f.coeff(2), c = f.coeff(1), d = f.coeff(0);
  if (d == 0) return false;  // x divides f; caught by the root test
  for (const BigInt& q0 : divisors(d)) {
    for (const BigInt& q : {q0, BigInt(-q0)}) {
      const BigInt s = d / q;
      // x^2 + p x + q times x^2 + r x + s with p + r = a, p r = b - q - s
      const BigInt prod = b - q - s;
      const BigInt disc = a * a - 4 * prod;
      if (disc < 0 || !is_square_integer(disc)) continue;
      const BigInt root = isqrt(disc);
      for (const BigInt& two_p : {BigInt(a + root), BigInt(a - root)}) {
        if (!mpz_even_p(two_p.get_mpz_t())) continue;
        const BigInt p = two_p / 2, r = a - p;
        if (p * s + q * r == c) return true;
      }
    }
  }
  return false;
}

/// Degrees d such that f could have a factor of degree d over Q, given the
/// degree pattern of f modulo p (subset sums of the pattern).
inline std::set<int> possible_factor_degrees(const std::vector<int>& pattern) {
  std::set<int> sums{0};
  for (int d : pattern) {
    std::set<int> next(sums);
    for (int s : sums) next.insert(s + d);
    sums = std::move(next);
  }
  return sums;
}

}  // namespace detail

inline IrreducibilityResult decide_irreducible(const PolyZ& f, int max_primes = 60) {
  if (f.is_zero()) throw InvalidArgument("etale_algebra", "zero polynomial");
  if (!f.is_monic()) throw InvalidArgument("etale_algebra", "defining polynomial must be monic");
  const int n = f.degree();
  if (n < 1) return {true, false, "constant polynomial"};
  if (n == 1) return {true, true, "linear"};
  if (poly_gcd(to_rational(f), to_rational(f).derivative()).degree() > 0)
    return {true, false, "not squarefree"};
  if (!rational_roots(f).empty()) return {true, false, "has a rational root"};
  if (n <= 3) return {true, true, "no rational root"};
  if (n == 4) {
    if (detail::has_quadratic_factorization(f)) return {true, false, "product of two quadratics"};
    return {true, true, "no rational root and no quadratic factorization"};
  }
  const BigInt disc = discriminant(f);
  std::set<int> possible;
  for (int d = 0; d <= n; ++d) possible.insert(d);
  int used = 0;
  for (auto p : primes_below(2000)) {
    if (used >= max_primes) break;
    if (mpz_divisible_ui_p(disc.get_mpz_t(), p)) continue;
    ++used;
    std::vector<int> pattern;
    for (const auto& fm : factor_mod_p(f, p)) pattern.push_back(fm.factor.degree());
    auto sums = detail::possible_factor_degrees(pattern);
    std::set<int> both;
    for (int d : possible)
      if (sums.count(d)) both.insert(d);
    possible = std::move(both);
    if (possible.size() == 2)
      return {true, true, "mod-p degree patterns exclude every proper factor degree"};
  }
  return {false, false, "no mod-p certificate found"};
}

}  // namespace cma
