#pragma once

// Arbitrary precision integers and rationals (GMP backed) plus the small
// number-theoretic helpers the rest of the library leans on.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "cma/error.hpp"

namespace cma {

using BigInt = mpz_class;
using BigRat = mpq_class;  // always canonical: lowest terms, denominator > 0

inline BigRat make_rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InvalidArgument("exact_arith", "zero denominator");
  BigRat r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const BigRat& q) { return q.get_den() == 1; }

inline BigInt floor_rat(const BigRat& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline BigInt ceil_rat(const BigRat& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

/// Parses "p", "-p" or "p/q" (q != 0). Whitespace is not accepted.
inline BigRat parse_rational(std::string_view text) {
  auto bad = [&] {
    return InvalidArgument("exact_arith",
                           "malformed rational '" + std::string(text) + "'");
  };
  auto valid_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!valid_int(num)) throw bad();
  BigInt n(std::string(num[0] == '+' ? num.substr(1) : num), 10);
  if (slash == std::string_view::npos) return BigRat(n);
  std::string_view den = text.substr(slash + 1);
  if (!valid_int(den) || den[0] == '-' || den[0] == '+') throw bad();
  BigInt d(std::string(den), 10);
  if (d == 0) throw bad();
  return make_rat(n, d);
}

inline BigInt parse_integer(std::string_view text) {
  BigRat q = parse_rational(text);
  if (!is_integer(q))
    throw InvalidArgument("exact_arith",
                          "expected an integer, got '" + std::string(text) + "'");
  return q.get_num();
}

inline std::string to_string(const BigInt& n) { return n.get_str(); }

/// "p" when integral, otherwise "p/q".
inline std::string to_string(const BigRat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline BigInt isqrt(const BigInt& n) {
  if (n < 0) throw InvalidArgument("exact_arith", "isqrt of a negative number");
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_square_integer(const BigInt& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

/// True iff the rational is the square of a rational.
inline bool is_square_rational(const BigRat& q) {
  return is_square_integer(q.get_num()) && is_square_integer(q.get_den());
}

/// Exact for n < 2^64 (GMP runs BPSW there); probabilistic beyond.
inline bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

/// p-adic valuation of a nonzero integer.
inline int valuation(const BigInt& n, const BigInt& p) {
  if (n == 0) throw InvalidArgument("exact_arith", "valuation of zero");
  BigInt m = abs(n);
  int v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
    m /= p;
    ++v;
  }
  return v;
}

inline int valuation(const BigRat& q, const BigInt& p) {
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

/// Positive divisors of a nonzero integer, ascending (trial division).
inline std::vector<BigInt> divisors(const BigInt& n) {
  if (n == 0) throw InvalidArgument("exact_arith", "divisors of zero");
  BigInt m = abs(n);
  std::vector<BigInt> small, large;
  for (BigInt d = 1; d * d <= m; ++d) {
    if (mpz_divisible_p(m.get_mpz_t(), d.get_mpz_t())) {
      small.push_back(d);
      BigInt e = m / d;
      if (e != d) large.push_back(e);
    }
  }
  for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
  return small;
}

/// Primes below `bound`, ascending.
inline std::vector<std::uint64_t> primes_below(std::uint64_t bound) {
  std::vector<bool> composite(bound > 2 ? bound : 2, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i < bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j < bound; j += i) composite[j] = true;
  }
  return out;
}

/// floor(q * 2^bits + 1/2) / 2^bits
inline BigRat round_dyadic(const BigRat& q, unsigned bits) {
  BigInt scale = BigInt(1) << bits;
  BigRat scaled = q * scale + BigRat(1, 2);
  return make_rat(floor_rat(scaled), scale);
}

/// Rational bounds lo <= sqrt(q) <= hi with hi - lo <= 2^-bits.
inline std::pair<BigRat, BigRat> sqrt_bounds(const BigRat& q, unsigned bits) {
  if (q < 0) throw InvalidArgument("exact_arith", "sqrt of a negative number");
  BigInt scale = BigInt(1) << bits;
  // floor(sqrt(q * 4^bits)) computed via floor(q * 4^bits) loses nothing
  // for the lower bound; the upper bound adds one ulp.
  BigInt s = floor_rat(q * scale * scale);
  BigInt r = isqrt(s);
  BigRat lo = make_rat(r, scale);
  BigRat hi = (r * r == s && BigRat(s) == q * scale * scale) ? lo
                                                               : make_rat(r + 1, scale);
  return {lo, hi};
}

}  // namespace cma
