#pragma once

// Valuations at the primes of an etale algebra above an unramified p.
// Z[x]/(f) is p-maximal when p does not divide disc f, and the primes
// above p are P_j = (p, G_j(x)) for the irreducible factors G_j of f mod p.
// With beta_j the product of the other G_i, v_{P_j}(a) >= m exactly when
// p^m divides a * beta_j^m in Z[x]/(f).

#include <cstdint>
#include <vector>

#include "cma/arith/fp_poly.hpp"
#include "cma/etale/algebra.hpp"
#include "cma/galois/places.hpp"

namespace cma {

struct FinitePlace {
  std::uint64_t p = 0;
  std::size_t factor = 0;     // index of the field factor
  FpPoly residue_poly{2};     // G_j, monic irreducible mod p
  int residue_degree = 0;
  PolyZ beta;                 // lift of the product of the other G_i
};

/// The places of E above p; RamifiedPlace if p divides some disc f_k.
inline std::vector<FinitePlace> finite_places(const EtaleAlgebra& e, std::uint64_t p) {
  std::vector<FinitePlace> out;
  for (std::size_t k = 0; k < e.num_factors(); ++k) {
    require_unramified(e.factor(k), p);
    auto fac = factor_mod_p(e.factor(k), p);
    for (std::size_t j = 0; j < fac.size(); ++j) {
      FpPoly other = FpPoly::constant(p, 1);
      for (std::size_t i = 0; i < fac.size(); ++i)
        if (i != j) other = other * fac[i].factor;
      std::vector<BigInt> lift;
      for (auto c : other.coeffs()) lift.emplace_back(static_cast<unsigned long>(c));
      out.push_back({p, k, fac[j].factor, fac[j].factor.degree(), PolyZ(std::move(lift))});
    }
  }
  return out;
}

inline std::vector<FinitePlace> finite_places(const EtaleAlgebra& e,
                                              const std::vector<std::uint64_t>& primes) {
  std::vector<FinitePlace> out;
  for (auto p : primes) {
    auto more = finite_places(e, p);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

namespace detail {

inline PolyZ rem_monic(const PolyZ& a, const PolyZ& f) {
  std::vector<BigInt> r(a.coeffs());
  const int n = f.degree();
  for (int k = static_cast<int>(r.size()) - 1; k >= n; --k) {
    if (r[k] == 0) continue;
    const BigInt c = r[k];
    for (int j = 0; j <= n; ++j) r[k - n + j] -= c * f.coeff(j);
  }
  return PolyZ(std::move(r));
}

inline bool divisible_by(const PolyZ& a, const BigInt& q) {
  for (const auto& c : a.coeffs())
    if (!mpz_divisible_p(c.get_mpz_t(), q.get_mpz_t())) return false;
  return true;
}

}  // namespace detail

/// v_P(a) for a nonzero component of a at the place's factor.
inline int valuation(const EtaleAlgebra& e, const FinitePlace& place, const AlgebraElement& a) {
  const auto pc = e.to_power(a);
  const std::size_t off = e.factor_offset(place.factor), d = e.factor_degree(place.factor);
  BigInt den = 1;
  for (std::size_t k = 0; k < d; ++k) den = lcm(den, BigInt(pc[off + k].get_den()));
  std::vector<BigInt> num(d);
  for (std::size_t k = 0; k < d; ++k) {
    const BigRat t = pc[off + k] * den;
    num[k] = t.get_num();
  }
  PolyZ A(std::move(num));
  if (A.is_zero()) throw InvalidArgument("units", "valuation of a zero component");
  const PolyZ& f = e.factor(place.factor);
  const BigInt pp(static_cast<unsigned long>(place.p));
  const int bound = valuation(resultant(f, A), pp) / place.residue_degree;
  int m = 0;
  PolyZ cur = A;
  BigInt pm = 1;
  while (m < bound) {
    cur = detail::rem_monic(cur * place.beta, f);
    pm *= pp;
    if (!detail::divisible_by(cur, pm)) break;
    ++m;
  }
  return m - valuation(den, pp);
}

}  // namespace cma
