#pragma once

// Certified archimedean embeddings. Root approximations come from
// Durand-Kerner in long double, are refined by Newton steps in dyadic
// rationals, and are certified by Weierstrass inclusion discs: with
// W_i = f(z_i) / prod_{j != i} (z_i - z_j), the discs D(z_i, n |W_i|)
// contain the roots, one per disc when they are pairwise disjoint.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "cma/arith/interval.hpp"
#include "cma/arith/sturm.hpp"
#include "cma/etale/algebra.hpp"

namespace cma {

struct RootEnclosure {
  ComplexQ center;
  BigRat radius;  // the root lies in the closed disc of this radius
  bool real = false;
};

namespace detail {

using cld = std::complex<long double>;

inline std::vector<cld> approximate_roots(const PolyZ& f) {
  const int n = f.degree();
  std::vector<long double> c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = f.coeff(k).get_d();
  long double bound = 1;
  for (int k = 0; k < n; ++k) bound = std::max(bound, 1 + std::fabs(c[k]));
  std::vector<cld> z(n);
  for (int k = 0; k < n; ++k)
    z[k] = std::polar(bound * 0.9L, 2 * 3.14159265358979323846L * (k + 0.25L) / n);
  auto eval = [&](cld x) {
    cld acc = 0;
    for (int k = n; k >= 0; --k) acc = acc * x + c[k];
    return acc;
  };
  for (int iter = 0; iter < 2000; ++iter) {
    long double delta = 0;
    for (int i = 0; i < n; ++i) {
      cld den = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      if (std::abs(den) == 0) den = 1e-30L;
      cld step = eval(z[i]) / den;
      z[i] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-17L) break;
  }
  return z;
}

inline ComplexQ to_complexq(const cld& z, unsigned bits) {
  auto conv = [&](long double v) {
    MpfrValue m(64);
    mpfr_set_ld(m.get(), v, MPFR_RNDN);
    return round_dyadic(m.to_rational(), bits);
  };
  return {conv(z.real()), conv(z.imag())};
}

inline ComplexQ eval_complex(const PolyZ& f, const ComplexQ& z) {
  ComplexQ acc(0);
  for (int k = f.degree(); k >= 0; --k) acc = acc * z + ComplexQ(f.coeff(k));
  return acc;
}

inline BigRat sqrt_upper(const BigRat& q, unsigned bits) { return sqrt_bounds(q, bits).second; }
inline BigRat sqrt_lower(const BigRat& q, unsigned bits) { return sqrt_bounds(q, bits).first; }

}  // namespace detail

/// Certified enclosures of the roots of a monic squarefree f: first the
/// r1 real roots in increasing order, then one representative (Im > 0) of
/// each complex pair. Returns nullopt when `bits` is too small to certify.
inline std::optional<std::vector<RootEnclosure>> certify_roots(const PolyZ& f, unsigned bits) {
  const int n = f.degree();
  const int r1 = static_cast<int>(sturm_count_real_roots(f));
  auto approx = detail::approximate_roots(f);
  std::sort(approx.begin(), approx.end(), [](const detail::cld& a, const detail::cld& b) {
    return std::fabs(a.imag()) < std::fabs(b.imag());
  });
  std::vector<ComplexQ> reps;
  std::vector<bool> is_real;
  for (int i = 0; i < r1; ++i) {
    reps.push_back(detail::to_complexq(detail::cld(approx[i].real(), 0), bits));
    is_real.push_back(true);
  }
  for (int i = r1; i < n; ++i) {
    if (approx[i].imag() <= 0) continue;
    reps.push_back(detail::to_complexq(approx[i], bits));
    is_real.push_back(false);
  }
  if (static_cast<int>(reps.size()) != r1 + (n - r1) / 2) return std::nullopt;
  // Newton refinement in dyadic arithmetic
  const PolyZ df = f.derivative();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (int iter = 0; iter < 12; ++iter) {
      ComplexQ d = detail::eval_complex(df, reps[i]);
      if (d.norm_sq() == 0) break;
      ComplexQ next = (reps[i] - detail::eval_complex(f, reps[i]) / d).rounded(bits + 8);
      if (is_real[i]) next.im = 0;
      if (next == reps[i]) break;
      reps[i] = next;
    }
  }
  // reals increasing, then complex representatives by (re, im)
  std::vector<std::size_t> idx(reps.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (is_real[a] != is_real[b]) return static_cast<bool>(is_real[a]);
    if (reps[a].re != reps[b].re) return reps[a].re < reps[b].re;
    return reps[a].im < reps[b].im;
  });
  {
    std::vector<ComplexQ> r2;
    std::vector<bool> b2;
    for (auto i : idx) {
      r2.push_back(reps[i]);
      b2.push_back(is_real[i]);
    }
    reps = std::move(r2);
    is_real = std::move(b2);
  }
  std::vector<ComplexQ> all;
  for (std::size_t i = 0; i < reps.size(); ++i) all.push_back(reps[i]);
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (!is_real[i]) all.push_back(reps[i].conj());
  // squared Weierstrass radii n^2 |W_i|^2
  std::vector<BigRat> rad2(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    BigRat den = 1;
    for (std::size_t j = 0; j < all.size(); ++j)
      if (j != i) den *= (all[i] - all[j]).norm_sq();
    if (den == 0) return std::nullopt;
    rad2[i] = BigRat(n * n) * detail::eval_complex(f, all[i]).norm_sq() / den;
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const BigRat cross = detail::sqrt_upper(rad2[i] * rad2[j], bits);
      if ((all[i] - all[j]).norm_sq() <= rad2[i] + rad2[j] + 2 * cross) return std::nullopt;
    }
  std::vector<RootEnclosure> out;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    BigRat r = detail::sqrt_upper(rad2[i], bits + 8);
    out.push_back({reps[i], r, is_real[i]});
  }
  return out;
}

/// Enclosure of an element's image under one embedding: value within
/// `error` of `center`.
struct EmbeddedValue {
  ComplexQ center;
  BigRat error;
};

/// The archimedean places of an etale algebra with certified root
/// enclosures at a fixed precision.
class ArchimedeanPlaces {
 public:
  struct Entry {
    std::size_t factor = 0;
    RootEnclosure root;
    detail::cld approx;
  };

  /// Throws IndependenceUndecided if the roots cannot be certified at
  /// `bits`.
  ArchimedeanPlaces(const EtaleAlgebra& e, unsigned bits) : bits_(bits) {
    for (std::size_t k = 0; k < e.num_factors(); ++k) {
      offsets_.push_back(e.factor_offset(k));
      degrees_.push_back(e.factor_degree(k));
      auto roots = certify_roots(e.factor(k), bits);
      if (!roots)
        throw IndependenceUndecided("units", "cannot certify roots of " + pretty(e.factor(k)) +
                                                 " at " + std::to_string(bits) + " bits");
      for (auto& r : *roots) {
        detail::cld z(r.center.re.get_d(), r.center.im.get_d());
        places_.push_back({k, std::move(r), z});
      }
    }
  }

  std::size_t size() const { return places_.size(); }
  const Entry& operator[](std::size_t i) const { return places_[i]; }
  unsigned bits() const { return bits_; }

  EmbeddedValue evaluate(const EtaleAlgebra& e, const AlgebraElement& a, std::size_t place) const {
    const auto& pl = places_.at(place);
    const auto pc = e.to_power(a);
    const std::size_t off = e.factor_offset(pl.factor), d = e.factor_degree(pl.factor);
    const ComplexQ& z = pl.root.center;
    const BigRat zabs = detail::sqrt_upper(z.norm_sq(), bits_);
    const BigRat big = zabs + pl.root.radius;
    ComplexQ acc(0);
    ComplexQ zk(1);
    BigRat err = 0, pz = 1, pb = 1;
    for (std::size_t k = 0; k < d; ++k) {
      const BigRat& q = pc[off + k];
      if (q != 0) {
        acc += ComplexQ(q) * zk;
        err += abs(q) * (pb - pz);
      }
      zk = zk * z;
      pz *= zabs;
      pb *= big;
    }
    return {acc, err};
  }

  /// log|sigma(a)| at a real place, 2 log|sigma(a)| at a complex place.
  /// nullopt when the enclosure touches zero at this precision.
  std::optional<RationalInterval> log_abs(const EtaleAlgebra& e, const AlgebraElement& a,
                                          std::size_t place) const {
    auto v = evaluate(e, a, place);
    const BigRat lo = detail::sqrt_lower(v.center.norm_sq(), bits_ + 8) - v.error;
    const BigRat hi = detail::sqrt_upper(v.center.norm_sq(), bits_ + 8) + v.error;
    if (lo <= 0) return std::nullopt;
    auto l = log_interval(RationalInterval(lo * lo, hi * hi), bits_);
    if (places_[place].root.real) return RationalInterval(l.lo() / 2, l.hi() / 2);
    return l;
  }

  /// Floating-point log|sigma(a)| (doubled at complex places), for
  /// heuristics only.
  long double approx_log_abs(const std::vector<long double>& power_coords, std::size_t place) const {
    const auto& pl = places_.at(place);
    detail::cld acc = 0;
    const std::size_t off = offsets_.at(pl.factor);
    for (std::size_t k = degrees_.at(pl.factor); k-- > 0;) acc = acc * pl.approx + power_coords[off + k];
    long double r = std::log(std::max<long double>(std::abs(acc), 1e-4000L));
    return pl.root.real ? r : 2 * r;
  }

 private:
  unsigned bits_;
  std::vector<Entry> places_;
  std::vector<std::size_t> offsets_, degrees_;
};

}  // namespace cma
