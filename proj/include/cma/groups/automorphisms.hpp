#pragma once

// Automorphisms of an order O and their matrices pi(sigma) in GL_n(Z).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <set>
#include <vector>

#include "cma/etale/algebra.hpp"
#include "cma/units/embeddings.hpp"

namespace cma {

/// sigma given by the images of the order basis elements.
struct AutomorphismDatum {
  std::vector<AlgebraElement> images;

  friend bool operator==(const AutomorphismDatum& a, const AutomorphismDatum& b) { return a.images == b.images; }
  friend bool operator<(const AutomorphismDatum& a, const AutomorphismDatum& b) { return a.images < b.images; }
};

inline AutomorphismDatum identity_automorphism(const EtaleAlgebra& e) {
  AutomorphismDatum s;
  for (std::size_t j = 0; j < e.degree(); ++j) s.images.push_back(e.basis_element(j));
  return s;
}

inline AlgebraElement apply(const EtaleAlgebra& e, const AutomorphismDatum& s, const AlgebraElement& a) {
  AlgebraElement r = e.zero();
  for (std::size_t j = 0; j < e.degree(); ++j)
    if (a[j] != 0) r = e.add(r, e.scale(a[j], s.images[j]));
  return r;
}

struct AutomorphismCheck {
  bool ok = false;
  std::string reason;
};

/// Ring automorphism of O: sigma(1) = 1, multiplicative on basis products,
/// bijective on O.
inline AutomorphismCheck verify_automorphism(const EtaleAlgebra& e, const AutomorphismDatum& s) {
  const std::size_t n = e.degree();
  if (s.images.size() != n) return {false, "expected " + std::to_string(n) + " images"};
  for (const auto& im : s.images)
    if (im.size() != n) return {false, "image has the wrong length"};
  if (apply(e, s, e.one()) != e.one()) return {false, "1 is not fixed"};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const AlgebraElement lhs = apply(e, s, e.mul(e.basis_element(i), e.basis_element(j)));
      const AlgebraElement rhs = e.mul(s.images[i], s.images[j]);
      if (lhs != rhs)
        return {false, "not multiplicative on b_" + std::to_string(i + 1) + " * b_" + std::to_string(j + 1)};
    }
  MatQ m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = s.images[j][i];
  if (!is_integral(m)) return {false, "O is not mapped into O"};
  if (determinant(m) == 0) return {false, "not invertible"};
  if (!is_integral(inverse(m))) return {false, "not onto O"};
  return {true, ""};
}

/// Matrix of sigma in the order basis: column j holds sigma(b_j).
inline MatQ automorphism_matrix(const EtaleAlgebra& e, const AutomorphismDatum& s) {
  auto chk = verify_automorphism(e, s);
  if (!chk.ok) throw InvalidArgument("matrix_groups", "not an automorphism of the order: " + chk.reason);
  const std::size_t n = e.degree();
  MatQ m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = s.images[j][i];
  return m;
}

/// The automorphism x -> y of a field E = Q[x]/(f), f(y) = 0.
inline AutomorphismDatum automorphism_from_root(const EtaleAlgebra& e, const AlgebraElement& y) {
  if (e.num_factors() != 1) throw Unsupported("matrix_groups", "automorphisms from roots need a field");
  AutomorphismDatum s;
  for (std::size_t j = 0; j < e.degree(); ++j) {
    const auto pc = e.to_power(e.basis_element(j));
    AlgebraElement acc = e.zero();
    for (std::size_t k = pc.size(); k-- > 0;) acc = e.add(e.mul(acc, y), e.scalar(pc[k]));
    s.images.push_back(acc);
  }
  return s;
}

/// Aut(O) for a field of degree <= 4: each candidate x -> h(x) comes from
/// interpolating a permutation of the complex roots, is rounded into the
/// order coordinate box and then verified exactly. Multi-factor algebras
/// only get the identity.
inline std::vector<AutomorphismDatum> enumerate_automorphisms(const EtaleAlgebra& e, long box = 50) {
  std::vector<AutomorphismDatum> out{identity_automorphism(e)};
  if (e.num_factors() != 1) return out;
  const PolyZ& f = e.factor(0);
  const std::size_t n = e.degree();
  if (n < 2) return out;
  using C = std::complex<long double>;
  const auto roots = detail::approximate_roots(f);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  // inverse of the Vandermonde matrix V_{ik} = r_i^k by Gauss-Jordan
  std::vector<std::vector<C>> v(n, std::vector<C>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    C p = 1;
    for (std::size_t k = 0; k < n; ++k, p *= roots[i]) v[i][k] = p;
    v[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(v[r][c]) > std::abs(v[piv][c])) piv = r;
    std::swap(v[c], v[piv]);
    const C d = v[c][c];
    for (auto& x : v[c]) x /= d;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const C m = v[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) v[r][k] -= m * v[c][k];
    }
  }
  const MatQ to_order = inverse(e.order_basis().transpose());
  std::set<AlgebraElement> seen{e.x()};
  do {
    if (std::is_sorted(perm.begin(), perm.end())) continue;
    std::vector<BigRat> power(n);
    bool real = true;
    for (std::size_t k = 0; k < n; ++k) {
      C h = 0;
      for (std::size_t i = 0; i < n; ++i) h += v[k][n + i] * roots[perm[i]];
      if (std::fabs(h.imag()) > 1e-6L) real = false;
      power[k] = BigRat(static_cast<double>(h.real()));
    }
    if (!real) continue;
    const auto approx = to_order * power;
    std::vector<BigRat> coords;
    bool ok = true;
    for (const auto& a : approx) {
      const double d = a.get_d();
      const double r = std::round(d);
      if (std::fabs(d - r) > 1e-5 || std::fabs(r) > static_cast<double>(box)) {
        ok = false;
        break;
      }
      coords.emplace_back(static_cast<long>(r));
    }
    if (!ok) continue;
    AlgebraElement y(coords);
    if (seen.count(y)) continue;
    // f(y) = 0 exactly
    AlgebraElement fy = e.zero();
    for (int k = f.degree(); k >= 0; --k) fy = e.add(e.mul(fy, y), e.scalar(BigRat(f.coeff(k))));
    if (!fy.is_zero()) continue;
    auto s = automorphism_from_root(e, y);
    if (!verify_automorphism(e, s).ok) continue;
    seen.insert(y);
    out.push_back(std::move(s));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(out.begin() + 1, out.end(), [&](const AutomorphismDatum& a, const AutomorphismDatum& b) {
    return automorphism_matrix(e, a).data() < automorphism_matrix(e, b).data();
  });
  return out;
}

/// sigma o tau.
inline AutomorphismDatum compose(const EtaleAlgebra& e, const AutomorphismDatum& s, const AutomorphismDatum& t) {
  AutomorphismDatum r;
  for (const auto& im : t.images) r.images.push_back(apply(e, s, im));
  return r;
}

}  // namespace cma
