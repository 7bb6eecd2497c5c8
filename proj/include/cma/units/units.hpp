#pragma once

// Units and S-units of an order: torsion, Dirichlet rank, exhaustive box
// searches, certified independence via interval log embeddings, and the
// norm-one subgroup.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cma/arith/lattice.hpp"
#include "cma/etale/algebra.hpp"
#include "cma/galois/places.hpp"
#include "cma/units/embeddings.hpp"
#include "cma/units/valuation.hpp"

namespace cma {

struct TorsionGenerator {
  AlgebraElement element;
  std::size_t order = 1;
};

struct UnitSystem {
  std::vector<TorsionGenerator> torsion;  // a single entry for a field
  std::vector<AlgebraElement> free;
  std::vector<std::uint64_t> s_primes;
};

// --- ranks -------------------------------------------------------------

/// r1 + r2 - 1 + (places over the S-primes) for a field.
inline std::size_t dirichlet_rank(const Signature& sig, std::size_t places_over_s) {
  return static_cast<std::size_t>(sig.r1 + sig.r2 - 1) + places_over_s;
}

/// Sum of the factor ranks for an etale algebra.
inline std::size_t dirichlet_rank(const EtaleAlgebra& e, const std::vector<std::uint64_t>& s_primes) {
  std::size_t r = 0;
  for (std::size_t k = 0; k < e.num_factors(); ++k) {
    std::size_t over = 0;
    for (auto p : s_primes) over += places_over_p(e.factor(k), p);
    r += dirichlet_rank(signature(e.factor(k)), over);
  }
  return r;
}

// --- canonical presentation ---------------------------------------------

inline BigRat l1_norm(const AlgebraElement& a) {
  BigRat s = 0;
  for (const auto& c : a.coords) s += abs(c);
  return s;
}

/// Common denominator of the coordinates.
inline BigInt denominator(const AlgebraElement& a) {
  BigInt d = 1;
  for (const auto& c : a.coords) d = lcm(d, BigInt(c.get_den()));
  return d;
}

/// Smaller denominator first, then smaller L1 norm, then lexicographically
/// greater coordinates.
inline bool canonical_less(const AlgebraElement& a, const AlgebraElement& b) {
  const BigInt da = denominator(a), db = denominator(b);
  if (da != db) return da < db;
  const BigRat la = l1_norm(a), lb = l1_norm(b);
  if (la != lb) return la < lb;
  return b.coords < a.coords;
}

/// All elements of the finite group generated by the torsion generators.
inline std::vector<AlgebraElement> torsion_elements(const EtaleAlgebra& e,
                                                    const std::vector<TorsionGenerator>& tors) {
  std::set<AlgebraElement> seen{e.one()};
  std::vector<AlgebraElement> frontier{e.one()};
  while (!frontier.empty()) {
    std::vector<AlgebraElement> next;
    for (const auto& g : frontier)
      for (const auto& t : tors) {
        auto h = e.mul(g, t.element);
        if (seen.insert(h).second) next.push_back(h);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

/// Canonical representative of u modulo the torsion group and inversion.
inline AlgebraElement canonicalize_generator(const EtaleAlgebra& e, const AlgebraElement& u,
                                             const std::vector<AlgebraElement>& torsion) {
  AlgebraElement best = u;
  const AlgebraElement inv = e.inverse(u);
  for (const auto& z : torsion)
    for (const auto* v : {&u, &inv}) {
      auto cand = e.mul(z, *v);
      if (canonical_less(cand, best)) best = cand;
    }
  return best;
}

// --- torsion -------------------------------------------------------------

/// lcm of all m with phi(m) <= n; every root of unity in a degree-n
/// algebra has order dividing it.
inline std::size_t torsion_exponent_bound(std::size_t n) {
  std::size_t l = 1;
  for (std::size_t m = 1; m <= 2 * n * n + 2; ++m) {
    std::size_t phi = 0;
    for (std::size_t k = 1; k <= m; ++k)
      if (std::gcd(k, m) == 1) ++phi;
    if (phi <= n) l = std::lcm(l, m);
  }
  return l;
}

inline bool is_torsion(const EtaleAlgebra& e, const AlgebraElement& a) {
  return e.pow(a, static_cast<long>(torsion_exponent_bound(e.degree()))) == e.one();
}

/// Exact multiplicative order of a torsion element (0 if not torsion).
inline std::size_t element_order(const EtaleAlgebra& e, const AlgebraElement& a) {
  const std::size_t l = torsion_exponent_bound(e.degree());
  for (std::size_t m = 1; m <= l; ++m)
    if (l % m == 0 && e.pow(a, static_cast<long>(m)) == e.one()) return m;
  return 0;
}

namespace detail {

/// Integer structure constants for fast norm evaluation during searches.
class IntegerArithmetic {
 public:
  explicit IntegerArithmetic(const EtaleAlgebra& e) : n_(e.degree()), c_(n_ * n_ * n_) {
    if (!e.is_order().ok)
      throw InvalidArgument("units", "unit searches need the basis of an order");
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        const auto& pc = e.product_coords(i, j);
        for (std::size_t k = 0; k < n_; ++k) {
          if (!pc[k].get_num().fits_slong_p() || abs(pc[k]) > 1000000)
            throw Unsupported("units", "structure constants too large for the search");
          c_[(i * n_ + j) * n_ + k] = pc[k].get_num().get_si();
        }
      }
  }

  std::size_t n() const { return n_; }

  /// Norm of an integer element, exactly.
  BigInt norm(const std::vector<long>& a) const {
    std::vector<long> m(n_ * n_, 0);
    long double row_bound = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k) m[k * n_ + j] += a[i] * c_[(i * n_ + j) * n_ + k];
    }
    for (std::size_t r = 0; r < n_; ++r) {
      long double s = 0;
      for (std::size_t j = 0; j < n_; ++j) s += static_cast<long double>(m[r * n_ + j]) * m[r * n_ + j];
      row_bound *= std::sqrt(s) + 1;
    }
    if (row_bound < 1e17L) return small_det(m);
    MatZ big(n_, n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t j = 0; j < n_; ++j) big(r, j) = m[r * n_ + j];
    return determinant(big);
  }

 private:
  BigInt small_det(const std::vector<long>& src) const {
    std::vector<__int128> m(src.begin(), src.end());
    __int128 prev = 1;
    int sign = 1;
    const std::size_t n = n_;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (m[k * n + k] == 0) {
        std::size_t piv = k + 1;
        while (piv < n && m[piv * n + k] == 0) ++piv;
        if (piv == n) return 0;
        for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j)
          m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
      prev = m[k * n + k];
    }
    __int128 d = m[n * n - 1] * sign;
    const bool neg = d < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-d) : static_cast<unsigned __int128>(d);
    BigInt r = static_cast<unsigned long>(u >> 64);
    r <<= 64;
    r += static_cast<unsigned long>(u & ~static_cast<unsigned long>(0));
    return neg ? BigInt(-r) : r;
  }

  std::size_t n_;
  std::vector<long> c_;
};

}  // namespace detail

/// The norms {+-prod p^k : k <= max_exp} (just {+-1} for no primes).
inline std::set<BigInt> default_norm_targets(const std::vector<std::uint64_t>& s_primes, int max_exp = 2) {
  std::set<BigInt> out{BigInt(1)};
  for (auto p : s_primes) {
    std::set<BigInt> next;
    for (const auto& t : out) {
      BigInt v = t;
      for (int k = 0; k <= max_exp; ++k) {
        next.insert(v);
        v *= static_cast<unsigned long>(p);
      }
    }
    out = std::move(next);
  }
  std::set<BigInt> signed_out;
  for (const auto& t : out) {
    signed_out.insert(t);
    signed_out.insert(-t);
  }
  return signed_out;
}

/// All elements with integer order coordinates in [-B, B]^n whose norm
/// lies in `targets`, in lexicographic order.
inline std::vector<AlgebraElement> search_units(const EtaleAlgebra& e, long bound,
                                                const std::set<BigInt>& targets,
                                                std::uint64_t budget = 1000000) {
  if (bound < 0) throw InvalidArgument("units", "negative search bound");
  const std::size_t n = e.degree();
  long double total = std::pow(static_cast<long double>(2 * bound + 1), static_cast<long double>(n));
  if (total > static_cast<long double>(budget))
    throw BudgetExceeded("units", "box [-" + std::to_string(bound) + ", " + std::to_string(bound) + "]^" +
                                      std::to_string(n) + " exceeds the budget of " +
                                      std::to_string(budget) + " candidates");
  detail::IntegerArithmetic arith(e);
  std::vector<AlgebraElement> out;
  std::vector<long> a(n, -bound);
  while (true) {
    bool nonzero = std::any_of(a.begin(), a.end(), [](long v) { return v != 0; });
    if (nonzero && targets.count(arith.norm(a))) {
      std::vector<BigRat> c(a.begin(), a.end());
      out.emplace_back(std::move(c));
    }
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (a[i] < bound) {
        ++a[i];
        break;
      }
      a[i] = -bound;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

inline std::vector<AlgebraElement> search_units(const EtaleAlgebra& e, long bound,
                                                const std::vector<std::uint64_t>& s_primes,
                                                std::uint64_t budget = 1000000) {
  return search_units(e, bound, default_norm_targets(s_primes), budget);
}

namespace detail {

/// Bound on the order coordinates of any element all of whose embeddings
/// have absolute value 1.
inline long torsion_box(const EtaleAlgebra& e) {
  const std::size_t n = e.degree();
  using C = std::complex<long double>;
  std::vector<std::vector<C>> phi(n, std::vector<C>(n));
  std::size_t row = 0;
  for (std::size_t k = 0; k < e.num_factors(); ++k) {
    auto roots = approximate_roots(e.factor(k));
    const std::size_t off = e.factor_offset(k), d = e.factor_degree(k);
    for (const auto& z : roots) {
      for (std::size_t i = 0; i < n; ++i) {
        // sigma(b_i) from the power coordinates of b_i in factor k
        C acc = 0;
        for (std::size_t j = d; j-- > 0;) acc = acc * z + C(e.order_basis()(i, off + j).get_d());
        phi[row][i] = acc;
      }
      ++row;
    }
  }
  // invert phi by Gauss-Jordan
  std::vector<std::vector<C>> inv(n, std::vector<C>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(phi[r][c]) > std::abs(phi[piv][c])) piv = r;
    std::swap(phi[c], phi[piv]);
    std::swap(inv[c], inv[piv]);
    const C p = phi[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      phi[c][j] /= p;
      inv[c][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const C f = phi[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        phi[r][j] -= f * phi[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  long double best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    long double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(inv[i][j]);
    best = std::max(best, s);
  }
  return std::max(1L, static_cast<long>(std::floor(best + 1e-6L)));
}

}  // namespace detail

/// Generators of the torsion subgroup of O^x, canonical: elements of
/// larger order first, ties broken by canonical_less.
inline std::vector<TorsionGenerator> torsion_units(const EtaleAlgebra& e, std::uint64_t budget = 1000000) {
  const long box = detail::torsion_box(e);
  std::vector<std::pair<std::size_t, AlgebraElement>> found;
  for (auto& a : search_units(e, box, std::set<BigInt>{BigInt(1), BigInt(-1)}, budget)) {
    std::size_t ord = element_order(e, a);
    if (ord > 0) found.emplace_back(ord, std::move(a));
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return canonical_less(x.second, y.second);
  });
  std::vector<TorsionGenerator> gens;
  std::set<AlgebraElement> generated{e.one()};
  for (const auto& [ord, a] : found) {
    if (generated.count(a)) continue;
    gens.push_back({a, ord});
    auto all = torsion_elements(e, gens);
    generated = std::set<AlgebraElement>(all.begin(), all.end());
  }
  if (gens.empty()) gens.push_back({e.one(), 1});
  return gens;
}

// --- log embeddings ------------------------------------------------------

/// Approximate log vectors (archimedean logs, then valuations) for
/// heuristic rank decisions.
class ApproxLogs {
 public:
  ApproxLogs(const EtaleAlgebra& e, const std::vector<std::uint64_t>& s_primes)
      : e_(e), arch_(e, 64), fin_(finite_places(e, s_primes)) {}

  std::vector<long double> operator()(const AlgebraElement& a) const {
    const auto pc = e_.to_power(a);
    std::vector<long double> p(pc.size());
    for (std::size_t i = 0; i < pc.size(); ++i) p[i] = pc[i].get_d();
    std::vector<long double> v;
    for (std::size_t j = 0; j < arch_.size(); ++j) v.push_back(arch_.approx_log_abs(p, j));
    for (const auto& pl : fin_)
      v.push_back(static_cast<long double>(valuation(e_, pl, a)) *
                  std::log(static_cast<long double>(pl.p)));
    return v;
  }

 private:
  const EtaleAlgebra& e_;
  ArchimedeanPlaces arch_;
  std::vector<FinitePlace> fin_;
};

namespace detail {

inline long double dot(const std::vector<long double>& a, const std::vector<long double>& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Least-squares coefficients of v in the span of rows (Gram system).
inline std::vector<long double> coefficients(const std::vector<std::vector<long double>>& rows,
                                             const std::vector<long double>& v) {
  const std::size_t r = rows.size();
  std::vector<std::vector<long double>> g(r, std::vector<long double>(r + 1));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) g[i][j] = dot(rows[i], rows[j]);
    g[i][r] = dot(rows[i], v);
  }
  for (std::size_t c = 0; c < r; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < r; ++i)
      if (std::fabs(g[i][c]) > std::fabs(g[piv][c])) piv = i;
    std::swap(g[c], g[piv]);
    for (std::size_t i = 0; i < r; ++i) {
      if (i == c || g[c][c] == 0) continue;
      const long double f = g[i][c] / g[c][c];
      for (std::size_t j = c; j <= r; ++j) g[i][j] -= f * g[c][j];
    }
  }
  std::vector<long double> x(r);
  for (std::size_t i = 0; i < r; ++i) x[i] = g[i][i] == 0 ? 0 : g[i][r] / g[i][i];
  return x;
}

inline long double residual(const std::vector<std::vector<long double>>& rows,
                            const std::vector<long double>& v) {
  auto x = coefficients(rows, v);
  long double s = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    long double r = v[k];
    for (std::size_t i = 0; i < rows.size(); ++i) r -= x[i] * rows[i][k];
    s += r * r;
  }
  return std::sqrt(s);
}

/// prod g_i^{e_i}.
inline AlgebraElement power_product(const EtaleAlgebra& e, const std::vector<AlgebraElement>& g,
                                    const std::vector<BigInt>& exps) {
  AlgebraElement r = e.one();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (exps[i] == 0) continue;
    if (!exps[i].fits_slong_p()) throw BudgetExceeded("units", "exponent too large");
    r = e.mul(r, e.pow(g[i], exps[i].get_si()));
  }
  return r;
}

inline RationalInterval interval_det(const std::vector<std::vector<RationalInterval>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  RationalInterval total(BigRat(0));
  do {
    int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    RationalInterval t(BigRat(1));
    for (std::size_t i = 0; i < n; ++i) t *= m[i][perm[i]];
    total += (inv % 2 == 0) ? t : -t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline std::vector<unsigned> precision_ladder(unsigned cap) {
  std::vector<unsigned> out;
  for (unsigned b = 64; b <= cap; b *= 2) out.push_back(b);
  if (out.empty() || out.back() != cap) out.push_back(cap);
  return out;
}

}  // namespace detail

struct UnitCertificate {
  bool valid = false;                 // every check passed
  std::vector<std::string> failures;  // integrality / torsion / independence failures
  bool independent = false;
  std::size_t rank = 0;               // number of free generators
  std::size_t dirichlet_rank = 0;
  std::vector<std::size_t> minor_columns;
  unsigned precision_bits = 0;
  std::optional<std::vector<long>> relation;  // exponents of a dependency
  std::vector<std::string> column_labels;
  std::vector<std::vector<RationalInterval>> log_embedding;
  std::string caveat =
      "independent system of the Dirichlet rank; maximality of the generated group is not proven";
};

/// Integer relation among the free generators modulo torsion with
/// exponents in [-8, 8], searched by increasing max |e|.
inline std::optional<std::vector<long>> find_unit_relation(const EtaleAlgebra& e,
                                                           const std::vector<AlgebraElement>& gens,
                                                           const std::vector<std::vector<long double>>& logs,
                                                           long max_exp = 8) {
  const std::size_t r = gens.size();
  if (r == 0 || r > 5) return std::nullopt;
  long double scale = 1;
  for (const auto& l : logs)
    for (auto v : l) scale = std::max(scale, std::fabs(v));
  for (long m = 1; m <= max_exp; ++m) {
    std::vector<long> ex(r, -m);
    while (true) {
      long mx = 0;
      std::size_t first = r;
      for (std::size_t i = 0; i < r; ++i) {
        mx = std::max(mx, std::labs(ex[i]));
        if (first == r && ex[i] != 0) first = i;
      }
      if (mx == m && ex[first] > 0) {
        long double s = 0;
        for (std::size_t k = 0; k < logs[0].size(); ++k) {
          long double c = 0;
          for (std::size_t i = 0; i < r; ++i) c += ex[i] * logs[i][k];
          s += c * c;
        }
        if (std::sqrt(s) < 1e-9L * scale * m) {
          std::vector<BigInt> be(ex.begin(), ex.end());
          if (is_torsion(e, detail::power_product(e, gens, be))) return ex;
        }
      }
      std::size_t i = r;
      bool done = false;
      while (i > 0) {
        --i;
        if (ex[i] < m) {
          ++ex[i];
          break;
        }
        ex[i] = -m;
        if (i == 0) done = true;
      }
      if (done) break;
    }
  }
  return std::nullopt;
}

inline UnitCertificate verify_unit_system(const EtaleAlgebra& e, const UnitSystem& sys,
                                          unsigned precision_cap = 256) {
  UnitCertificate cert;
  std::vector<BigInt> primes;
  for (auto p : sys.s_primes) primes.emplace_back(static_cast<unsigned long>(p));
  auto check_unit = [&](const AlgebraElement& u, const std::string& label) {
    const MatQ m = e.regular_rep(u);
    const BigRat d = determinant(m);
    if (d == 0) {
      cert.failures.push_back(label + ": not invertible");
      return;
    }
    if (!is_s_integral(m, primes)) cert.failures.push_back(label + ": matrix not S-integral");
    if (!is_s_unit(d, primes)) cert.failures.push_back(label + ": determinant not an S-unit");
    if (!is_s_integral(inverse(m), primes)) cert.failures.push_back(label + ": inverse not S-integral");
  };
  for (std::size_t i = 0; i < sys.torsion.size(); ++i) {
    const auto& t = sys.torsion[i];
    const std::string label = "torsion " + std::to_string(i + 1);
    check_unit(t.element, label);
    if (t.order == 0 || element_order(e, t.element) != t.order)
      cert.failures.push_back(label + ": order is not " + std::to_string(t.order));
  }
  for (std::size_t i = 0; i < sys.free.size(); ++i) check_unit(sys.free[i], "free " + std::to_string(i + 1));
  cert.rank = sys.free.size();
  cert.dirichlet_rank = dirichlet_rank(e, sys.s_primes);
  if (!cert.failures.empty()) return cert;

  const auto fin = finite_places(e, sys.s_primes);
  const std::size_t r = sys.free.size();
  if (r == 0) {
    cert.independent = true;
    cert.valid = true;
    return cert;
  }
  for (unsigned bits : detail::precision_ladder(precision_cap)) {
    std::optional<ArchimedeanPlaces> arch;
    try {
      arch.emplace(e, bits);
    } catch (const IndependenceUndecided&) {
      continue;
    }
    std::vector<std::vector<RationalInterval>> rows(r);
    bool ok = true;
    for (std::size_t i = 0; i < r && ok; ++i) {
      for (std::size_t j = 0; j < arch->size(); ++j) {
        auto l = arch->log_abs(e, sys.free[i], j);
        if (!l) {
          ok = false;
          break;
        }
        rows[i].push_back(*l);
      }
      for (const auto& pl : fin) rows[i].emplace_back(BigRat(valuation(e, pl, sys.free[i])));
    }
    if (!ok) continue;
    cert.column_labels.clear();
    for (std::size_t j = 0; j < arch->size(); ++j)
      cert.column_labels.push_back(std::string((*arch)[j].root.real ? "real " : "complex ") +
                                   std::to_string(j + 1));
    for (const auto& pl : fin)
      cert.column_labels.push_back("p=" + std::to_string(pl.p) + " f=" + std::to_string(pl.residue_degree));
    cert.log_embedding = rows;
    cert.precision_bits = bits;
    const std::size_t cols = rows[0].size();
    if (r > cols) break;
    std::vector<bool> pick(cols, false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(r), true);
    do {
      std::vector<std::size_t> sel;
      for (std::size_t j = 0; j < cols; ++j)
        if (pick[j]) sel.push_back(j);
      std::vector<std::vector<RationalInterval>> minor(r);
      for (std::size_t i = 0; i < r; ++i)
        for (auto j : sel) minor[i].push_back(rows[i][j]);
      if (!detail::interval_det(minor).contains_zero()) {
        cert.minor_columns = sel;
        cert.independent = true;
        cert.valid = true;
        return cert;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  // no certified minor: look for an exact relation
  ApproxLogs logs(e, sys.s_primes);
  std::vector<std::vector<long double>> approx;
  for (const auto& u : sys.free) approx.push_back(logs(u));
  if (auto rel = find_unit_relation(e, sys.free, approx)) {
    cert.relation = rel;
    cert.failures.push_back("free generators are dependent");
    return cert;
  }
  throw IndependenceUndecided("units", "log embedding minors do not exclude 0 at " +
                                           std::to_string(precision_cap) + " bits");
}

// --- building unit systems -----------------------------------------------

namespace detail {

/// Shorten generators: replace u_i by u_i u_j^{+-1} (canonicalized) while
/// that is canonically smaller.
inline void reduce_generators(const EtaleAlgebra& e, std::vector<AlgebraElement>& gens,
                              const std::vector<AlgebraElement>& torsion) {
  for (auto& g : gens) g = canonicalize_generator(e, g, torsion);
  bool changed = true;
  for (int round = 0; changed && round < 200; ++round) {
    changed = false;
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < gens.size(); ++j) {
        if (i == j) continue;
        for (long s : {1L, -1L}) {
          auto cand = canonicalize_generator(e, e.mul(gens[i], e.pow(gens[j], s)), torsion);
          // bounded denominators keep the descent finite
          if (denominator(cand) <= denominator(gens[i]) && canonical_less(cand, gens[i])) {
            gens[i] = cand;
            changed = true;
          }
        }
      }
  }
  std::sort(gens.begin(), gens.end(), canonical_less);
}

}  // namespace detail

/// Search the box for (S-)units and extract an independent system of the
/// Dirichlet rank, saturated against every unit found in the box.
inline UnitSystem compute_unit_system(const EtaleAlgebra& e, const std::vector<std::uint64_t>& s_primes,
                                      long box, std::uint64_t budget = 1000000) {
  UnitSystem sys;
  sys.s_primes = s_primes;
  std::sort(sys.s_primes.begin(), sys.s_primes.end());
  sys.torsion = torsion_units(e, budget);
  const auto tors = torsion_elements(e, sys.torsion);
  const std::size_t target = dirichlet_rank(e, sys.s_primes);
  auto cands = search_units(e, box, default_norm_targets(sys.s_primes), budget);
  std::sort(cands.begin(), cands.end(), canonical_less);
  ApproxLogs logs(e, sys.s_primes);
  std::vector<std::vector<long double>> rows;
  std::vector<AlgebraElement> gens;
  std::vector<std::pair<AlgebraElement, std::vector<long double>>> pool;
  for (const auto& c : cands) {
    auto v = logs(c);
    const long double len = std::sqrt(detail::dot(v, v));
    if (len < 1e-9L) continue;  // torsion
    pool.emplace_back(c, v);
    if (gens.size() < target && (rows.empty() || detail::residual(rows, v) > 1e-7L * len)) {
      gens.push_back(c);
      rows.push_back(v);
    }
  }
  if (gens.size() < target)
    throw NoSuchElement("units", "found " + std::to_string(gens.size()) + " of " + std::to_string(target) +
                                     " independent units in the box; enlarge the box");
  // saturate against the box
  for (const auto& [c, v] : pool) {
    auto x = detail::coefficients(rows, v);
    auto near_int = [&](long q) {
      for (auto xi : x)
        if (std::fabs(q * xi - std::round(q * xi)) > 1e-6L * q) return false;
      return true;
    };
    if (near_int(1)) continue;
    for (long q = 2; q <= 24; ++q) {
      if (!near_int(q)) continue;
      std::vector<BigInt> k;
      for (auto xi : x) k.emplace_back(static_cast<long>(std::llround(q * xi)));
      std::vector<BigInt> neg;
      for (auto& ki : k) neg.push_back(-ki);
      auto w = e.mul(e.pow(c, q), detail::power_product(e, gens, neg));
      if (!is_torsion(e, w)) break;
      const std::size_t r = gens.size();
      MatZ nmat(r + 1, r);
      for (std::size_t i = 0; i < r; ++i) nmat(i, i) = q;
      for (std::size_t j = 0; j < r; ++j) nmat(r, j) = k[j];
      auto ech = integer_row_echelon(nmat);
      std::vector<AlgebraElement> all(gens);
      all.push_back(c);
      std::vector<AlgebraElement> next;
      for (std::size_t a = 0; a < r; ++a) next.push_back(detail::power_product(e, all, ech.transform.row(a)));
      gens = std::move(next);
      rows.clear();
      for (const auto& g : gens) rows.push_back(logs(g));
      break;
    }
  }
  detail::reduce_generators(e, gens, tors);
  sys.free = std::move(gens);
  return sys;
}

/// The subgroup of elements of norm 1: kernel of the exponent map to the
/// sign and the p-adic valuations of the norm.
inline UnitSystem norm_one_subgroup(const EtaleAlgebra& e, const UnitSystem& sys) {
  std::vector<AlgebraElement> g(sys.free);
  for (const auto& t : sys.torsion) g.push_back(t.element);
  const std::size_t r = sys.free.size(), m = g.size();
  MatZ a(1 + sys.s_primes.size(), m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const BigRat nrm = e.norm(g[i]);
    a(0, i) = nrm < 0 ? 1 : 0;
    for (std::size_t k = 0; k < sys.s_primes.size(); ++k)
      a(k + 1, i) = valuation(nrm, BigInt(static_cast<unsigned long>(sys.s_primes[k])));
  }
  a(0, m) = -2;
  std::vector<IntVector> basis;
  for (auto& v : integer_kernel(a)) {
    v.pop_back();
    basis.push_back(std::move(v));
  }
  MatZ km(basis.size(), m);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) km(i, j) = basis[i][j];
  auto ech = integer_row_echelon(km);
  UnitSystem out;
  out.s_primes = sys.s_primes;
  std::vector<AlgebraElement> free;
  std::vector<TorsionGenerator> tors;
  for (std::size_t i = 0; i < ech.rank; ++i) {
    const auto row = ech.echelon.row(i);
    const bool torsion_row = std::all_of(row.begin(), row.begin() + static_cast<long>(r),
                                         [](const BigInt& v) { return v == 0; });
    auto elt = detail::power_product(e, g, row);
    if (torsion_row) {
      if (elt != e.one()) tors.push_back({elt, element_order(e, elt)});
    } else {
      free.push_back(elt);
    }
  }
  // canonical torsion generators: highest order first
  if (!tors.empty()) {
    auto all = torsion_elements(e, tors);
    std::vector<std::pair<std::size_t, AlgebraElement>> found;
    for (const auto& t : all)
      if (t != e.one()) found.emplace_back(element_order(e, t), t);
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first > y.first;
      return canonical_less(x.second, y.second);
    });
    std::set<AlgebraElement> generated{e.one()};
    for (const auto& [ord, t] : found) {
      if (generated.count(t)) continue;
      out.torsion.push_back({t, ord});
      auto gen = torsion_elements(e, out.torsion);
      generated = std::set<AlgebraElement>(gen.begin(), gen.end());
    }
  }
  if (out.torsion.empty()) out.torsion.push_back({e.one(), 1});
  detail::reduce_generators(e, free, torsion_elements(e, out.torsion));
  out.free = std::move(free);
  return out;
}

}  // namespace cma
