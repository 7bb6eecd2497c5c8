#pragma once

// Generator sets of arithmetic subgroups of GL_n / SL_n and the checks run
// on them: normalization of pi(E), semidirect structure, sanity.

#include <string>
#include <vector>

#include "cma/arith/matrix.hpp"
#include "cma/groups/automorphisms.hpp"
#include "cma/torus/torus.hpp"

namespace cma {

struct Generator {
  MatQ matrix;
  std::string origin;     // provenance, e.g. "unit 1" or "E_{1,4}"
  std::size_t order = 0;  // torsion generators only
};

struct GeneratorSet {
  std::size_t n = 0;
  Ambient ambient = Ambient::SL;
  std::vector<std::uint64_t> s_primes;
  std::vector<Generator> torus, torsion, normalizer, unipotent;

  /// "Z" or "Z[1/5,1/13]".
  std::string ring() const {
    if (s_primes.empty()) return "Z";
    std::string r = "Z[";
    for (std::size_t i = 0; i < s_primes.size(); ++i) r += (i ? ",1/" : "1/") + std::to_string(s_primes[i]);
    return r + "]";
  }
  std::size_t size() const { return torus.size() + torsion.size() + normalizer.size() + unipotent.size(); }
  std::vector<MatQ> levi() const {
    std::vector<MatQ> v;
    for (const auto* part : {&torus, &torsion, &normalizer})
      for (const auto& g : *part) v.push_back(g.matrix);
    return v;
  }
  std::vector<MatQ> all() const {
    auto v = levi();
    for (const auto& g : unipotent) v.push_back(g.matrix);
    return v;
  }
};

inline std::vector<BigInt> prime_list(const std::vector<std::uint64_t>& s) {
  std::vector<BigInt> v;
  for (auto p : s) v.emplace_back(static_cast<unsigned long>(p));
  return v;
}

/// diag(g, I_{n-k}).
inline MatQ block_embed(const MatQ& g, std::size_t n) {
  if (!g.is_square() || g.rows() > n) throw InvalidArgument("matrix_groups", "block does not fit");
  return block_diagonal(g, MatQ::identity(n - g.rows()));
}

/// I + E_{ij}, 1-based.
inline MatQ elementary_matrix(std::size_t n, std::size_t i, std::size_t j) {
  if (i == j) throw InvalidArgument("matrix_groups", "elementary matrix needs i != j");
  if (i < 1 || j < 1 || i > n || j > n) throw InvalidArgument("matrix_groups", "index out of range");
  MatQ m = MatQ::identity(n);
  m(i - 1, j - 1) = 1;
  return m;
}

struct NormalizationCheck {
  bool ok = false;
  std::size_t failing_index = 0;  // 1-based basis index, 0 when ok
  std::optional<AutomorphismDatum> sigma;
};

/// M pi(b_j) M^-1 must lie in pi(E) for every j; the induced map is sigma.
inline NormalizationCheck verify_normalization(const EtaleAlgebra& e, const MatQ& m) {
  const std::size_t n = e.degree();
  if (m.rows() != n || m.cols() != n) throw InvalidArgument("matrix_groups", "size does not match the algebra");
  if (determinant(m) == 0) throw InvalidArgument("matrix_groups", "singular matrix");
  const MatQ mi = inverse(m);
  NormalizationCheck out;
  AutomorphismDatum s;
  for (std::size_t j = 0; j < n; ++j) {
    auto img = e.from_regular_rep(m * e.regular_rep(e.basis_element(j)) * mi);
    if (!img) {
      out.failing_index = j + 1;
      return out;
    }
    s.images.push_back(*img);
  }
  out.ok = true;
  out.sigma = std::move(s);
  return out;
}

inline bool is_unipotent(const MatQ& m) {
  const std::size_t n = m.rows();
  const MatQ d = m - MatQ::identity(n);
  return matrix_power(d, static_cast<long>(n)) == MatQ(n, n);
}

struct SemidirectCheck {
  bool ok = false;
  std::string reason;
  std::size_t levi_index = 0, unipotent_index = 0;  // 1-based, 0 when not applicable
};

/// Every unipotent generator is unipotent and every conjugate t^{+-1} u t^{-+1}
/// is unipotent with support inside the joint support of the u - I.
inline SemidirectCheck verify_semidirect(const std::vector<MatQ>& levi, const std::vector<MatQ>& unipotent) {
  if (unipotent.empty()) return {true, "", 0, 0};
  const std::size_t n = unipotent.front().rows();
  PolyQ target = PolyQ::constant(BigRat(1));
  for (std::size_t i = 0; i < n; ++i) target = target * PolyQ(std::vector<BigRat>{BigRat(-1), BigRat(1)});
  std::vector<bool> pattern(n * n, false);
  for (std::size_t k = 0; k < unipotent.size(); ++k) {
    const auto& u = unipotent[k];
    if (u.rows() != n || !u.is_square()) return {false, "size mismatch", 0, k + 1};
    if (!is_unipotent(u)) return {false, "generator is not unipotent", 0, k + 1};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (u(i, j) != (i == j ? 1 : 0)) pattern[i * n + j] = true;
  }
  for (std::size_t a = 0; a < levi.size(); ++a) {
    const MatQ& t = levi[a];
    if (t.rows() != n) return {false, "size mismatch", a + 1, 0};
    const MatQ ti = inverse(t);
    for (std::size_t k = 0; k < unipotent.size(); ++k)
      for (const MatQ& c : {t * unipotent[k] * ti, ti * unipotent[k] * t}) {
        if (!(charpoly(c) == target))
          return {false, "conjugate is not unipotent", a + 1, k + 1};
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (!pattern[i * n + j] && c(i, j) != (i == j ? 1 : 0))
              return {false, "conjugate leaves the unipotent pattern", a + 1, k + 1};
      }
  }
  return {true, "", 0, 0};
}

struct SanityCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct SanityReport {
  std::vector<SanityCheck> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const SanityCheck* first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }
};

inline bool is_s_unit_scalar(const BigRat& q, const std::vector<BigInt>& primes) {
  if (q == 0) return false;
  return is_s_integral(q, primes) && is_s_integral(BigRat(1) / q, primes);
}

/// Determinants, S-integrality of generators and inverses, commutation in the
/// torus, torsion orders, normalizer relations and the semidirect structure.
inline SanityReport group_sanity(const GeneratorSet& g) {
  SanityReport rep;
  const auto primes = prime_list(g.s_primes);
  auto label = [](const char* part, std::size_t i) { return std::string(part) + " " + std::to_string(i + 1); };
  auto each = [&](auto&& fn) {
    const std::pair<const char*, const std::vector<Generator>*> parts[] = {
        {"torus", &g.torus}, {"torsion", &g.torsion}, {"normalizer", &g.normalizer}, {"unipotent", &g.unipotent}};
    for (const auto& [name, v] : parts)
      for (std::size_t i = 0; i < v->size(); ++i) fn(label(name, i), (*v)[i].matrix);
  };

  SanityCheck shape{"shape", true, ""};
  each([&](const std::string& l, const MatQ& m) {
    if (shape.passed && (m.rows() != g.n || m.cols() != g.n)) shape = {"shape", false, l + " is not n x n"};
  });
  rep.checks.push_back(shape);
  if (!shape.passed) return rep;

  SanityCheck det{"determinant", true, ""};
  each([&](const std::string& l, const MatQ& m) {
    if (!det.passed) return;
    const BigRat d = determinant(m);
    const bool good = g.ambient == Ambient::SL ? d == 1 : is_s_unit_scalar(d, primes);
    if (!good) det = {"determinant", false, l + " has determinant " + d.get_str()};
  });
  rep.checks.push_back(det);

  SanityCheck integ{"s_integral", true, ""};
  each([&](const std::string& l, const MatQ& m) {
    if (!integ.passed) return;
    if (!is_s_integral(m, primes)) integ = {"s_integral", false, l + " is not " + g.ring() + "-integral"};
    else if (determinant(m) == 0 || !is_s_integral(inverse(m), primes))
      integ = {"s_integral", false, "inverse of " + l + " is not " + g.ring() + "-integral"};
  });
  rep.checks.push_back(integ);

  SanityCheck comm{"torus_commutes", true, ""};
  std::vector<std::pair<std::string, MatQ>> tor;
  for (std::size_t i = 0; i < g.torus.size(); ++i) tor.emplace_back(label("torus", i), g.torus[i].matrix);
  for (std::size_t i = 0; i < g.torsion.size(); ++i) tor.emplace_back(label("torsion", i), g.torsion[i].matrix);
  for (std::size_t i = 0; i < tor.size() && comm.passed; ++i)
    for (std::size_t j = i + 1; j < tor.size() && comm.passed; ++j)
      if (tor[i].second * tor[j].second != tor[j].second * tor[i].second)
        comm = {"torus_commutes", false, tor[i].first + " and " + tor[j].first + " do not commute"};
  rep.checks.push_back(comm);

  SanityCheck ord{"torsion_order", true, ""};
  for (std::size_t i = 0; i < g.torsion.size() && ord.passed; ++i) {
    const auto& t = g.torsion[i];
    const MatQ id = MatQ::identity(g.n);
    bool good = t.order > 0 && matrix_power(t.matrix, static_cast<long>(t.order)) == id;
    for (std::size_t d = 1; good && d < t.order; ++d)
      if (t.order % d == 0 && matrix_power(t.matrix, static_cast<long>(d)) == id) good = false;
    if (!good) ord = {"torsion_order", false, label("torsion", i) + " does not have order " + std::to_string(t.order)};
  }
  rep.checks.push_back(ord);

  // conjugating the torus must land in its centralizer
  SanityCheck norm{"normalizer", true, ""};
  for (std::size_t i = 0; i < g.normalizer.size() && norm.passed; ++i) {
    const MatQ& w = g.normalizer[i].matrix;
    const MatQ wi = inverse(w);
    for (const auto& [tl, t] : tor) {
      for (const MatQ& c : {w * t * wi, wi * t * w})
        for (const auto& [sl, s] : tor)
          if (norm.passed && c * s != s * c)
            norm = {"normalizer", false, label("normalizer", i) + " does not normalize the torus at " + tl};
    }
  }
  rep.checks.push_back(norm);

  auto sd = verify_semidirect(g.levi(), [&] {
    std::vector<MatQ> v;
    for (const auto& u : g.unipotent) v.push_back(u.matrix);
    return v;
  }());
  rep.checks.push_back({"semidirect", sd.ok, sd.ok ? "" : sd.reason});
  return rep;
}

}  // namespace cma
