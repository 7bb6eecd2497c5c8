#pragma once

// Maximal tori pi(E^x) in GL_n and their norm-one subtori in SL_n, seen
// through the rational cocharacter module: Q^n with the Galois group
// permuting the embeddings (GL_n), or its zero-sum subspace (SL_n).
// Ranks are dimensions of invariants: the whole group for the Q-rank, a
// decomposition group for a local rank.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cma/arith/matrix.hpp"
#include "cma/etale/algebra.hpp"
#include "cma/galois/places.hpp"

namespace cma {

enum class Ambient { GL, SL };

inline std::string to_string(Ambient a) { return a == Ambient::GL ? "GL" : "SL"; }

inline Ambient parse_ambient(const std::string& s) {
  if (s == "GL" || s == "GL_n" || s == "gl") return Ambient::GL;
  if (s == "SL" || s == "SL_n" || s == "sl") return Ambient::SL;
  throw InvalidArgument("torus_ample", "unknown ambient group '" + s + "' (GL or SL)");
}

/// One orbit block of embeddings with its permutation group.
struct GaloisBlock {
  GaloisTag tag;
  std::size_t offset = 0;
};

struct TorusDatum {
  std::optional<EtaleAlgebra> algebra;
  Ambient ambient = Ambient::SL;
  std::size_t n = 0;                 // number of embeddings
  std::vector<GaloisBlock> blocks;   // the group is the product over blocks
  MatQ basis;                        // rows span the cocharacter module in Q^n
  /// Decomposition group generators per place key (0 = infinity), used
  /// when there is no algebra to compute them from.
  std::map<std::uint64_t, std::vector<Permutation>> decomposition;

  std::size_t dimension() const { return basis.rows(); }

  std::vector<Permutation> galois_generators() const {
    std::vector<Permutation> out;
    for (const auto& b : blocks)
      for (const auto& g : b.tag.generators) out.push_back(lift(b, g));
    return out;
  }

  std::vector<Permutation> galois_elements() const { return generate_group(n, galois_generators()); }

  /// A permutation of one block extended by the identity.
  Permutation lift(const GaloisBlock& b, const Permutation& g) const {
    std::vector<int> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<int>(i);
    for (std::size_t i = 0; i < g.size(); ++i) img[b.offset + i] = static_cast<int>(b.offset) + g(static_cast<int>(i));
    return Permutation(std::move(img));
  }

  /// A torus given directly by its cocharacter module: one permutation
  /// group (with the standard generators of `tag`), a basis of a stable
  /// subspace, and decomposition groups per place.
  static TorusDatum from_cocharacters(GaloisTag tag, std::size_t n, MatQ basis, Ambient ambient,
                                      std::map<std::uint64_t, std::vector<Permutation>> decomposition = {}) {
    TorusDatum t;
    t.ambient = ambient;
    t.n = n;
    for (const auto& g : tag.generators)
      if (g.size() != n) throw InvalidArgument("torus_ample", "generator acts on the wrong number of points");
    tag.degree = n;
    t.blocks.push_back({std::move(tag), 0});
    if (basis.cols() != n) throw InvalidArgument("torus_ample", "basis has the wrong width");
    t.basis = std::move(basis);
    t.decomposition = std::move(decomposition);
    t.check_stable();
    return t;
  }

  void check_stable() const;
};

namespace detail {

/// Row basis of the row space of m.
inline MatQ row_space(const MatQ& m) {
  MatQ w(m);
  auto piv = row_reduce(w, nullptr, true);
  MatQ out(piv.size(), m.cols());
  for (std::size_t i = 0; i < piv.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = w(i, j);
  return out;
}

/// Permutation matrix with e_i -> e_{g(i)}.
inline MatQ permutation_matrix(const Permutation& g) {
  MatQ p(g.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i) p(static_cast<std::size_t>(g(static_cast<int>(i))), i) = 1;
  return p;
}

/// Rows of `basis` acted on by g (row vectors: v -> v P^T).
inline MatQ act(const MatQ& basis, const Permutation& g) {
  return basis * permutation_matrix(g).transpose();
}

inline MatQ stack(const std::vector<MatQ>& parts, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& p : parts) rows += p.rows();
  MatQ out(rows, cols);
  std::size_t r = 0;
  for (const auto& p : parts)
    for (std::size_t i = 0; i < p.rows(); ++i, ++r)
      for (std::size_t j = 0; j < cols; ++j) out(r, j) = p(i, j);
  return out;
}

}  // namespace detail

inline void TorusDatum::check_stable() const {
  const std::size_t r = rank(basis);
  for (const auto& g : galois_generators()) {
    MatQ both = detail::stack({basis, detail::act(basis, g)}, n);
    if (rank(both) != r) throw InvalidArgument("torus_ample", "module is not stable under " + g.str());
  }
}

/// Invariant subspace of the row space of `basis` under the group
/// generated by `gens`, as a row basis.
inline MatQ invariant_subspace(const MatQ& basis, const std::vector<Permutation>& gens) {
  const std::size_t k = basis.rows(), n = basis.cols();
  if (k == 0) return MatQ(0, n);
  // c * basis * (P_g^T - I) = 0 for every generator
  MatQ big(k, n * std::max<std::size_t>(gens.size(), 1));
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    MatQ d = detail::act(basis, gens[gi]);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < n; ++j) big(i, gi * n + j) = d(i, j) - basis(i, j);
  }
  auto ker = kernel(big.transpose());
  MatQ out(ker.size(), n);
  for (std::size_t a = 0; a < ker.size(); ++a)
    for (std::size_t i = 0; i < k; ++i)
      if (ker[a][i] != 0)
        for (std::size_t j = 0; j < n; ++j) out(a, j) += ker[a][i] * basis(i, j);
  return detail::row_space(out);
}

inline std::size_t invariant_dimension(const MatQ& basis, const std::vector<Permutation>& gens) {
  return invariant_subspace(basis, gens).rows();
}

/// The cocharacter module of pi(E^x) (GL) or its norm-one part (SL).
inline TorusDatum build_torus(const EtaleAlgebra& e, Ambient ambient) {
  if (!e.is_order().ok) throw InvalidArgument("torus_ample", "order basis does not span an order");
  TorusDatum t;
  t.algebra = e;
  t.ambient = ambient;
  t.n = e.degree();
  for (std::size_t k = 0; k < e.num_factors(); ++k) {
    if (e.factor_degree(k) > 4)
      throw Unsupported("torus_ample", "Galois groups are supported up to degree 4");
    t.blocks.push_back({galois_group_small(e.factor(k)), e.factor_offset(k)});
  }
  if (ambient == Ambient::GL) {
    t.basis = MatQ::identity(t.n);
  } else {
    t.basis = MatQ(t.n == 0 ? 0 : t.n - 1, t.n);
    for (std::size_t i = 0; i + 1 < t.n; ++i) {
      t.basis(i, i) = 1;
      t.basis(i, i + 1) = -1;
    }
  }
  return t;
}

/// rk_Q: dimension of the Galois invariants.
inline std::size_t global_rank(const TorusDatum& t) {
  return invariant_dimension(t.basis, t.galois_generators());
}

/// Generators of the decomposition group at a place, on all embeddings.
inline std::vector<Permutation> decomposition_generators(const TorusDatum& t, const Place& place) {
  const std::uint64_t key = place.is_infinite() ? 0 : place.p();
  if (!t.algebra) {
    auto it = t.decomposition.find(key);
    if (it == t.decomposition.end())
      throw InvalidArgument("torus_ample", "no decomposition group given at " + place.str());
    return it->second;
  }
  const auto& e = *t.algebra;
  std::vector<int> img(t.n);
  for (std::size_t i = 0; i < t.n; ++i) img[i] = static_cast<int>(i);
  bool trivial = true;
  for (std::size_t k = 0; k < t.blocks.size(); ++k) {
    auto prof = decomposition_profile(e.factor(k), t.blocks[k].tag, place);
    for (const auto& g : prof.subgroup_generators) {
      trivial = false;
      for (std::size_t i = 0; i < g.size(); ++i)
        img[t.blocks[k].offset + i] = static_cast<int>(t.blocks[k].offset) + g(static_cast<int>(i));
    }
  }
  if (trivial) return {};
  return {Permutation(std::move(img))};
}

/// rk_{Q_v}: dimension of the decomposition-group invariants.
inline std::size_t local_rank(const TorusDatum& t, const Place& place) {
  return invariant_dimension(t.basis, decomposition_generators(t, place));
}

// --- rational characters and decomposition -------------------------------

struct RationalCharacter {
  std::string name;
  long degree = 1;          // psi(1), the dimension of the Q-irreducible
  long complex_degree = 1;  // dimension of one complex constituent
  std::map<Permutation, long> values;
};

/// Q-irreducible characters of the supported groups, hard-coded per tag.
inline std::vector<RationalCharacter> rational_characters(const GaloisTag& tag) {
  const auto elts = tag.elements();
  const std::size_t n = tag.degree;
  auto make = [&](const std::string& name, long cdeg, auto f) {
    RationalCharacter c;
    c.name = name;
    c.complex_degree = cdeg;
    for (const auto& g : elts) c.values[g] = f(g);
    c.degree = c.values.at(Permutation::identity(n));
    return c;
  };
  auto trivial = [](const Permutation&) { return 1L; };
  auto order = [](const Permutation& g) { return static_cast<long>(g.order()); };
  auto parity = [](const Permutation& g) {
    long s = 1;
    for (int l : g.cycle_type())
      if (l % 2 == 0) s = -s;
    return s;
  };
  auto kernel_char = [&](std::vector<Permutation> gens) {
    auto k = generate_group(n, gens);
    return [k](const Permutation& g) { return std::binary_search(k.begin(), k.end(), g) ? 1L : -1L; };
  };
  std::vector<RationalCharacter> out{make("trivial", 1, trivial)};
  const std::string& G = tag.group;
  if (G == "C1") {
  } else if (G == "C2") {
    out.push_back(make("sign", 1, [&](const Permutation& g) { return g.is_identity() ? 1L : -1L; }));
  } else if (G == "C3") {
    out.push_back(make("rho2", 1, [&](const Permutation& g) { return g.is_identity() ? 2L : -1L; }));
  } else if (G == "S3") {
    out.push_back(make("sign", 1, [&](const Permutation& g) { return order(g) == 2 ? -1L : 1L; }));
    out.push_back(make("standard", 2, [&](const Permutation& g) {
      const long o = order(g);
      return o == 1 ? 2L : o == 2 ? 0L : -1L;
    }));
  } else if (G == "C4") {
    out.push_back(make("sign", 1, [&](const Permutation& g) { return order(g) == 4 ? -1L : 1L; }));
    out.push_back(make("rho2", 1, [&](const Permutation& g) {
      const long o = order(g);
      return o == 1 ? 2L : o == 2 ? -2L : 0L;
    }));
  } else if (G == "V4") {
    const auto& a = tag.generators.at(0);
    const auto& b = tag.generators.at(1);
    out.push_back(make("chi1", 1, kernel_char({a})));
    out.push_back(make("chi2", 1, kernel_char({b})));
    out.push_back(make("chi3", 1, kernel_char({a * b})));
  } else if (G == "D4") {
    const auto& r = tag.generators.at(0);
    const auto& s = tag.generators.at(1);
    const Permutation r2 = r * r;
    out.push_back(make("chi_rot", 1, kernel_char({r})));
    out.push_back(make("chi_s", 1, kernel_char({r2, s})));
    out.push_back(make("chi_rs", 1, kernel_char({r2, r * s})));
    out.push_back(make("rho2", 2, [r2](const Permutation& g) {
      return g.is_identity() ? 2L : g == r2 ? -2L : 0L;
    }));
  } else if (G == "A4") {
    out.push_back(make("rho2", 1, [&](const Permutation& g) { return order(g) == 3 ? -1L : 2L; }));
    out.push_back(make("standard", 3, [&](const Permutation& g) {
      const long o = order(g);
      return o == 1 ? 3L : o == 2 ? -1L : 0L;
    }));
  } else if (G == "S4") {
    out.push_back(make("sign", 1, parity));
    out.push_back(make("rho2", 2, [&](const Permutation& g) {
      const long o = order(g);
      if (o == 1) return 2L;
      if (o == 3) return -1L;
      return parity(g) == 1 && o == 2 ? 2L : 0L;
    }));
    out.push_back(make("standard", 3, [&](const Permutation& g) {
      const long o = order(g);
      if (o == 1) return 3L;
      if (o == 3) return 0L;
      if (o == 4) return -1L;
      return parity(g) == -1 ? 1L : -1L;
    }));
    out.push_back(make("standard_sign", 3, [&](const Permutation& g) {
      const long o = order(g);
      if (o == 1) return 3L;
      if (o == 3) return 0L;
      if (o == 4) return 1L;
      return -1L;
    }));
  } else {
    throw Unsupported("torus_ample", "no character table for " + G);
  }
  return out;
}

namespace detail {

/// Isotypic projector (complex_degree / |G|) sum psi(g^-1) P_g on a block,
/// zero outside it.
inline MatQ isotypic_projector(const TorusDatum& t, const GaloisBlock& b, const RationalCharacter& chi) {
  MatQ e(t.n, t.n);
  const BigRat scale = make_rat(chi.complex_degree, static_cast<long>(chi.values.size()));
  for (const auto& [g, v] : chi.values) {
    const long w = chi.values.at(g.inverse());
    if (w == 0) continue;
    for (std::size_t i = 0; i < g.size(); ++i)
      e(b.offset + static_cast<std::size_t>(g(static_cast<int>(i))), b.offset + i) += scale * BigRat(w);
  }
  return e;
}

}  // namespace detail

struct ModuleComponent {
  std::string character;   // "trivial" or "<block>:<name>"
  std::size_t block = 0;   // meaningless for the trivial component
  MatQ basis;              // rows
  std::size_t multiplicity = 1;
};

struct IrreducibleDecomposition {
  std::vector<ModuleComponent> components;
  bool multiplicity_free = true;
  std::string reason;  // why not multiplicity-free
};

/// Isotypic decomposition of the cocharacter module into Q-irreducible
/// types. Nontrivial components of different blocks with equal dimension
/// might be isomorphic for the true (fibre product) Galois group, so they
/// are conservatively treated as a repeated constituent.
inline IrreducibleDecomposition decompose_module(const TorusDatum& t) {
  IrreducibleDecomposition out;
  MatQ triv(t.n, t.n);
  std::vector<std::pair<MatQ, std::pair<std::size_t, RationalCharacter>>> nontriv;
  for (std::size_t k = 0; k < t.blocks.size(); ++k) {
    auto chars = rational_characters(t.blocks[k].tag);
    for (const auto& chi : chars) {
      MatQ e = detail::isotypic_projector(t, t.blocks[k], chi);
      if (chi.name == "trivial") {
        triv = triv + e;
      } else {
        nontriv.push_back({e, {k, chi}});
      }
    }
  }
  auto image = [&](const MatQ& e) { return detail::row_space(t.basis * e.transpose()); };
  std::size_t total = 0;
  MatQ tb = image(triv);
  if (tb.rows() > 0) {
    total += tb.rows();
    out.components.push_back({"trivial", 0, tb, tb.rows()});
  }
  for (const auto& [e, kc] : nontriv) {
    MatQ b = image(e);
    if (b.rows() == 0) continue;
    total += b.rows();
    const auto& chi = kc.second;
    const std::size_t mult = b.rows() / static_cast<std::size_t>(chi.degree);
    out.components.push_back({std::to_string(kc.first) + ":" + chi.name, kc.first, b, mult});
  }
  if (total != t.dimension())
    throw InvalidArgument("torus_ample", "isotypic components do not span the module");
  for (const auto& c : out.components)
    if (c.multiplicity > 1) {
      out.multiplicity_free = false;
      out.reason = "component " + c.character + " has multiplicity " + std::to_string(c.multiplicity);
      return out;
    }
  for (std::size_t i = 0; i < out.components.size(); ++i)
    for (std::size_t j = i + 1; j < out.components.size(); ++j) {
      const auto& a = out.components[i];
      const auto& b = out.components[j];
      if (a.character == "trivial" || b.character == "trivial") continue;
      if (a.block != b.block && a.basis.rows() == b.basis.rows()) {
        out.multiplicity_free = false;
        out.reason = "components " + a.character + " and " + b.character +
                     " may be isomorphic over the compositum";
        return out;
      }
    }
  return out;
}

// --- place sets and the ampleness certificate -----------------------------

struct PlaceSet {
  bool include_infty = true;
  std::vector<std::uint64_t> finite_primes;

  /// "inf,5,13"
  static PlaceSet parse(const std::string& text) {
    PlaceSet s;
    s.include_infty = false;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
      if (item.empty()) continue;
      Place p = Place::parse(item);
      if (p.is_infinite()) {
        s.include_infty = true;
      } else {
        s.finite_primes.push_back(p.p());
      }
    }
    s.normalize();
    return s;
  }

  void normalize() {
    std::sort(finite_primes.begin(), finite_primes.end());
    finite_primes.erase(std::unique(finite_primes.begin(), finite_primes.end()), finite_primes.end());
    for (auto p : finite_primes) Place::prime(p);
  }

  std::vector<Place> places() const {
    std::vector<Place> out;
    if (include_infty) out.push_back(Place::infinity());
    for (auto p : finite_primes) out.push_back(Place::prime(p));
    return out;
  }

  std::string str() const {
    std::string s;
    for (const auto& p : places()) s += (s.empty() ? "" : ",") + p.short_str();
    return s;
  }

  void validate(Ambient ambient, std::size_t n) const {
    if (!include_infty && finite_primes.empty()) throw InvalidArgument("torus_ample", "empty place set");
    if (ambient == Ambient::SL && n >= 2 && !include_infty)
      throw InvalidArgument("torus_ample", "S must contain the real place for SL_n");
  }
};

enum class Verdict { Ample, NotAmple, Undecidable };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Ample: return "S-ample";
    case Verdict::NotAmple: return "not-S-ample";
    default: return "undecidable";
  }
}

/// A proper submodule W (a set of components) and the first place of S
/// where dim W^{D_v} < dim V^{D_v}, if any.
struct SubmoduleWitness {
  std::vector<std::size_t> components;
  std::size_t dimension = 0;
  std::optional<Place> place;
  std::size_t sub_rank = 0;
  std::size_t full_rank = 0;
};

struct AmpleCertificate {
  Verdict verdict = Verdict::Undecidable;
  std::string ambient;
  std::string places;
  // central rank
  std::size_t global_rank = 0;
  std::size_t center_rank = 0;
  bool condition_i = false;
  // self-centralizing, by maximality
  std::string condition_ii = "maximal torus: its centralizer is itself";
  // proper subtori
  bool condition_iii = false;
  bool multiplicity_free = false;
  std::string reason;
  std::vector<std::string> component_characters;
  std::vector<std::size_t> component_dims;
  std::vector<Place> place_list;
  std::vector<std::size_t> local_ranks;                       // per place
  std::vector<std::vector<std::size_t>> component_invariants;  // [component][place]
  std::vector<SubmoduleWitness> witnesses;
  std::optional<SubmoduleWitness> violation;
  std::vector<PlaceProfile> places_used;

  /// Re-derive the verdict from the stored numbers alone.
  bool replay() const {
    if (condition_i != (global_rank == center_rank)) return false;
    if (!condition_i) return verdict == Verdict::NotAmple;
    if (!multiplicity_free) return verdict == Verdict::Undecidable;
    const std::size_t c = component_dims.size();
    for (std::size_t v = 0; v < place_list.size(); ++v) {
      std::size_t s = 0;
      for (std::size_t k = 0; k < c; ++k) s += component_invariants[k][v];
      if (s != local_ranks[v]) return false;
    }
    bool all_ok = true;
    for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << c); ++mask) {
      std::vector<std::size_t> comps;
      for (std::size_t k = 0; k < c; ++k)
        if (mask >> k & 1) comps.push_back(k);
      bool has = false;
      for (std::size_t v = 0; v < place_list.size(); ++v) {
        std::size_t sub = 0;
        for (auto k : comps) sub += component_invariants[k][v];
        if (sub < local_ranks[v]) has = true;
      }
      const SubmoduleWitness* w = nullptr;
      for (const auto& x : witnesses)
        if (x.components == comps) w = &x;
      if (has) {
        if (!w || !w->place) return false;
        auto it = std::find(place_list.begin(), place_list.end(), *w->place);
        if (it == place_list.end()) return false;
        const std::size_t v = static_cast<std::size_t>(it - place_list.begin());
        std::size_t sub = 0;
        for (auto k : comps) sub += component_invariants[k][v];
        if (sub != w->sub_rank || local_ranks[v] != w->full_rank || !(w->sub_rank < w->full_rank)) return false;
      } else {
        all_ok = false;
        if (!violation || violation->components != comps) return false;
      }
      if (!all_ok) break;
    }
    if (all_ok != condition_iii) return false;
    return verdict == (all_ok ? Verdict::Ample : Verdict::NotAmple);
  }
};

inline AmpleCertificate is_s_ample(const TorusDatum& t, const PlaceSet& s) {
  s.validate(t.ambient, t.n);
  AmpleCertificate cert;
  cert.ambient = to_string(t.ambient);
  cert.places = s.str();
  cert.place_list = s.places();
  if (t.algebra)
    for (auto p : s.finite_primes)
      for (std::size_t k = 0; k < t.algebra->num_factors(); ++k) {
        const BigInt disc = discriminant(t.algebra->factor(k));
        if (mpz_divisible_ui_p(disc.get_mpz_t(), p))
          throw RamifiedPlace("torus_ample", BigInt(static_cast<unsigned long>(p)), disc);
      }
  std::vector<std::vector<Permutation>> dgens;
  for (const auto& pl : cert.place_list) {
    dgens.push_back(decomposition_generators(t, pl));
    cert.local_ranks.push_back(invariant_dimension(t.basis, dgens.back()));
    PlaceProfile prof;
    prof.place = pl;
    prof.subgroup_generators = dgens.back();
    prof.orbits = orbits(t.n, dgens.back());
    prof.num_places_over = prof.orbits.size();
    cert.places_used.push_back(std::move(prof));
  }
  cert.global_rank = global_rank(t);
  cert.center_rank = t.ambient == Ambient::GL ? 1 : 0;
  cert.condition_i = cert.global_rank == cert.center_rank;
  if (!cert.condition_i) {
    cert.verdict = Verdict::NotAmple;
    cert.reason = "rk_Q T = " + std::to_string(cert.global_rank) + " differs from rk_Q Z = " +
                  std::to_string(cert.center_rank);
    return cert;
  }
  auto dec = decompose_module(t);
  cert.multiplicity_free = dec.multiplicity_free;
  for (const auto& c : dec.components) {
    cert.component_characters.push_back(c.character);
    cert.component_dims.push_back(c.basis.rows());
  }
  if (!dec.multiplicity_free) {
    cert.verdict = Verdict::Undecidable;
    cert.reason = "module is not multiplicity-free: " + dec.reason;
    return cert;
  }
  for (const auto& c : dec.components) {
    std::vector<std::size_t> row;
    for (const auto& g : dgens) row.push_back(invariant_dimension(c.basis, g));
    cert.component_invariants.push_back(std::move(row));
  }
  const std::size_t c = dec.components.size();
  cert.condition_iii = true;
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << c); ++mask) {
    SubmoduleWitness w;
    for (std::size_t k = 0; k < c; ++k)
      if (mask >> k & 1) {
        w.components.push_back(k);
        w.dimension += cert.component_dims[k];
      }
    for (std::size_t v = 0; v < cert.place_list.size(); ++v) {
      std::size_t sub = 0;
      for (auto k : w.components) sub += cert.component_invariants[k][v];
      if (sub < cert.local_ranks[v]) {
        w.place = cert.place_list[v];
        w.sub_rank = sub;
        w.full_rank = cert.local_ranks[v];
        break;
      }
    }
    if (!w.place) {
      cert.condition_iii = false;
      cert.violation = w;
      break;
    }
    cert.witnesses.push_back(std::move(w));
  }
  cert.verdict = cert.condition_iii ? Verdict::Ample : Verdict::NotAmple;
  if (!cert.condition_iii)
    cert.reason = "a proper subtorus of dimension " + std::to_string(cert.violation->dimension) +
                  " has full rank at every place of S";
  return cert;
}

/// Maximal split part at a place (nullopt: over Q) and its canonical
/// anisotropic complement, the image of 1 - (average over the group).
struct SplitParts {
  MatQ split;
  MatQ anisotropic;
};

inline SplitParts anisotropic_and_split_parts(const TorusDatum& t, const std::optional<Place>& place) {
  std::vector<Permutation> gens = place ? decomposition_generators(t, *place) : t.galois_generators();
  SplitParts out;
  out.split = invariant_subspace(t.basis, gens);
  const auto elts = generate_group(t.n, gens);
  MatQ avg(t.n, t.n);
  const BigRat w(1, static_cast<long>(elts.size()));
  for (const auto& g : elts) avg = avg + w * detail::permutation_matrix(g);
  MatQ comp = MatQ::identity(t.n) - avg;
  out.anisotropic = detail::row_space(t.basis * comp.transpose());
  return out;
}

}  // namespace cma
