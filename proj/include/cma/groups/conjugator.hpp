#pragma once

// Comparing two generator sets of the same group up to GL_n(Z)-conjugacy.
// Candidates are P = pi(u) A_sigma with entries bounded by the box; a
// candidate is accepted when the conjugated groups coincide exactly.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cma/arith/lattice.hpp"
#include "cma/groups/matrix_groups.hpp"
#include "cma/units/units.hpp"

namespace cma {

struct Membership {
  std::vector<BigInt> exponents;  // on sys.free
  AlgebraElement torsion;         // the remaining root of unity
};

/// Writes a as zeta * prod u_i^{e_i} over sys, or nullopt.
inline std::optional<Membership> unit_membership(const EtaleAlgebra& e, const UnitSystem& sys,
                                                 const AlgebraElement& a) {
  if (a.size() != e.degree() || !e.is_unit(a)) return std::nullopt;
  const auto tors = torsion_elements(e, sys.torsion);
  std::vector<BigInt> ex(sys.free.size(), BigInt(0));
  if (!sys.free.empty()) {
    ApproxLogs logs(e, sys.s_primes);
    std::vector<std::vector<long double>> rows;
    for (const auto& u : sys.free) rows.push_back(logs(u));
    const auto v = logs(a);
    const auto x = detail::coefficients(rows, v);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const long double r = std::round(x[i]);
      if (std::fabs(x[i] - r) > 1e-4L || std::fabs(r) > 1e6L) return std::nullopt;
      ex[i] = BigInt(static_cast<long>(r));
    }
  }
  const AlgebraElement rest = e.mul(a, e.inverse(detail::power_product(e, sys.free, ex)));
  for (const auto& z : tors)
    if (z == rest) return Membership{ex, z};
  return std::nullopt;
}

/// Elements of the subgroup of E^x generated by gens: does it equal the
/// group of sys? gens must already lie in it.
inline bool generates(const EtaleAlgebra& e, const UnitSystem& sys, const std::vector<AlgebraElement>& gens) {
  const std::size_t r = sys.free.size();
  std::vector<Membership> mem;
  for (const auto& g : gens) {
    auto m = unit_membership(e, sys, g);
    if (!m) return false;
    mem.push_back(*m);
  }
  if (r > 0) {
    if (mem.empty()) return false;
    MatZ a(mem.size(), r);
    for (std::size_t i = 0; i < mem.size(); ++i)
      for (std::size_t j = 0; j < r; ++j) a(i, j) = mem[i].exponents[j];
    auto ech = integer_row_echelon(a);
    if (ech.rank != r) return false;
    for (std::size_t j = 0; j < r; ++j) {
      BigInt piv = 0;
      for (std::size_t c = 0; c < r; ++c)
        if (ech.echelon(j, c) != 0) {
          piv = ech.echelon(j, c);
          break;
        }
      if (abs(piv) != 1) return false;
    }
  }
  // torsion reached by exponent relations
  std::vector<TorsionGenerator> reached;
  MatZ at(r, mem.size());
  for (std::size_t i = 0; i < mem.size(); ++i)
    for (std::size_t j = 0; j < r; ++j) at(j, i) = mem[i].exponents[j];
  std::vector<IntVector> rel;
  if (r == 0) {
    for (std::size_t i = 0; i < mem.size(); ++i) {
      IntVector v(mem.size(), BigInt(0));
      v[i] = 1;
      rel.push_back(v);
    }
  } else {
    rel = integer_kernel(at);
  }
  for (const auto& c : rel) {
    std::vector<AlgebraElement> zs;
    for (const auto& m : mem) zs.push_back(m.torsion);
    auto z = detail::power_product(e, zs, c);
    if (z != e.one()) reached.push_back({z, element_order(e, z)});
  }
  const auto target = torsion_elements(e, sys.torsion);
  const auto got = reached.empty() ? std::vector<AlgebraElement>{e.one()} : torsion_elements(e, reached);
  return std::set<AlgebraElement>(got.begin(), got.end()) == std::set<AlgebraElement>(target.begin(), target.end());
}

/// What the generator set of a torus in SL_n(Z[1/S]) attached to E looks like
/// from inside E: the norm-one unit system and the automorphisms used.
struct TorusFrame {
  const EtaleAlgebra* algebra = nullptr;
  UnitSystem norm_one;
  std::vector<AutomorphismDatum> automorphisms;  // Aut(O), identity first
};

struct ConjugatorResult {
  bool found = false;
  std::optional<MatQ> conjugator;  // P with theirs = P ours P^-1
  std::size_t candidates_tried = 0;
  std::vector<std::string> caveats;
};

namespace detail {

inline std::optional<std::size_t> find_automorphism(const std::vector<AutomorphismDatum>& auts,
                                                    const AutomorphismDatum& s) {
  for (std::size_t i = 0; i < auts.size(); ++i)
    if (auts[i] == s) return i;
  return std::nullopt;
}

/// Closure of the automorphisms induced by normalizer matrices, each with a
/// representative matrix in the group generated.
inline std::optional<std::map<std::size_t, MatQ>> induced_automorphisms(const TorusFrame& fr,
                                                                        const std::vector<MatQ>& normalizer) {
  const EtaleAlgebra& e = *fr.algebra;
  std::vector<std::pair<std::size_t, MatQ>> gens;
  for (const auto& w : normalizer) {
    auto chk = verify_normalization(e, w);
    if (!chk.ok) return std::nullopt;
    auto idx = find_automorphism(fr.automorphisms, *chk.sigma);
    if (!idx) return std::nullopt;
    gens.emplace_back(*idx, w);
  }
  std::map<std::size_t, MatQ> reps{{0, MatQ::identity(e.degree())}};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [k, m] : std::map<std::size_t, MatQ>(reps))
      for (const auto& [gi, gm] : gens) {
        const MatQ prod = m * gm;
        auto chk = verify_normalization(e, prod);
        if (!chk.ok) return std::nullopt;
        auto idx = find_automorphism(fr.automorphisms, *chk.sigma);
        if (idx && !reps.count(*idx)) {
          reps.emplace(*idx, prod);
          grew = true;
        }
      }
  }
  return reps;
}

/// Every matrix of theirs (conjugated back by P) lies in our group, and the
/// parts generate the same groups.
inline bool same_group(const TorusFrame& fr, const GeneratorSet& ours, const GeneratorSet& theirs, const MatQ& p) {
  const EtaleAlgebra& e = *fr.algebra;
  const MatQ pi = inverse(p);
  auto back = [&](const MatQ& x) { return pi * x * p; };
  if (theirs.n != ours.n || theirs.n != e.degree()) return false;
  // torus
  std::vector<AlgebraElement> their_units;
  for (const auto* part : {&theirs.torus, &theirs.torsion})
    for (const auto& g : *part) {
      auto a = e.from_regular_rep(back(g.matrix));
      if (!a || e.norm(*a) != 1) return false;
      their_units.push_back(*a);
    }
  if (!generates(e, fr.norm_one, their_units)) return false;
  // normalizer: same induced automorphisms, and each of theirs is ours up to the torus
  std::vector<MatQ> their_norm, our_norm;
  for (const auto& g : theirs.normalizer) their_norm.push_back(back(g.matrix));
  for (const auto& g : ours.normalizer) our_norm.push_back(g.matrix);
  auto theirs_aut = induced_automorphisms(fr, their_norm);
  auto ours_aut = induced_automorphisms(fr, our_norm);
  if (!theirs_aut || !ours_aut || theirs_aut->size() != ours_aut->size()) return false;
  for (const auto& [k, m] : *theirs_aut) {
    auto it = ours_aut->find(k);
    if (it == ours_aut->end()) return false;
    auto t = e.from_regular_rep(inverse(it->second) * m);
    if (!t || !unit_membership(e, fr.norm_one, *t)) return false;
  }
  // unipotent radical: equal lattices of u - I
  auto lattice = [&](const std::vector<Generator>& us, bool conj) -> std::optional<MatZ> {
    if (us.empty()) return MatZ(0, 0);
    const std::size_t n = ours.n;
    MatQ rows(us.size(), n * n);
    for (std::size_t k = 0; k < us.size(); ++k) {
      const MatQ d = (conj ? back(us[k].matrix) : us[k].matrix) - MatQ::identity(n);
      for (std::size_t i = 0; i < n * n; ++i) rows(k, i) = d.data()[i];
    }
    if (!is_integral(rows)) return std::nullopt;
    MatZ z(us.size(), n * n);
    for (std::size_t k = 0; k < us.size(); ++k)
      for (std::size_t i = 0; i < n * n; ++i) z(k, i) = rows(k, i).get_num();
    return hermite_normal_form(z);
  };
  if (theirs.unipotent.size() != 0 || ours.unipotent.size() != 0) {
    auto a = lattice(theirs.unipotent, true), b = lattice(ours.unipotent, false);
    if (!a || !b || !(*a == *b)) return false;
  }
  return true;
}

}  // namespace detail

/// Search P = pi(u) A_sigma with |entries| <= box, u a unit of O with
/// coordinates in [-unit_box, unit_box]; the identity is tried first.
inline ConjugatorResult find_conjugator(const TorusFrame& fr, const GeneratorSet& ours, const GeneratorSet& theirs,
                                        long box = 20, long unit_box = 1) {
  const EtaleAlgebra& e = *fr.algebra;
  ConjugatorResult out;
  std::vector<MatQ> cands{MatQ::identity(e.degree())};
  std::vector<MatQ> auts;
  for (const auto& s : fr.automorphisms) auts.push_back(automorphism_matrix(e, s));
  for (std::size_t i = 1; i < auts.size(); ++i) cands.push_back(auts[i]);
  for (const auto& u : search_units(e, unit_box, std::vector<std::uint64_t>{})) {
    if (u == e.one()) continue;
    for (const auto& a : auts) cands.push_back(e.regular_rep(u) * a);
  }
  auto in_box = [&](const MatQ& m) {
    for (const auto& v : m.data())
      if (abs(v) > box) return false;
    return true;
  };
  for (const auto& p : cands) {
    if (!in_box(p)) continue;
    ++out.candidates_tried;
    if (detail::same_group(fr, ours, theirs, p)) {
      out.found = true;
      out.conjugator = p;
      return out;
    }
  }
  out.caveats.push_back("no conjugator of the form pi(u) A_sigma within box " + std::to_string(box) +
                        "; other conjugators are not searched");
  return out;
}

}  // namespace cma
