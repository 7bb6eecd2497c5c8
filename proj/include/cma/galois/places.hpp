#pragma once

// Signatures, places over a prime, Galois groups of small degree and
// decomposition groups as permutation groups on the embeddings.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cma/arith/fp_poly.hpp"
#include "cma/arith/poly.hpp"
#include "cma/arith/sturm.hpp"
#include "cma/galois/permutation.hpp"

namespace cma {

struct Signature {
  int r1 = 0;
  int r2 = 0;
  friend bool operator==(const Signature& a, const Signature& b) {
    return a.r1 == b.r1 && a.r2 == b.r2;
  }
};

inline Signature signature(const PolyZ& f) {
  const int n = f.degree();
  if (n < 1) throw InvalidArgument("galois_places", "signature of a constant");
  const int r1 = static_cast<int>(sturm_count_real_roots(f));
  if ((n - r1) % 2 != 0) throw InvalidArgument("galois_places", "deg - r1 is odd");
  return {r1, (n - r1) / 2};
}

/// A place of Q: the real place or a prime.
class Place {
 public:
  static Place infinity() { return Place(0); }
  static Place prime(std::uint64_t p) {
    if (!is_prime(BigInt(static_cast<unsigned long>(p))))
      throw InvalidArgument("galois_places", std::to_string(p) + " is not prime");
    return Place(p);
  }
  /// "inf" or a decimal prime.
  static Place parse(const std::string& s) {
    if (s == "inf" || s == "infty" || s == "oo") return infinity();
    BigInt v = parse_integer(s);
    if (v < 2 || !v.fits_ulong_p()) throw InvalidArgument("galois_places", "bad place '" + s + "'");
    return prime(v.get_ui());
  }

  bool is_infinite() const { return p_ == 0; }
  std::uint64_t p() const { return p_; }
  /// "inf" or "p:<n>", the serialized form.
  std::string str() const { return is_infinite() ? "inf" : "p:" + std::to_string(p_); }
  std::string short_str() const { return is_infinite() ? "inf" : std::to_string(p_); }

  friend bool operator==(const Place& a, const Place& b) { return a.p_ == b.p_; }
  friend bool operator<(const Place& a, const Place& b) { return a.p_ < b.p_; }

 private:
  explicit Place(std::uint64_t p) : p_(p) {}
  std::uint64_t p_;
};

inline void require_unramified(const PolyZ& f, std::uint64_t p) {
  const BigInt disc = discriminant(f);
  if (mpz_divisible_ui_p(disc.get_mpz_t(), p))
    throw RamifiedPlace("galois_places", BigInt(static_cast<unsigned long>(p)), disc);
}

/// Degrees of the irreducible factors of f mod p, decreasing. Requires p
/// unramified.
inline std::vector<int> frobenius_cycle_type(const PolyZ& f, std::uint64_t p) {
  require_unramified(f, p);
  std::vector<int> t;
  for (const auto& fm : factor_mod_p(f, p)) t.push_back(fm.factor.degree());
  std::sort(t.rbegin(), t.rend());
  return t;
}

inline std::size_t places_over_p(const PolyZ& f, std::uint64_t p) {
  if (!is_prime(BigInt(static_cast<unsigned long>(p))))
    throw InvalidArgument("galois_places", std::to_string(p) + " is not prime");
  return frobenius_cycle_type(f, p).size();
}

/// Galois group of the splitting field as a transitive permutation group
/// on the roots, given by standard generators.
struct GaloisTag {
  std::string group;  // C1 C2 C3 S3 C4 V4 D4 A4 S4
  std::size_t degree = 1;
  std::vector<Permutation> generators;
  /// Quartics: rational roots of the resolvent cubic, increasing.
  std::vector<BigInt> resolvent_roots;

  std::vector<Permutation> elements() const { return generate_group(degree, generators); }
  std::size_t order() const { return elements().size(); }
};

namespace detail {

inline Permutation cyc(std::size_t n, std::vector<std::vector<int>> c) {
  return Permutation::from_cycles(n, c);
}

/// Standard generators of each supported tag.
inline GaloisTag standard_tag(const std::string& name) {
  GaloisTag t;
  t.group = name;
  if (name == "C1") {
    t.degree = 1;
  } else if (name == "C2") {
    t.degree = 2;
    t.generators = {cyc(2, {{0, 1}})};
  } else if (name == "C3") {
    t.degree = 3;
    t.generators = {cyc(3, {{0, 1, 2}})};
  } else if (name == "S3") {
    t.degree = 3;
    t.generators = {cyc(3, {{0, 1, 2}}), cyc(3, {{0, 1}})};
  } else if (name == "C4") {
    t.degree = 4;
    t.generators = {cyc(4, {{0, 1, 2, 3}})};
  } else if (name == "V4") {
    t.degree = 4;
    t.generators = {cyc(4, {{0, 1}, {2, 3}}), cyc(4, {{0, 2}, {1, 3}})};
  } else if (name == "D4") {
    t.degree = 4;
    t.generators = {cyc(4, {{0, 1, 2, 3}}), cyc(4, {{0, 2}})};
  } else if (name == "A4") {
    t.degree = 4;
    t.generators = {cyc(4, {{0, 1, 2}}), cyc(4, {{0, 1}, {2, 3}})};
  } else if (name == "S4") {
    t.degree = 4;
    t.generators = {cyc(4, {{0, 1, 2, 3}}), cyc(4, {{0, 1}})};
  } else {
    throw Unsupported("galois_places", "unknown group tag " + name);
  }
  return t;
}

/// Resolvent cubic of x^4 + b x^3 + c x^2 + d x + e, whose roots are
/// a0 a1 + a2 a3, a0 a2 + a1 a3, a0 a3 + a1 a2.
inline PolyZ quartic_resolvent(const PolyZ& f) {
  const BigInt b = f.coeff(3), c = f.coeff(2), d = f.coeff(1), e = f.coeff(0);
  return PolyZ(std::vector<BigInt>{-(b * b * e - 4 * c * e + d * d), b * d - 4 * e, -c, 1});
}

/// Does a quadratic with discriminant delta split over Q(sqrt(D))?
inline bool splits_over_quadratic(const BigInt& delta, const BigInt& disc) {
  return delta == 0 || is_square_integer(delta) || is_square_integer(delta * disc);
}

/// Quadratics whose roots are the pair products (first) and pair sums
/// (second) for the pairing attached to the resolvent root theta.
inline std::pair<PolyZ, PolyZ> pairing_quadratics(const PolyZ& f, const BigInt& theta) {
  const BigInt b = f.coeff(3), c = f.coeff(2), e = f.coeff(0);
  return {PolyZ(std::vector<BigInt>{e, -theta, 1}), PolyZ(std::vector<BigInt>{c - theta, b, 1})};
}

}  // namespace detail

inline GaloisTag galois_group_small(const PolyZ& f) {
  if (!f.is_monic()) throw InvalidArgument("galois_places", "polynomial must be monic");
  const int n = f.degree();
  if (n < 1) throw InvalidArgument("galois_places", "constant polynomial");
  if (n > 4) throw Unsupported("galois_places", "Galois groups are supported up to degree 4");
  if (n == 1) return detail::standard_tag("C1");
  if (n == 2) return detail::standard_tag("C2");
  const BigInt disc = discriminant(f);
  if (disc == 0) throw InvalidArgument("galois_places", "polynomial is not squarefree");
  if (n == 3) return detail::standard_tag(is_square_integer(disc) ? "C3" : "S3");
  const PolyZ res = detail::quartic_resolvent(f);
  std::vector<BigInt> roots;
  for (const auto& r : rational_roots(res)) roots.push_back(r.get_num());
  std::sort(roots.begin(), roots.end());
  GaloisTag tag;
  if (roots.size() == 3) {
    tag = detail::standard_tag("V4");
  } else if (roots.empty()) {
    tag = detail::standard_tag(is_square_integer(disc) ? "A4" : "S4");
  } else if (roots.size() == 1) {
    auto [q1, q2] = detail::pairing_quadratics(f, roots[0]);
    const bool c4 = detail::splits_over_quadratic(discriminant(q1), disc) &&
                    detail::splits_over_quadratic(discriminant(q2), disc);
    tag = detail::standard_tag(c4 ? "C4" : "D4");
  } else {
    throw InvalidArgument("galois_places", "resolvent cubic has a repeated root");
  }
  tag.resolvent_roots = std::move(roots);
  return tag;
}

/// Decomposition group at a place, up to conjugacy.
struct PlaceProfile {
  Place place = Place::infinity();
  std::vector<Permutation> subgroup_generators;
  std::vector<std::vector<int>> orbits;
  std::size_t num_places_over = 0;
};

namespace detail {

/// Does the monic quadratic q have two distinct roots in Q_p (p = 0: in
/// R)? nullopt when its roots coincide there and the test says nothing.
inline std::optional<bool> split_at(const PolyZ& q, std::uint64_t p) {
  if (p == 0) {
    const BigInt d = discriminant(q);
    if (d == 0) return std::nullopt;
    return d > 0;
  }
  auto fac = factor_mod_p(q, p);
  for (const auto& fm : fac)
    if (fm.multiplicity > 1) return std::nullopt;
  return fac.size() == 2;
}

/// Frobenius (or complex conjugation) when its cycle type is [2,2] in
/// V4 or D4, where the cycle type alone does not fix the conjugacy class.
/// The involution fixing the pairing {01|23}, {02|13} or {03|12} is the
/// one whose pair-product quadratic splits at the place.
inline Permutation pairing_involution(const PolyZ& f, const GaloisTag& tag, std::uint64_t p) {
  static const std::vector<std::vector<std::vector<int>>> kPairings = {
      {{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
  auto fixes = [&](const BigInt& theta) {
    auto [q1, q2] = pairing_quadratics(f, theta);
    if (auto r = split_at(q1, p)) return *r;
    if (auto r = split_at(q2, p)) return *r;
    throw Unsupported("galois_places", "cannot separate the Frobenius class at " +
                                           (p == 0 ? std::string("inf") : std::to_string(p)));
  };
  if (tag.group == "D4") {
    // the rational resolvent root belongs to the stable pairing {02|13}
    return Permutation::from_cycles(4, fixes(tag.resolvent_roots.at(0)) ? kPairings[1] : kPairings[0]);
  }
  std::vector<std::size_t> fixed;
  for (std::size_t i = 0; i < 3; ++i)
    if (fixes(tag.resolvent_roots.at(i))) fixed.push_back(i);
  if (fixed.size() != 1)
    throw NoSuchElement("galois_places", "no unique involution matches the place");
  return Permutation::from_cycles(4, kPairings[fixed[0]]);
}

}  // namespace detail

inline PlaceProfile decomposition_profile(const PolyZ& f, const GaloisTag& tag, const Place& place) {
  const std::size_t n = static_cast<std::size_t>(f.degree());
  if (n != tag.degree) throw InvalidArgument("galois_places", "tag degree does not match f");
  std::vector<int> type;
  if (place.is_infinite()) {
    auto sig = signature(f);
    type.assign(sig.r2, 2);
    type.insert(type.end(), sig.r1, 1);
  } else {
    type = frobenius_cycle_type(f, place.p());
  }
  PlaceProfile prof;
  prof.place = place;
  if (std::any_of(type.begin(), type.end(), [](int t) { return t > 1; })) {
    std::optional<Permutation> gen;
    if ((tag.group == "V4" || tag.group == "D4") && type == std::vector<int>{2, 2}) {
      gen = detail::pairing_involution(f, tag, place.is_infinite() ? 0 : place.p());
    } else {
      for (const auto& g : tag.elements())
        if (g.cycle_type() == type) {
          gen = g;
          break;
        }
    }
    if (!gen)
      throw NoSuchElement("galois_places", "group " + tag.group + " has no element of the required cycle type");
    prof.subgroup_generators.push_back(*gen);
  }
  prof.orbits = orbits(n, prof.subgroup_generators);
  prof.num_places_over = prof.orbits.size();
  return prof;
}

}  // namespace cma
