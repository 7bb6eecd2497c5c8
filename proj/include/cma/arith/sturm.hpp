#pragma once

#include <cstddef>
#include <vector>

#include "cma/arith/poly.hpp"

namespace cma {

/// Sturm sequence f, f', -rem(...), ... of a squarefree polynomial.
inline std::vector<PolyQ> sturm_sequence(const PolyQ& f) {
  std::vector<PolyQ> seq{f, f.derivative()};
  while (!seq.back().is_zero()) {
    PolyQ r = rem(seq[seq.size() - 2], seq.back());
    seq.push_back(-r);
  }
  seq.pop_back();
  return seq;
}

namespace detail {

inline int sign_of(const BigRat& v) { return sgn(v); }

inline std::size_t count_changes(const std::vector<int>& signs) {
  std::size_t changes = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

inline std::size_t changes_at(const std::vector<PolyQ>& seq, const BigRat& x) {
  std::vector<int> s;
  for (const auto& p : seq) s.push_back(sign_of(p.eval(x)));
  return count_changes(s);
}

inline std::size_t changes_at_infinity(const std::vector<PolyQ>& seq, bool positive) {
  std::vector<int> s;
  for (const auto& p : seq) {
    int sg = sign_of(p.leading());
    if (!positive && p.degree() % 2 == 1) sg = -sg;
    s.push_back(sg);
  }
  return count_changes(s);
}

inline PolyQ checked_squarefree(const PolyQ& f) {
  if (f.is_zero()) throw InvalidArgument("exact_arith", "Sturm count of the zero polynomial");
  return squarefree_part(f);
}

}  // namespace detail

/// Number of distinct real roots.
inline std::size_t sturm_count_real_roots(const PolyQ& f) {
  PolyQ g = detail::checked_squarefree(f);
  if (g.degree() == 0) return 0;
  auto seq = sturm_sequence(g);
  return detail::changes_at_infinity(seq, false) - detail::changes_at_infinity(seq, true);
}

inline std::size_t sturm_count_real_roots(const PolyZ& f) {
  return sturm_count_real_roots(to_rational(f));
}

/// Number of distinct real roots in the half-open interval (a, b].
inline std::size_t sturm_count_in(const PolyQ& f, const BigRat& a, const BigRat& b) {
  if (!(a < b)) throw InvalidArgument("exact_arith", "empty interval");
  PolyQ g = detail::checked_squarefree(f);
  if (g.degree() == 0) return 0;
  auto seq = sturm_sequence(g);
  return detail::changes_at(seq, a) - detail::changes_at(seq, b);
}

}  // namespace cma
