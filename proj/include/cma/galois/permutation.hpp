#pragma once

// Permutations of {0, ..., n-1} and the finite groups they generate.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "cma/error.hpp"

namespace cma {

class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images) : p_(std::move(images)) {
    std::vector<int> seen(p_.size(), 0);
    for (int v : p_) {
      if (v < 0 || static_cast<std::size_t>(v) >= p_.size() || seen[v]++)
        throw InvalidArgument("galois_places", "not a permutation");
    }
  }
  static Permutation identity(std::size_t n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return Permutation(std::move(p));
  }
  /// Build from disjoint cycles, e.g. {{0,1},{2,3}}.
  static Permutation from_cycles(std::size_t n, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (const auto& c : cycles)
      for (std::size_t i = 0; i < c.size(); ++i) p.at(c[i]) = c[(i + 1) % c.size()];
    return Permutation(std::move(p));
  }

  std::size_t size() const { return p_.size(); }
  int operator()(int i) const { return p_.at(i); }
  const std::vector<int>& images() const { return p_; }
  bool is_identity() const {
    for (std::size_t i = 0; i < p_.size(); ++i)
      if (p_[i] != static_cast<int>(i)) return false;
    return true;
  }

  /// (a * b)(i) = a(b(i)).
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    std::vector<int> r(a.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.p_[b.p_[i]];
    return Permutation(std::move(r));
  }
  Permutation inverse() const {
    std::vector<int> r(p_.size());
    for (std::size_t i = 0; i < p_.size(); ++i) r[p_[i]] = static_cast<int>(i);
    return Permutation(std::move(r));
  }
  friend bool operator==(const Permutation& a, const Permutation& b) { return a.p_ == b.p_; }
  friend bool operator<(const Permutation& a, const Permutation& b) { return a.p_ < b.p_; }

  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> done(p_.size(), false);
    for (std::size_t i = 0; i < p_.size(); ++i) {
      if (done[i]) continue;
      std::vector<int> c;
      for (int j = static_cast<int>(i); !done[j]; j = p_[j]) {
        done[j] = true;
        c.push_back(j);
      }
      out.push_back(std::move(c));
    }
    return out;
  }
  /// Cycle lengths in decreasing order.
  std::vector<int> cycle_type() const {
    std::vector<int> t;
    for (const auto& c : cycles()) t.push_back(static_cast<int>(c.size()));
    std::sort(t.rbegin(), t.rend());
    return t;
  }
  std::size_t order() const {
    std::size_t o = 1;
    for (int l : cycle_type()) o = std::lcm(o, static_cast<std::size_t>(l));
    return o;
  }
  std::string str() const {
    std::string s;
    for (const auto& c : cycles()) {
      if (c.size() < 2) continue;
      s += "(";
      for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i]);
      s += ")";
    }
    return s.empty() ? "()" : s;
  }

 private:
  std::vector<int> p_;
};

/// All elements of the group generated by `gens` on n points, sorted.
inline std::vector<Permutation> generate_group(std::size_t n, const std::vector<Permutation>& gens) {
  std::set<Permutation> seen{Permutation::identity(n)};
  std::vector<Permutation> frontier{Permutation::identity(n)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& g : frontier)
      for (const auto& s : gens) {
        auto h = s * g;
        if (seen.insert(h).second) next.push_back(h);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

/// Orbits of the group generated by `gens`, each sorted, ordered by least
/// element.
inline std::vector<std::vector<int>> orbits(std::size_t n, const std::vector<Permutation>& gens) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
  for (const auto& g : gens)
    for (std::size_t i = 0; i < n; ++i) parent[find(static_cast<int>(i))] = find(g(static_cast<int>(i)));
  std::vector<std::vector<int>> out;
  std::vector<int> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    int r = find(static_cast<int>(i));
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(static_cast<int>(i));
  }
  return out;
}

inline bool is_transitive(std::size_t n, const std::vector<Permutation>& gens) {
  return orbits(n, gens).size() <= 1;
}

}  // namespace cma
