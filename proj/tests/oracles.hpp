#pragma once

// Brute-force reference implementations. Each one avoids the data structures
// and shortcuts of the library routine it checks: plain loops over all 2^n
// masks, explicit vectors of vertex labels, recursion instead of Edmonds.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <gmpxx.h>

#include "anticonc/hypergraph.hpp"

namespace oracle {

using anticonc::Hypergraph;
using anticonc::Mask;

inline int pc(std::uint64_t x) { return __builtin_popcountll(x); }

/// Edge list as sorted label vectors.
inline std::vector<std::vector<int>> edge_lists(const Hypergraph& g) {
  std::vector<std::vector<int>> out;
  for (Mask e : g.edges()) {
    std::vector<int> v;
    for (int i = 0; i < g.order(); ++i)
      if ((e >> i) & 1) v.push_back(i);
    out.push_back(v);
  }
  return out;
}

/// counts[ℓ] over all k-subsets, by scanning every mask of n bits (n <= 24).
inline std::map<long, std::uint64_t> distribution(const Hypergraph& g, int k) {
  const int n = g.order();
  const auto edges = edge_lists(g);
  std::map<long, std::uint64_t> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    if (pc(s) != k) continue;
    long e = 0;
    for (const auto& edge : edges) {
      bool inside = true;
      for (int v : edge) inside = inside && ((s >> v) & 1);
      e += inside;
    }
    ++out[e];
  }
  return out;
}

inline bool has_edge(const Hypergraph& g, std::vector<int> vs) {
  std::sort(vs.begin(), vs.end());
  for (const auto& e : edge_lists(g))
    if (e == vs) return true;
  return false;
}

/// Adjacency lookup table for a 3-graph, filled from the edge list.
struct Triples {
  int n;
  std::vector<char> a;
  explicit Triples(const Hypergraph& g) : n(g.order()), a(static_cast<std::size_t>(n * n * n), 0) {
    for (const auto& e : edge_lists(g)) {
      const std::array<int, 3> t{e[0], e[1], e[2]};
      std::array<int, 3> p = t;
      std::sort(p.begin(), p.end());
      do a[static_cast<std::size_t>((p[0] * n + p[1]) * n + p[2])] = 1;
      while (std::next_permutation(p.begin(), p.end()));
    }
  }
  int operator()(int x, int y, int z) const { return a[static_cast<std::size_t>((x * n + y) * n + z)]; }
};

/// Signed sum of the 6-tuple straight from its eight terms.
inline int signed_sum(const Triples& a, int x, int xp, int y, int yp, int z, int zp) {
  return a(x, y, z) - a(x, y, zp) - a(x, yp, z) - a(xp, y, z) + a(x, yp, zp) + a(xp, y, zp) + a(xp, yp, z) -
         a(xp, yp, zp);
}

/// All ordered 6-tuples of distinct vertices with a nonzero signed sum.
inline std::uint64_t good_tuples(const Hypergraph& g) {
  const Triples a(g);
  const int n = g.order();
  std::uint64_t count = 0;
  int t[6];
  auto rec = [&](auto&& self, int depth, std::uint64_t used) -> void {
    if (depth == 6) {
      count += signed_sum(a, t[0], t[1], t[2], t[3], t[4], t[5]) != 0;
      return;
    }
    for (int v = 0; v < n; ++v) {
      if ((used >> v) & 1) continue;
      t[depth] = v;
      self(self, depth + 1, used | (std::uint64_t{1} << v));
    }
  };
  rec(rec, 0, 0);
  return count;
}

/// Maximum matching size of a family of sets, by include/exclude recursion.
inline std::size_t max_matching(const std::vector<Mask>& sets) {
  std::size_t best = 0;
  auto rec = [&](auto&& self, std::size_t i, Mask used, std::size_t size) -> void {
    if (size + (sets.size() - i) <= best) return;
    if (i == sets.size()) {
      best = std::max(best, size);
      return;
    }
    if ((sets[i] & used) == 0) self(self, i + 1, used | sets[i], size + 1);
    self(self, i + 1, used, size);
  };
  rec(rec, 0, 0, 0);
  return best;
}

/// X_{G,n/2} at the slice point built from σ and γ: vertex σ(i) is chosen when
/// γ_i = +1, vertex σ(i + n/2) when γ_i = −1. Counts edges by label lists.
inline long coupled_value(const Hypergraph& g, const std::vector<int>& sigma, const std::vector<int>& gamma) {
  const int h = static_cast<int>(gamma.size());
  std::set<int> chosen;
  for (int i = 0; i < h; ++i) chosen.insert(gamma[static_cast<std::size_t>(i)] == 1 ? sigma[static_cast<std::size_t>(i)]
                                                                                    : sigma[static_cast<std::size_t>(i + h)]);
  long e = 0;
  for (const auto& edge : edge_lists(g)) {
    bool inside = true;
    for (int v : edge) inside = inside && chosen.count(v);
    e += inside;
  }
  return e;
}

/// Fourier coefficients over {±1}^m by direct summation (no fast transform):
/// f̂(S) = 2^{−m} Σ_γ f(γ) Π_{i∈S} γ_i. Keys are index masks.
template <class F>
std::map<std::uint64_t, mpq_class> fourier(int m, F&& f) {
  std::vector<long> values(std::size_t{1} << m);
  for (std::uint64_t neg = 0; neg < values.size(); ++neg) {
    std::vector<int> gamma(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) gamma[static_cast<std::size_t>(i)] = ((neg >> i) & 1) ? -1 : 1;
    values[neg] = f(gamma);
  }
  std::map<std::uint64_t, mpq_class> out;
  for (std::uint64_t s = 0; s < values.size(); ++s) {
    mpz_class sum = 0;
    for (std::uint64_t neg = 0; neg < values.size(); ++neg) {
      const int sign = pc(s & neg) % 2 == 0 ? 1 : -1;
      sum += sign * values[neg];
    }
    if (sum != 0) {
      mpq_class c(sum, mpz_class(1) << m);
      c.canonicalize();
      out[s] = c;
    }
  }
  return out;
}

}  // namespace oracle
