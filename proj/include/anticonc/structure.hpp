#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "core/bits.hpp"
#include "core/budget.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/random.hpp"
#include "distribution.hpp"
#include "hypergraph.hpp"
#include "matching.hpp"
#include "slice_coupling.hpp"

namespace anticonc {

/// Labelled 6-tuple (x, x', y, y', z, z').
using SixTuple = std::array<int, 6>;

struct FMembership {
  int sum = 0;
  bool in_F = false;
};

/// The signed sum a_xyz − a_xyz' − a_xy'z − a_x'yz + a_xy'z' + a_x'yz' + a_x'y'z − a_x'y'z'.
inline FMembership f_membership(const Hypergraph& g, const SixTuple& t) {
  if (g.uniformity() != 3) throw PreconditionError("f_membership needs a 3-graph");
  Mask seen = 0;
  for (int v : t) {
    if (v < 0 || v >= g.order() || ((seen >> v) & 1)) throw PreconditionError("f_membership needs 6 distinct vertices");
    seen |= bit(v);
  }
  auto a = [&](int p, int q, int r) { return g.a(bit(p) | bit(q) | bit(r)); };
  const auto [x, xp, y, yp, z, zp] = t;
  int sum = a(x, y, z) - a(x, y, zp) - a(x, yp, z) - a(xp, y, z) + a(x, yp, zp) + a(xp, y, zp) + a(xp, yp, z) -
            a(xp, yp, zp);
  return {sum, sum != 0};
}

namespace detail {

/// For fixed (x, x', y, y') the signed sum equals w(z) − w(z') with
/// w(z) = [xyz] + [x'y'z] − [xy'z] − [x'yz]. classes[p][q] holds the free z with
/// p positive and q negative memberships, so w = p − q.
struct WClasses {
  std::array<std::array<Mask, 3>, 3> classes{};
};

inline WClasses w_classes(const Hypergraph& g, int x, int xp, int y, int yp, Mask avail) {
  const Mask p1 = g.pair_link(x, y) & avail, p2 = g.pair_link(xp, yp) & avail;
  const Mask n1 = g.pair_link(x, yp) & avail, n2 = g.pair_link(xp, y) & avail;
  const std::array<Mask, 3> pos{avail & ~p1 & ~p2, p1 ^ p2, p1 & p2};
  const std::array<Mask, 3> neg{avail & ~n1 & ~n2, n1 ^ n2, n1 & n2};
  WClasses w;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) w.classes[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = pos[static_cast<std::size_t>(p)] & neg[static_cast<std::size_t>(q)];
  return w;
}

template <class Visit>
void for_each_ordered_quadruple(int n, Visit&& visit) {
  for (int x = 0; x < n; ++x)
    for (int xp = 0; xp < n; ++xp) {
      if (xp == x) continue;
      for (int y = 0; y < n; ++y) {
        if (y == x || y == xp) continue;
        for (int yp = 0; yp < n; ++yp) {
          if (yp == x || yp == xp || yp == y) continue;
          if (!visit(x, xp, y, yp)) return;
        }
      }
    }
}

}  // namespace detail

/// Number of ordered 6-tuples of distinct vertices with a nonzero signed sum.
inline std::uint64_t count_good_tuples(const Hypergraph& g, std::uint64_t budget = enumeration_budget()) {
  if (g.uniformity() != 3) throw PreconditionError("count_good_tuples needs a 3-graph");
  const int n = g.order();
  if (n < 6) return 0;
  require_budget(mpz_class(n) * n * n * n, budget, "count_good_tuples");
  const Mask all = low_mask(n);
  std::uint64_t total = 0;
  detail::for_each_ordered_quadruple(n, [&](int x, int xp, int y, int yp) {
    const Mask avail = all & ~(bit(x) | bit(xp) | bit(y) | bit(yp));
    const auto w = detail::w_classes(g, x, xp, y, yp, avail);
    std::array<std::uint64_t, 5> hist{};  // w + 2
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) hist[static_cast<std::size_t>(p - q + 2)] += static_cast<std::uint64_t>(popcount(w.classes[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]));
    std::uint64_t m = static_cast<std::uint64_t>(n - 4), same = 0;
    for (auto h : hist) same += h * h;
    total += m * m - same;  // ordered (z, z') with w(z) != w(z'); such z != z'
    return true;
  });
  return total;
}

/// Some 6-tuple with a nonzero signed sum, if one exists.
inline std::optional<SixTuple> find_good_tuple(const Hypergraph& g) {
  if (g.uniformity() != 3) throw PreconditionError("find_good_tuple needs a 3-graph");
  const int n = g.order();
  std::optional<SixTuple> out;
  if (n < 6) return out;
  const Mask all = low_mask(n);
  detail::for_each_ordered_quadruple(n, [&](int x, int xp, int y, int yp) {
    const Mask avail = all & ~(bit(x) | bit(xp) | bit(y) | bit(yp));
    const auto w = detail::w_classes(g, x, xp, y, yp, avail);
    std::array<Mask, 5> by_value{};
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) by_value[static_cast<std::size_t>(p - q + 2)] |= w.classes[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
    int first = -1;
    for (int v = 0; v < 5; ++v) {
      if (by_value[static_cast<std::size_t>(v)] == 0) continue;
      if (first < 0) {
        first = v;
        continue;
      }
      out = SixTuple{x, xp, y, yp, lowest_bit(by_value[static_cast<std::size_t>(v)]), lowest_bit(by_value[static_cast<std::size_t>(first)])};
      return false;
    }
    return true;
  });
  return out;
}

/// Ordered 4-tuples (v, w, v', w') of distinct vertices with a_vw = a_v'w' != a_v'w.
inline std::uint64_t alternating_3path_count(const Hypergraph& g) {
  if (g.uniformity() != 2) throw PreconditionError("alternating_3path_count needs a graph");
  const int n = g.order();
  const Mask all = low_mask(n);
  std::uint64_t total = 0;
  for (int w = 0; w < n; ++w)
    for (int vp = 0; vp < n; ++vp) {
      if (vp == w) continue;
      const bool middle = (g.neighbours(vp) >> w) & 1;
      // v pairs with w and w' pairs with v' in the opposite state to (v', w).
      Mask xs = middle ? all & ~g.neighbours(w) : g.neighbours(w);
      Mask ys = middle ? all & ~g.neighbours(vp) : g.neighbours(vp);
      xs &= ~(bit(w) | bit(vp));
      ys &= ~(bit(w) | bit(vp));
      total += static_cast<std::uint64_t>(popcount(xs)) * static_cast<std::uint64_t>(popcount(ys)) -
               static_cast<std::uint64_t>(popcount(xs & ys));
    }
  return total;
}

// ---------------------------------------------------------------------------
// Auxiliary graphs
// ---------------------------------------------------------------------------

/// H on positions [n/2] for a fixed σ. r = 2: {i, j} with a nonzero 4-term sum.
/// r = 3: {i, j, q} with g_ijq != 0, plus H' = {i, j} with 2^3·g_ij >= n/2.
struct AuxiliaryGraph {
  int n = 0;
  int k = 0;
  int r = 2;
  std::vector<int> sigma;
  std::vector<Mask> edges;
  std::vector<Mask> h_prime;
};

inline AuxiliaryGraph build_auxiliary_H(const Hypergraph& g, std::span<const int> sigma) {
  if (g.order() % 2 != 0) throw PreconditionError("auxiliary graph needs even n");
  if (g.uniformity() != 2 && g.uniformity() != 3) throw PreconditionError("auxiliary graph needs r = 2 or r = 3");
  if (static_cast<int>(sigma.size()) != g.order()) throw PreconditionError("sigma must permute the vertices of G");
  detail::check_permutation(sigma);
  AuxiliaryGraph h{g.order(), g.order() / 2, g.uniformity(), {sigma.begin(), sigma.end()}, {}, {}};
  for_each_k_subset(h.k, h.r, [&](Mask pos) {
    if (coefficient_sum(g, sigma, pos) != 0) h.edges.push_back(pos);
  });
  if (h.r == 3) {
    for_each_k_subset(h.k, 2, [&](Mask pos) {
      if (2 * coefficient_sum(g, sigma, pos) >= h.n) h.h_prime.push_back(pos);
    });
  }
  return h;
}

struct MatchingExperiment {
  std::vector<std::size_t> sizes;  // maximum matching of H per sample
  double threshold = 0.0;
  double fraction_below = 0.0;
  double mean = 0.0;
};

/// Maximum matching size of H(G, σ) over `samples` uniform σ; σ for sample s
/// is drawn from stream s of `seed`.
inline MatchingExperiment matching_probability_experiment(const Hypergraph& g, std::uint64_t samples,
                                                          std::uint64_t seed, double threshold,
                                                          unsigned threads = 0) {
  if (g.uniformity() != 2) throw PreconditionError("matching experiment needs a graph");
  MatchingExperiment out;
  out.threshold = threshold;
  out.sizes.assign(samples, 0);
  parallel_blocks(samples, threads, [&](std::size_t s) {
    Rng rng(seed, s);
    std::vector<int> sigma = rng.permutation(g.order());
    AuxiliaryGraph h = build_auxiliary_H(g, sigma);
    out.sizes[s] = maximum_matching(h.k, h.edges).size();
  });
  std::uint64_t below = 0, sum = 0;
  for (auto s : out.sizes) {
    below += static_cast<double>(s) < threshold;
    sum += s;
  }
  if (samples > 0) {
    out.fraction_below = static_cast<double>(below) / static_cast<double>(samples);
    out.mean = static_cast<double>(sum) / static_cast<double>(samples);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Induced variability and degree-2 thresholds
// ---------------------------------------------------------------------------

struct VariabilityWitness {
  enum class Kind { clique, independent_set, distinct_counts, none };
  Kind kind = Kind::none;
  Mask first = 0;  // the clique / independent set, or the first of the pair
  Mask second = 0;
  std::size_t first_count = 0;
  std::size_t second_count = 0;
};

/// For G on 2k vertices: two k-sets inducing different edge counts, or else a
/// k-clique or k-independent set (all k-sets then induce the same count).
inline VariabilityWitness check_induced_variability(const Hypergraph& g, int k,
                                                    std::uint64_t budget = enumeration_budget()) {
  if (g.order() != 2 * k) throw PreconditionError("check_induced_variability needs n = 2k");
  require_budget(binomial(g.order(), k), budget, "check_induced_variability");
  VariabilityWitness w;
  const BinomialTable C(g.order());
  const std::uint64_t total = C(g.order(), k);
  bool have = false, split = false;
  // Ranges are visited in chunks so a difference ends the scan early.
  constexpr std::uint64_t kChunk = 64;
  for (std::uint64_t lo = 0; lo < total && !split; lo += kChunk) {
    detail::for_each_induced_count(g, k, lo, std::min(total, lo + kChunk), C, [&](Mask s, std::size_t e) {
      if (split) return;
      if (!have) {
        w.first = s;
        w.first_count = e;
        have = true;
      } else if (e != w.first_count) {
        w.second = s;
        w.second_count = e;
        split = true;
      }
    });
  }
  if (split) {
    w.kind = VariabilityWitness::Kind::distinct_counts;
  } else if (have && w.first_count == binomial_u64(k, g.uniformity())) {
    w.kind = VariabilityWitness::Kind::clique;
  } else if (have && w.first_count == 0) {
    w.kind = VariabilityWitness::Kind::independent_set;
  }
  return w;
}

/// Ordered (x, x', y, y') of distinct vertices with
/// deg(x,y) − deg(x',y) − deg(x,y') + deg(x',y') >= n/2.
inline std::uint64_t degree2_threshold_tuples(const Hypergraph& g) {
  if (g.uniformity() != 3) throw PreconditionError("degree2_threshold_tuples needs a 3-graph");
  const int n = g.order();
  std::vector<int> deg(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y) deg[static_cast<std::size_t>(x * n + y)] = popcount(g.pair_link(x, y));
  auto d = [&](int x, int y) { return deg[static_cast<std::size_t>(x * n + y)]; };
  std::uint64_t count = 0;
  detail::for_each_ordered_quadruple(n, [&](int x, int xp, int y, int yp) {
    count += 2 * (d(x, y) - d(xp, y) - d(x, yp) + d(xp, yp)) >= n;
    return true;
  });
  return count;
}

}  // namespace anticonc
