#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/bits.hpp"
#include "core/budget.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/random.hpp"
#include "hypergraph.hpp"

namespace anticonc {

/// Distribution of X_{G,k}: counts[ℓ] = number of k-sets inducing ℓ edges.
struct DistributionTable {
  int n = 0;
  int k = 0;
  int r = 2;
  std::vector<mpz_class> counts;  // indices beyond the vector are zero
  mpz_class total;

  mpz_class count(long ell) const {
    if (ell < 0 || ell >= static_cast<long>(counts.size())) return 0;
    return counts[static_cast<std::size_t>(ell)];
  }

  mpq_class probability(long ell) const {
    mpq_class p(count(ell), total);
    p.canonicalize();
    return p;
  }

  /// max_ℓ Pr(X = ℓ).
  mpq_class max_probability() const {
    mpz_class best = 0;
    for (const auto& c : counts)
      if (c > best) best = c;
    mpq_class p(best, total);
    p.canonicalize();
    return p;
  }

  /// Number of ℓ with a nonzero count.
  std::size_t support_size() const {
    std::size_t s = 0;
    for (const auto& c : counts) s += c != 0;
    return s;
  }

  friend bool operator==(const DistributionTable& a, const DistributionTable& b) {
    if (a.n != b.n || a.k != b.k || a.r != b.r || a.total != b.total) return false;
    std::size_t len = std::max(a.counts.size(), b.counts.size());
    for (std::size_t i = 0; i < len; ++i)
      if (a.count(static_cast<long>(i)) != b.count(static_cast<long>(i))) return false;
    return true;
  }
};

/// ℓ* = min{ℓ, C(k,r) − ℓ}.
inline mpz_class ell_star(const mpz_class& ell, int k, int r) {
  mpz_class other = binomial(k, r) - ell;
  return ell < other ? ell : other;
}

namespace detail {

/// Visits every k-subset with colex rank in [begin, end) together with its
/// induced edge count. Consecutive subsets differ in few vertices, so the count
/// is updated from the symmetric difference instead of recomputed.
template <class Visit>
void for_each_induced_count(const Hypergraph& g, int k, std::uint64_t begin, std::uint64_t end,
                            const BinomialTable& C, Visit&& visit) {
  if (begin >= end) return;
  if (k == 0) {
    visit(Mask{0}, std::size_t{0});
    return;
  }
  Mask cur = colex_unrank(begin, k, C);
  std::size_t e = g.edges_within(cur);
  visit(cur, e);
  for (std::uint64_t i = begin + 1; i < end; ++i) {
    Mask next = next_colex(cur);
    Mask removed = cur & ~next;
    Mask added = next & ~cur;
    for_each_bit(removed, [&](int v) {
      e -= g.edges_at_within(v, cur);
      cur &= ~bit(v);
    });
    for_each_bit(added, [&](int v) {
      cur |= bit(v);
      e += g.edges_at_within(v, cur);
    });
    visit(cur, e);
  }
}

inline std::size_t max_induced_edges(const Hypergraph& g, int k) {
  std::uint64_t cap = binomial_u64(k, g.uniformity());
  return static_cast<std::size_t>(std::min<std::uint64_t>(cap, g.edge_count()));
}

inline constexpr std::uint64_t kBlockCount = 256;

}  // namespace detail

/// Exact X_{G,k} distribution over all C(n,k) subsets, block-parallel over
/// colex rank ranges. Throws BudgetExceeded when C(n,k) exceeds `budget`.
inline DistributionTable exact_distribution(const Hypergraph& g, int k, unsigned threads = 0,
                                            std::uint64_t budget = enumeration_budget()) {
  const int n = g.order();
  if (k < 0 || k > n) throw PreconditionError("k must lie in [0, n]");
  DistributionTable table{n, k, g.uniformity(), {}, binomial(n, k)};
  require_budget(table.total, budget, "exact_distribution");
  const std::uint64_t total = table.total.get_ui();
  const std::size_t width = detail::max_induced_edges(g, k) + 1;
  const BinomialTable C(n);
  const std::uint64_t blocks = std::min<std::uint64_t>(detail::kBlockCount, total);
  std::vector<std::vector<std::uint64_t>> partial(blocks, std::vector<std::uint64_t>(width, 0));
  parallel_blocks(blocks, threads, [&](std::size_t b) {
    std::uint64_t lo = total * b / blocks, hi = total * (b + 1) / blocks;
    auto& local = partial[b];
    detail::for_each_induced_count(g, k, lo, hi, C, [&](Mask, std::size_t e) { ++local[e]; });
  });
  table.counts.assign(width, 0);
  for (const auto& local : partial)
    for (std::size_t ell = 0; ell < width; ++ell) table.counts[ell] += mpz_class(std::to_string(local[ell]));
  while (table.counts.size() > 1 && table.counts.back() == 0) table.counts.pop_back();
  return table;
}

/// Pr(X_{G,k} = ℓ) as an exact rational; only ℓ is counted.
inline mpq_class point_probability(const Hypergraph& g, int k, long ell, unsigned threads = 0,
                                   std::uint64_t budget = enumeration_budget()) {
  const int n = g.order();
  if (k < 0 || k > n) throw PreconditionError("k must lie in [0, n]");
  if (ell < 0 || static_cast<std::size_t>(ell) > detail::max_induced_edges(g, k)) return 0;
  mpz_class total = binomial(n, k);
  require_budget(total, budget, "point_probability");
  const std::uint64_t t = total.get_ui();
  const BinomialTable C(n);
  const std::uint64_t blocks = std::min<std::uint64_t>(detail::kBlockCount, t);
  std::vector<std::uint64_t> hits(blocks, 0);
  const auto target = static_cast<std::size_t>(ell);
  parallel_blocks(blocks, threads, [&](std::size_t b) {
    detail::for_each_induced_count(g, k, t * b / blocks, t * (b + 1) / blocks, C,
                                   [&](Mask, std::size_t e) { hits[b] += e == target; });
  });
  mpz_class sum = 0;
  for (auto h : hits) sum += mpz_class(std::to_string(h));
  mpq_class p(sum, total);
  p.canonicalize();
  return p;
}

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

/// Hit fraction of ℓ over `trials` uniform k-sets. Trials run in fixed blocks
/// of 1024, block b drawing from stream b of `seed`.
inline MonteCarloEstimate monte_carlo_probability(const Hypergraph& g, int k, long ell, std::uint64_t trials,
                                                  std::uint64_t seed, unsigned threads = 0) {
  if (trials == 0) throw PreconditionError("trials must be at least 1");
  if (k < 0 || k > g.order()) throw PreconditionError("k must lie in [0, n]");
  constexpr std::uint64_t kBlock = 1024;
  const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<std::uint64_t> hits(blocks, 0);
  parallel_blocks(blocks, threads, [&](std::size_t b) {
    Rng rng(seed, b);
    std::uint64_t count = std::min(kBlock, trials - b * kBlock);
    for (std::uint64_t i = 0; i < count; ++i) {
      Mask s = rng.k_subset(g.order(), k);
      if (static_cast<long>(g.edges_within(s)) == ell) ++hits[b];
    }
  });
  MonteCarloEstimate out;
  out.trials = trials;
  for (auto h : hits) out.hits += h;
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(trials);
  out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
  return out;
}

/// Pr(X = s(k−s)) for G = K_{fs, fk−fs}, in closed form.
inline mpq_class bipartite_construction_probability(int f, int s, int k) {
  mpq_class p(binomial(f * s, s) * binomial(f * k - f * s, k - s), binomial(f * k, k));
  p.canonicalize();
  return p;
}

// ---------------------------------------------------------------------------
// Extremal search for I(n, k, ℓ)
// ---------------------------------------------------------------------------

enum class SearchMode { exhaustive, hill_climb };

struct ExtremalResult {
  int n = 0;
  int k = 0;
  long ell = 0;
  mpq_class best_probability;
  Hypergraph witness;
  bool exhaustive = false;
};

struct HillClimbOptions {
  int r = 2;
  int restarts = 8;
  int steps = 4000;
};

/// Calls visit(g) once for every labelled graph on n vertices whose degree
/// sequence is non-increasing in the label. Every isomorphism class has such a
/// labelling, so maxima over these graphs are maxima over all graphs.
template <class Visit>
void for_each_degree_sorted_graph(int n, Visit&& visit) {
  if (n > 10) throw PreconditionError("degree-sorted graph enumeration supports n <= 10");
  std::vector<Mask> adj(static_cast<std::size_t>(n), 0);
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  // Row i chooses the neighbours of i among i+1..n-1; deg[i] is final after that.
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      std::vector<Mask> edges;
      for (int u = 0; u < n; ++u)
        for_each_bit(adj[static_cast<std::size_t>(u)] & ~low_mask(u + 1), [&](int v) { edges.push_back(bit(u) | bit(v)); });
      visit(Hypergraph(2, n, std::move(edges)));
      return;
    }
    const int later = n - 1 - i;
    const int base = deg[static_cast<std::size_t>(i)];
    const int cap = i == 0 ? n - 1 : deg[static_cast<std::size_t>(i - 1)];
    for (int extra = 0; extra <= later && base + extra <= cap; ++extra) {
      const int d = base + extra;
      for_each_k_subset(later, extra, [&](Mask rel) {
        Mask nb = rel << (i + 1);
        // Partial degrees of later vertices only grow, so each must stay <= d.
        for (int v = i + 1; v < n; ++v)
          if (deg[static_cast<std::size_t>(v)] + static_cast<int>((nb >> v) & 1) > d) return;
        adj[static_cast<std::size_t>(i)] |= nb;
        for_each_bit(nb, [&](int v) {
          adj[static_cast<std::size_t>(v)] |= bit(i);
          ++deg[static_cast<std::size_t>(v)];
        });
        deg[static_cast<std::size_t>(i)] = d;
        self(self, i + 1);
        deg[static_cast<std::size_t>(i)] = base;
        for_each_bit(nb, [&](int v) {
          adj[static_cast<std::size_t>(v)] &= ~bit(i);
          --deg[static_cast<std::size_t>(v)];
        });
        adj[static_cast<std::size_t>(i)] &= ~nb;
      });
    }
  };
  rec(rec, 0);
}

namespace detail {

/// Count of k-sets inducing exactly ℓ edges, for small n (direct loop).
inline std::uint64_t count_ell(const Hypergraph& g, int k, long ell, const BinomialTable& C) {
  std::uint64_t hits = 0;
  const std::uint64_t total = C(g.order(), k);
  for_each_induced_count(g, k, 0, total, C, [&](Mask, std::size_t e) { hits += static_cast<long>(e) == ell; });
  return hits;
}

/// Local search state: induced counts of every k-set, indexed by colex rank.
class ToggleState {
 public:
  ToggleState(int n, int k, int r, long ell) : n_(n), k_(k), r_(r), ell_(ell), C_(n) {
    counts_.assign(C_(n, k), 0);
  }

  std::uint64_t hits() const { return hits_; }

  /// Change in the number of ℓ-hits if r-set e is toggled.
  long delta(Mask e, bool present) const {
    long d = 0;
    const int step = present ? -1 : 1;
    for_each_superset(e, [&](std::uint64_t rank) {
      int c = counts_[rank];
      d += (c + step == ell_) - (c == ell_);
    });
    return d;
  }

  void toggle(Mask e, bool present) {
    const int step = present ? -1 : 1;
    for_each_superset(e, [&](std::uint64_t rank) {
      int& c = counts_[rank];
      hits_ -= c == ell_;
      c += step;
      hits_ += c == ell_;
    });
  }

  void reset() {
    std::fill(counts_.begin(), counts_.end(), 0);
    hits_ = ell_ == 0 ? counts_.size() : 0;
  }

 private:
  template <class F>
  void for_each_superset(Mask e, F&& f) const {
    std::vector<int> free;
    for (int v = 0; v < n_; ++v)
      if (!((e >> v) & 1)) free.push_back(v);
    for_each_k_subset(static_cast<int>(free.size()), k_ - r_, [&](Mask rel) {
      Mask s = e;
      for_each_bit(rel, [&](int j) { s |= bit(free[static_cast<std::size_t>(j)]); });
      f(colex_rank(s, C_));
    });
  }

  int n_, k_, r_;
  long ell_;
  BinomialTable C_;
  std::vector<int> counts_;
  std::uint64_t hits_ = 0;
};

}  // namespace detail

/// I(n, k, ℓ) by exhaustive degree-sorted enumeration (r = 2, n <= 8), or a
/// lower-bound witness by edge-toggle hill climbing with restarts.
inline ExtremalResult extremal_search(int n, int k, long ell, SearchMode mode, std::uint64_t seed,
                                      const HillClimbOptions& options = {},
                                      std::uint64_t budget = enumeration_budget()) {
  if (k < 0 || k > n) throw PreconditionError("k must lie in [0, n]");
  ExtremalResult out{n, k, ell, 0, Hypergraph(mode == SearchMode::exhaustive ? 2 : options.r, n), false};
  const mpz_class total = binomial(n, k);

  if (mode == SearchMode::exhaustive) {
    if (n > 8) throw BudgetExceeded("exhaustive extremal search needs r = 2 and n <= 8");
    require_budget(total, budget, "extremal_search");
    const BinomialTable C(n);
    std::uint64_t best = 0;
    bool have = false;
    for_each_degree_sorted_graph(n, [&](const Hypergraph& g) {
      std::uint64_t hits = detail::count_ell(g, k, ell, C);
      if (!have || hits > best) {
        best = hits;
        out.witness = g;
        have = true;
      }
    });
    out.best_probability = mpq_class(mpz_class(std::to_string(best)), total);
    out.best_probability.canonicalize();
    out.exhaustive = true;
    return out;
  }

  const int r = options.r;
  if (k < r) throw PreconditionError("hill climbing needs k >= r");
  require_budget(total, std::min<std::uint64_t>(budget, std::uint64_t{1} << 26), "extremal_search hill-climb");
  std::vector<Mask> rsets;
  for_each_k_subset(n, r, [&](Mask s) { rsets.push_back(s); });
  detail::ToggleState state(n, k, r, ell);
  const double density = std::clamp(static_cast<double>(ell) / binomial_u64(k, r), 0.0, 1.0);
  std::uint64_t best = 0;
  bool have = false;
  for (int restart = 0; restart < options.restarts; ++restart) {
    Rng rng(seed, static_cast<std::uint64_t>(restart));
    std::vector<char> present(rsets.size(), 0);
    state.reset();
    for (std::size_t i = 0; i < rsets.size(); ++i) {
      if (rng.bernoulli(density)) {
        state.toggle(rsets[i], false);
        present[i] = 1;
      }
    }
    auto snapshot = [&] {
      if (have && state.hits() <= best) return;
      best = state.hits();
      have = true;
      std::vector<Mask> edges;
      for (std::size_t i = 0; i < rsets.size(); ++i)
        if (present[i]) edges.push_back(rsets[i]);
      out.witness = Hypergraph(r, n, std::move(edges));
    };
    snapshot();
    for (int step = 0; step < options.steps; ++step) {
      std::size_t i = rng.below(rsets.size());
      if (state.delta(rsets[i], present[i] != 0) >= 0) {
        state.toggle(rsets[i], present[i] != 0);
        present[i] ^= 1;
        snapshot();
      }
    }
  }
  out.best_probability = mpq_class(mpz_class(std::to_string(best)), total);
  out.best_probability.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// Concentration regime
// ---------------------------------------------------------------------------

struct RegimeCheck {
  double bound = 1.0;
  bool applicable = false;
  mpq_class expectation;
};

/// For a graph on n = 2k vertices: whether ℓ is ε-far from E X, and the tail
/// bound exp(−t²/(8 Σ deg(x)²)) with t = |ℓ − E X|.
inline RegimeCheck concentration_regime_check(const Hypergraph& g, int k, long ell, double eps) {
  if (g.uniformity() != 2) throw PreconditionError("concentration_regime_check needs r = 2");
  if (g.order() != 2 * k) throw PreconditionError("concentration_regime_check needs n = 2k");
  RegimeCheck out;
  const int n = g.order();
  out.expectation = mpq_class(mpz_class(std::to_string(g.edge_count())) * binomial(n - 2, k - 2), binomial(n, k));
  out.expectation.canonicalize();
  const double ex = out.expectation.get_d();
  const double l = static_cast<double>(ell);
  const mpq_class lq(ell);
  out.applicable = lq >= mpq_class(1 + eps) * out.expectation || lq <= mpq_class(1 - eps) * out.expectation;
  double sum_sq = 0.0;
  for (int v = 0; v < n; ++v) {
    double d = static_cast<double>(g.vertex_degree(v));
    sum_sq += d * d;
  }
  const double t = std::fabs(l - ex);
  if (t == 0.0) {
    out.bound = 1.0;
  } else if (sum_sq == 0.0) {
    out.bound = 0.0;
  } else {
    out.bound = std::exp(-t * t / (8.0 * sum_sq));
  }
  return out;
}

}  // namespace anticonc
