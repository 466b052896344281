#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/bits.hpp"
#include "core/errors.hpp"
#include "core/random.hpp"
#include "hypergraph.hpp"
#include "matching.hpp"

namespace anticonc {

enum class GreedyVariant { high_degree, avoid_high_degree };

inline const char* to_string(GreedyVariant v) {
  return v == GreedyVariant::high_degree ? "high_degree" : "avoid_high_degree";
}

struct ProcedureStep {
  int t = 0;
  int unrevealed = 0;  // |V_t|
  Mask v_t = 0;        // V_t: vertices whose position is still hidden
  Mask q_t = 0;        // Q_t: positions q < k with σ(q) or σ(q+k) revealed
  int u = -1, w = -1;  // chosen vertices
  int i = -1, j = -1;  // revealed positions σ^{-1}(u), σ^{-1}(w)
  int partner_i = -1, partner_j = -1;  // σ(i+k), σ(j+k) when revealed
  bool success = false;
};

struct ProcedureTrace {
  GreedyVariant variant = GreedyVariant::avoid_high_degree;
  bool complemented = false;  // run on the complement (e(G) > C(n,2)/2)
  Mask high_degree = 0;       // U: degree >= 0.9n
  std::vector<std::pair<int, int>> s_matching;  // S, avoid variant only
  double s = 0.0;             // e(G[Ū]) / k
  double T = 0.0;
  std::vector<ProcedureStep> steps;
  std::vector<std::pair<int, int>> matching;  // M, as position pairs
  std::vector<int> sigma;                     // σ after completing the reveals

  std::size_t successes() const {
    std::size_t c = 0;
    for (const auto& s : steps) c += s.success;
    return c;
  }
};

namespace detail {

/// A permutation revealed one value at a time, uniformly given what is known.
class LazyPermutation {
 public:
  LazyPermutation(int n, Rng& rng)
      : n_(n), rng_(rng), vertex_at_(static_cast<std::size_t>(n), -1), position_of_(static_cast<std::size_t>(n), -1) {}

  bool vertex_known(int v) const { return position_of_[static_cast<std::size_t>(v)] >= 0; }
  bool position_known(int p) const { return vertex_at_[static_cast<std::size_t>(p)] >= 0; }

  /// σ^{-1}(v).
  int reveal_position(int v) {
    if (vertex_known(v)) return position_of_[static_cast<std::size_t>(v)];
    std::vector<int> free;
    for (int p = 0; p < n_; ++p)
      if (!position_known(p)) free.push_back(p);
    int p = free[static_cast<std::size_t>(rng_.below(static_cast<int>(free.size())))];
    assign(p, v);
    return p;
  }

  /// σ(p).
  int reveal_vertex(int p) {
    if (position_known(p)) return vertex_at_[static_cast<std::size_t>(p)];
    std::vector<int> free;
    for (int v = 0; v < n_; ++v)
      if (!vertex_known(v)) free.push_back(v);
    int v = free[static_cast<std::size_t>(rng_.below(static_cast<int>(free.size())))];
    assign(p, v);
    return v;
  }

  Mask unrevealed_vertices() const {
    Mask m = 0;
    for (int v = 0; v < n_; ++v)
      if (!vertex_known(v)) m |= bit(v);
    return m;
  }

  /// Fills the remaining positions uniformly.
  std::vector<int> complete() {
    for (int p = 0; p < n_; ++p) reveal_vertex(p);
    return vertex_at_;
  }

 private:
  void assign(int p, int v) {
    vertex_at_[static_cast<std::size_t>(p)] = v;
    position_of_[static_cast<std::size_t>(v)] = p;
  }

  int n_;
  Rng& rng_;
  std::vector<int> vertex_at_;
  std::vector<int> position_of_;
};

}  // namespace detail

/// Builds a matching in H by revealing σ lazily: each step picks two hidden
/// vertices (from U, or a pair of S), reveals their positions i, j and, when
/// i, j < k and σ(i+k), σ(j+k) are still hidden, reveals those and tests {i, j}.
/// Runs steps t = 0, 1, ... while t <= T.
inline ProcedureTrace run_greedy_procedure(const Hypergraph& g0, GreedyVariant variant, std::uint64_t seed) {
  if (g0.uniformity() != 2) throw PreconditionError("greedy procedure needs a graph");
  const int n = g0.order();
  if (n % 2 != 0 || n == 0) throw PreconditionError("greedy procedure needs even n > 0");
  const int k = n / 2;
  ProcedureTrace trace;
  trace.variant = variant;
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
  trace.complemented = 2 * g0.edge_count() > pairs;
  const Hypergraph g = trace.complemented ? complement(g0) : g0;

  for (int v = 0; v < n; ++v)
    if (static_cast<double>(g.vertex_degree(v)) >= 0.9 * n) trace.high_degree |= bit(v);
  const Mask low = low_mask(n) & ~trace.high_degree;

  if (variant == GreedyVariant::high_degree) {
    const int u_size = popcount(trace.high_degree);
    if (u_size < 3) throw PreconditionError("high_degree variant needs |U| >= 3, have " + std::to_string(u_size));
    trace.T = std::min((u_size - 2) / 4.0, 0.01 * n);
  } else {
    std::vector<Mask> inside;
    for (Mask e : g.edges())
      if (is_subset(e, low)) inside.push_back(e);
    trace.s = static_cast<double>(inside.size()) / k;
    for (Mask e : greedy_matching(inside)) trace.s_matching.emplace_back(lowest_bit(e), lowest_bit(e & (e - 1)));
    if (trace.s_matching.empty()) throw PreconditionError("avoid_high_degree variant needs G[U-bar] to have an edge");
    trace.T = std::min((static_cast<double>(trace.s_matching.size()) - 1) / 4.0, 0.01 * n);
  }

  Rng rng(seed);
  detail::LazyPermutation sigma(n, rng);
  auto a = [&](int x, int y) { return g.a(bit(x) | bit(y)); };
  for (int t = 0; t <= trace.T; ++t) {
    ProcedureStep step;
    step.t = t;
    step.v_t = sigma.unrevealed_vertices();
    step.unrevealed = popcount(step.v_t);
    for (int q = 0; q < k; ++q)
      if (sigma.position_known(q) || sigma.position_known(q + k)) step.q_t |= bit(q);
    if (variant == GreedyVariant::high_degree) {
      Mask cand = trace.high_degree & step.v_t;
      if (popcount(cand) < 2) break;
      step.u = lowest_bit(cand);
      step.w = lowest_bit(cand & (cand - 1));
    } else {
      for (auto [x, y] : trace.s_matching) {
        if (((step.v_t >> x) & 1) && ((step.v_t >> y) & 1)) {
          step.u = x;
          step.w = y;
          break;
        }
      }
      if (step.u < 0) break;
    }
    step.i = sigma.reveal_position(step.u);
    step.j = sigma.reveal_position(step.w);
    if (step.i < k && step.j < k && !sigma.position_known(step.i + k) && !sigma.position_known(step.j + k)) {
      step.partner_i = sigma.reveal_vertex(step.i + k);
      step.partner_j = sigma.reveal_vertex(step.j + k);
      int sum = a(step.u, step.w) - a(step.u, step.partner_j) - a(step.partner_i, step.w) +
                a(step.partner_i, step.partner_j);
      if (sum != 0) {
        step.success = true;
        trace.matching.emplace_back(std::min(step.i, step.j), std::max(step.i, step.j));
      }
    }
    trace.steps.push_back(step);
  }
  trace.sigma = sigma.complete();
  return trace;
}

}  // namespace anticonc
