#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "core/bits.hpp"
#include "core/budget.hpp"
#include "core/errors.hpp"
#include "core/random.hpp"
#include "hypergraph.hpp"
#include "polynomial.hpp"

namespace anticonc {

/// A point of the slice: n coordinates, the ones given by a mask.
struct SliceVector {
  int n = 0;
  Mask ones = 0;

  int weight() const { return popcount(ones); }
  bool operator[](int i) const { return (ones >> i) & 1; }
  friend bool operator==(const SliceVector&, const SliceVector&) = default;
};

/// Permutation σ of [n], signs γ ∈ {±1}^{n/2}, and the slice point ξ they
/// determine: ξ_{σ(i)} = 1 when γ_i = +1, ξ_{σ(i+n/2)} = 1 when γ_i = −1.
struct CouplingSample {
  std::vector<int> sigma;
  std::vector<int> gamma;
  SliceVector xi;
};

/// Uniform weight-k vector of length n.
inline SliceVector sample_slice(int n, int k, std::uint64_t seed) {
  if (n < 0 || n > kMaxVertices) throw PreconditionError("n must lie in [0, 128]");
  if (k < 0 || k > n) throw PreconditionError("k must lie in [0, n]");
  Rng rng(seed);
  return {n, rng.k_subset(n, k)};
}

/// ξ as a mask; `negatives` has bit i set when γ_i = −1.
inline Mask coupled_slice(std::span<const int> sigma, Mask negatives) {
  const int h = static_cast<int>(sigma.size()) / 2;
  Mask xi = 0;
  for (int i = 0; i < h; ++i) {
    int pos = ((negatives >> i) & 1) ? i + h : i;
    xi |= bit(sigma[static_cast<std::size_t>(pos)]);
  }
  return xi;
}

inline Mask sign_mask(std::span<const int> gamma) {
  Mask m = 0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (gamma[i] != 1 && gamma[i] != -1) throw PreconditionError("signs must be +1 or -1");
    if (gamma[i] < 0) m |= bit(static_cast<int>(i));
  }
  return m;
}

namespace detail {

inline void check_permutation(std::span<const int> sigma) {
  const int n = static_cast<int>(sigma.size());
  if (n % 2 != 0) throw PreconditionError("coupling needs even n");
  if (n > kMaxVertices) throw PreconditionError("n must lie in [0, 128]");
  Mask seen = 0;
  for (int v : sigma) {
    if (v < 0 || v >= n || ((seen >> v) & 1)) throw PreconditionError("sigma is not a permutation of [n]");
    seen |= bit(v);
  }
}

}  // namespace detail

inline CouplingSample make_coupling(std::vector<int> sigma, std::vector<int> gamma) {
  detail::check_permutation(sigma);
  if (gamma.size() * 2 != sigma.size()) throw PreconditionError("gamma must have n/2 entries");
  const int n = static_cast<int>(sigma.size());
  Mask xi = coupled_slice(sigma, sign_mask(gamma));
  return {std::move(sigma), std::move(gamma), {n, xi}};
}

inline CouplingSample sample_coupled(int n, std::uint64_t seed) {
  if (n % 2 != 0) throw PreconditionError("coupling needs even n");
  if (n < 0 || n > kMaxVertices) throw PreconditionError("n must lie in [0, 128]");
  Rng rng(seed);
  std::vector<int> sigma = rng.permutation(n);
  std::vector<int> gamma(static_cast<std::size_t>(n / 2));
  for (int& g : gamma) g = rng.coin() ? 1 : -1;
  return make_coupling(std::move(sigma), std::move(gamma));
}

/// e(G[ξ]) for the ξ determined by (σ, γ).
inline std::size_t evaluate_coupled(const Hypergraph& g, std::span<const int> sigma, std::span<const int> gamma) {
  detail::check_permutation(sigma);
  if (static_cast<int>(sigma.size()) != g.order()) throw PreconditionError("sigma must permute the vertices of G");
  if (gamma.size() * 2 != sigma.size()) throw PreconditionError("gamma must have n/2 entries");
  return g.edges_within(coupled_slice(sigma, sign_mask(gamma)));
}

/// 2^d·g_I for a set I of positions in [n/2] with |I| ∈ {d, d−1}, d = r:
/// Σ_b (−1)^{|b|} deg({σ(i_j + b_j n/2)}).
inline long coefficient_sum(const Hypergraph& g, std::span<const int> sigma, Mask positions) {
  const int h = static_cast<int>(sigma.size()) / 2;
  const std::vector<int> idx = bits_of(positions);
  const int q = static_cast<int>(idx.size());
  long sum = 0;
  for (std::uint32_t b = 0; b < (1u << q); ++b) {
    Mask r = 0;
    for (int j = 0; j < q; ++j) {
      int pos = idx[static_cast<std::size_t>(j)] + (((b >> j) & 1) ? h : 0);
      r |= bit(sigma[static_cast<std::size_t>(pos)]);
    }
    long d = static_cast<long>(g.degree(r));
    sum += (std::popcount(b) & 1) ? -d : d;
  }
  return sum;
}

/// Degree-r and degree-(r−1) coefficients of X_{G,n/2} as a polynomial in γ.
/// Lower layers are not determined by this formula and are left out.
inline MultilinearPolynomial extract_coefficients(const Hypergraph& g, std::span<const int> sigma,
                                                  std::uint64_t budget = enumeration_budget()) {
  detail::check_permutation(sigma);
  if (static_cast<int>(sigma.size()) != g.order()) throw PreconditionError("sigma must permute the vertices of G");
  const int h = g.order() / 2;
  const int d = g.uniformity();
  MultilinearPolynomial out(h);
  if (g.edge_count() == 0) return out;
  require_budget(binomial(h, d) + binomial(h, d - 1), budget, "extract_coefficients");
  const mpz_class scale = mpz_class(1) << d;
  for (int q : {d, d - 1}) {
    if (q < 0 || q > h) continue;
    for_each_k_subset(h, q, [&](Mask positions) {
      long s = coefficient_sum(g, sigma, positions);
      if (s != 0) out.add(positions, mpq_class(mpz_class(s), scale));
    });
  }
  return out;
}

/// The complete polynomial in γ, by Walsh–Hadamard interpolation over all
/// 2^{n/2} sign vectors.
inline MultilinearPolynomial coupled_polynomial(const Hypergraph& g, std::span<const int> sigma,
                                                std::uint64_t budget = enumeration_budget()) {
  detail::check_permutation(sigma);
  if (static_cast<int>(sigma.size()) != g.order()) throw PreconditionError("sigma must permute the vertices of G");
  const int h = g.order() / 2;
  if (h > 30) throw BudgetExceeded("coupled_polynomial needs n/2 <= 30");
  require_budget(mpz_class(1) << h, budget, "coupled_polynomial");
  const std::size_t size = std::size_t{1} << h;
  std::vector<std::int64_t> f(size);
  for (std::size_t neg = 0; neg < size; ++neg)
    f[neg] = static_cast<std::int64_t>(g.edges_within(coupled_slice(sigma, static_cast<Mask>(neg))));
  // Unnormalised transform: f̂(I) = Σ_γ f(γ) γ^I.
  for (std::size_t len = 1; len < size; len <<= 1)
    for (std::size_t i = 0; i < size; i += len << 1)
      for (std::size_t j = i; j < i + len; ++j) {
        std::int64_t a = f[j], b = f[j + len];
        f[j] = a + b;
        f[j + len] = a - b;
      }
  MultilinearPolynomial out(h);
  const mpz_class denom = mpz_class(1) << h;
  for (std::size_t index = 0; index < size; ++index)
    if (f[index] != 0) out.add(static_cast<Mask>(index), mpq_class(mpz_class(static_cast<long>(f[index])), denom));
  return out;
}

/// 2^d·g: the normalisation in which the coefficient displays are integers.
inline MultilinearPolynomial unnormalized(const MultilinearPolynomial& g, int d) {
  return g * mpq_class(mpz_class(1) << d);
}

/// exp(−t² / (8 Σ c_i²)).
inline double concentration_tail_bound(std::span<const double> lipschitz, double t) {
  if (t < 0) throw PreconditionError("t must be non-negative");
  double sum = 0.0;
  for (double c : lipschitz) {
    if (c < 0) throw PreconditionError("Lipschitz constants must be non-negative");
    sum += c * c;
  }
  if (t == 0.0) return 1.0;
  if (sum == 0.0) return 0.0;
  return std::exp(-t * t / (8.0 * sum));
}

}  // namespace anticonc
