#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "core/bits.hpp"
#include "core/budget.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/random.hpp"
#include "distribution.hpp"
#include "matching.hpp"
#include "polynomial.hpp"

namespace anticonc {

// ---------------------------------------------------------------------------
// Harmonic projection onto the slice
//
// Orthogonal basis of harmonic functions on the slice: for a "top set"
// B = {b_1 < ... < b_d} with b_i >= 2i (1-based),
//   χ_B = Σ_A Π_i (x_{a_i} − x_{b_i}),
// the sum over sequences A with a_i < b_i and a_1..a_d, b_1..b_d distinct.
// Each χ_B is harmonic and homogeneous of degree d; those with |B| <= min(k, n−k)
// are pairwise orthogonal on every slice and span its function space.
// ---------------------------------------------------------------------------

/// Top sets of size d in [n], in colex order.
inline std::vector<Mask> top_sets(int n, int d) {
  std::vector<Mask> out;
  for_each_k_subset(n, d, [&](Mask b) {
    int j = 0;
    bool ok = true;
    for_each_bit(b, [&](int v) { ok = ok && v >= 2 * j++ + 1; });
    if (ok) out.push_back(b);
  });
  return out;
}

/// Monomial expansion of χ_B (integer coefficients).
inline std::vector<std::pair<Mask, long>> harmonic_basis_element(Mask b) {
  const std::vector<int> bs = bits_of(b);
  const int d = static_cast<int>(bs.size());
  std::unordered_map<Mask, long, MaskHash> acc;
  std::vector<int> a(static_cast<std::size_t>(d));
  auto rec = [&](auto&& self, int i, Mask used) -> void {
    if (i == d) {
      for (std::uint32_t pick = 0; pick < (1u << d); ++pick) {
        Mask mono = 0;
        for (int j = 0; j < d; ++j) mono |= bit(((pick >> j) & 1) ? bs[static_cast<std::size_t>(j)] : a[static_cast<std::size_t>(j)]);
        acc[mono] += (std::popcount(pick) & 1) ? -1 : 1;
      }
      return;
    }
    for (int v = 0; v < bs[static_cast<std::size_t>(i)]; ++v) {
      if ((used >> v) & 1) continue;
      a[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, used | bit(v));
    }
  };
  rec(rec, 0, b);
  std::vector<std::pair<Mask, long>> out;
  for (auto [mono, c] : acc)
    if (c != 0) out.emplace_back(mono, c);
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return GradedOrder{}(x.first, y.first); });
  return out;
}

namespace detail {

struct SliceBasis {
  std::vector<Mask> points;
  struct Element {
    Mask top;
    std::vector<std::pair<Mask, long>> terms;
    std::vector<long> values;  // χ_B at each slice point
    mpz_class norm;            // Σ over points of χ_B²
  };
  std::vector<Element> elements;  // grouped by |B|, increasing
  std::vector<std::size_t> degree_end;  // elements[0, degree_end[d]) have |B| <= d
};

inline std::shared_ptr<const SliceBasis> slice_basis(int n, int k) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SliceBasis>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(n, k);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto basis = std::make_shared<SliceBasis>();
  for_each_k_subset(n, k, [&](Mask p) { basis->points.push_back(p); });
  const int top = std::min(k, n - k);
  for (int d = 0; d <= top; ++d) {
    for (Mask b : top_sets(n, d)) {
      SliceBasis::Element el{b, harmonic_basis_element(b), {}, 0};
      el.values.reserve(basis->points.size());
      for (Mask p : basis->points) {
        long v = 0;
        for (const auto& [mono, c] : el.terms)
          if (is_subset(mono, p)) v += c;
        el.values.push_back(v);
        el.norm += mpz_class(v) * v;
      }
      basis->elements.push_back(std::move(el));
    }
    basis->degree_end.push_back(basis->elements.size());
  }
  cache.emplace(key, basis);
  return basis;
}

inline void check_slice_args(const MultilinearPolynomial& f, int n, int k) {
  if (n < 0 || n > kMaxVertices) throw PreconditionError("n must lie in [0, 128]");
  if (k < 0 || k > n) throw PreconditionError("k must lie in [0, n]");
  if (f.variables() > n) throw PreconditionError("polynomial has more variables than the slice");
}

}  // namespace detail

/// Values of f at every point of the slice, in colex order of the points.
inline std::vector<mpq_class> slice_values(const MultilinearPolynomial& f, int n, int k,
                                           std::uint64_t budget = enumeration_budget()) {
  detail::check_slice_args(f, n, k);
  require_budget(binomial(n, k), budget, "slice enumeration");
  std::vector<mpq_class> out;
  for_each_k_subset(n, k, [&](Mask p) { out.push_back(f.evaluate_boolean(p)); });
  return out;
}

/// The harmonic multilinear g with g = f on the slice {|x| = k} ⊂ {0,1}^n.
/// deg g <= min{deg f, k, n−k}; agreement at every slice point is checked.
inline MultilinearPolynomial harmonic_project(const MultilinearPolynomial& f, int n, int k,
                                              std::uint64_t budget = enumeration_budget()) {
  detail::check_slice_args(f, n, k);
  require_budget(binomial(n, k), budget, "harmonic_project");
  const auto basis = detail::slice_basis(n, k);
  const std::vector<mpq_class> fv = slice_values(f, n, k, budget);
  const int dmax = std::min({std::max(f.degree(), 0), k, n - k});
  MultilinearPolynomial g(n);
  for (std::size_t e = 0; e < basis->degree_end[static_cast<std::size_t>(dmax)]; ++e) {
    const auto& el = basis->elements[e];
    mpq_class inner = 0;
    for (std::size_t p = 0; p < fv.size(); ++p)
      if (el.values[p] != 0) inner += fv[p] * el.values[p];
    if (inner == 0) continue;
    mpq_class c = inner / el.norm;
    for (const auto& [mono, coeff] : el.terms) g.add(mono, c * coeff);
  }
  for (std::size_t p = 0; p < fv.size(); ++p)
    if (g.evaluate_boolean(basis->points[p]) != fv[p])
      throw std::logic_error("harmonic_project: projection disagrees with f on the slice");
  return g;
}

/// Random multilinear polynomial in m variables: `terms` distinct monomials of
/// degree <= `degree` (including one of degree exactly `degree`), integer
/// coefficients in [-range, range] \ {0}.
inline MultilinearPolynomial random_polynomial(int m, int degree, int terms, int range, std::uint64_t seed) {
  if (degree < 0 || degree > m) throw PreconditionError("degree must lie in [0, m]");
  Rng rng(seed);
  MultilinearPolynomial f(m);
  auto coeff = [&] {
    long c = static_cast<long>(rng.below(static_cast<std::uint64_t>(range))) + 1;
    return mpq_class(rng.coin() ? c : -c);
  };
  f.set(rng.k_subset(m, degree), coeff());
  int attempts = 0;
  while (static_cast<int>(f.size()) < terms && attempts++ < 64 * terms) {
    int d = rng.below(degree + 1);
    Mask s = rng.k_subset(m, d);
    if (f.coefficient(s) == 0) f.set(s, coeff());
  }
  return f;
}

// ---------------------------------------------------------------------------
// Noise operator and hypercontractivity
// ---------------------------------------------------------------------------

/// exp(−t · 2i(n+1−i) / (n(n−1))).
inline long double ht_factor(int i, double t, int n) {
  if (n < 2) return 1.0L;
  long double lambda = 2.0L * i * (n + 1 - i) / (static_cast<long double>(n) * (n - 1));
  return std::exp(-static_cast<long double>(t) * lambda);
}

/// H_t g: each homogeneous part g^{=i} scaled by its eigenvalue factor.
inline RealPolynomial apply_Ht(const MultilinearPolynomial& g, double t, int n) {
  if (!is_harmonic(g)) throw PreconditionError("apply_Ht needs a harmonic polynomial");
  RealPolynomial out(g.variables());
  for (const auto& [index, c] : g.terms())
    out.add(index, static_cast<long double>(c.get_d()) * ht_factor(popcount(index), t, n));
  return out;
}

/// ρ = −2 / (n ln 2 ln(p(1−p))).
inline double log_sobolev_rho(int n, double p) {
  return -2.0 / (n * std::log(2.0) * std::log(p * (1.0 - p)));
}

/// Smallest t with q − 1 <= e^{2ρt}.
inline double minimal_valid_t(int n, double p, double q) {
  if (q <= 2.0) return 0.0;
  return std::log(q - 1.0) / (2.0 * log_sobolev_rho(n, p));
}

struct HypercontractivityResult {
  long double lhs = 0;  // E[|H_t g|^q]^{2/q}
  long double rhs = 0;  // E[g²]
  bool holds = false;   // lhs <= rhs (1 + 1e-9)
  bool hypothesis_ok = false;
  double rho = 0;
  double t = 0;
  double q = 0;
};

inline constexpr long double kHypercontractiveTolerance = 1e-9L;

/// Compares E[|H_t g(ξ)|^q]^{2/q} with E[g(ξ)²] over the slice with k = pn.
inline HypercontractivityResult hypercontractivity_check(const MultilinearPolynomial& g, int n, double p, double t,
                                                         double q, std::uint64_t budget = enumeration_budget()) {
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("p must lie in (0, 1)");
  const double pn = p * n;
  const int k = static_cast<int>(std::lround(pn));
  if (std::fabs(pn - k) > 1e-9) throw PreconditionError("pn must be an integer");
  if (!is_harmonic(g)) throw PreconditionError("hypercontractivity_check needs a harmonic polynomial");
  detail::check_slice_args(g, n, k);
  require_budget(binomial(n, k), budget, "hypercontractivity_check");
  HypercontractivityResult out;
  out.rho = log_sobolev_rho(n, p);
  out.t = t;
  out.q = q;
  out.hypothesis_ok = q - 1.0 <= std::exp(2.0 * out.rho * t) * (1.0 + 1e-12);
  const auto parts = homogeneous_parts(g);
  std::vector<long double> factor(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) factor[i] = ht_factor(static_cast<int>(i), t, n);
  long double sum_q = 0;
  mpq_class sum_sq = 0;
  std::uint64_t points = 0;
  for_each_k_subset(n, k, [&](Mask x) {
    long double h = 0;
    mpq_class gx = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      mpq_class v = parts[i].evaluate_boolean(x);
      gx += v;
      h += factor[i] * static_cast<long double>(v.get_d());
    }
    sum_q += std::pow(std::fabs(h), static_cast<long double>(q));
    sum_sq += gx * gx;
    ++points;
  });
  const long double count = static_cast<long double>(points);
  out.lhs = std::pow(sum_q / count, 2.0L / static_cast<long double>(q));
  mpq_class mean_sq = sum_sq / mpq_class(mpz_class(std::to_string(points)));
  out.rhs = static_cast<long double>(mean_sq.get_d());
  out.holds = out.lhs <= out.rhs + kHypercontractiveTolerance * out.rhs;
  return out;
}

// ---------------------------------------------------------------------------
// Moments and weak anticoncentration
// ---------------------------------------------------------------------------

struct SliceMoments {
  mpq_class mean;
  mpq_class second;  // E Z², Z = f − E f
  mpq_class fourth;  // E Z⁴
  mpq_class max_point_probability;  // max_ℓ Pr(f(ξ) = ℓ)
};

inline SliceMoments slice_moments(const MultilinearPolynomial& f, int n, int k,
                                  std::uint64_t budget = enumeration_budget()) {
  const std::vector<mpq_class> values = slice_values(f, n, k, budget);
  const mpq_class count(mpz_class(std::to_string(values.size())));
  SliceMoments m;
  for (const auto& v : values) m.mean += v;
  m.mean /= count;
  std::map<mpq_class, std::uint64_t> freq;
  for (const auto& v : values) {
    mpq_class z = v - m.mean;
    mpq_class z2 = z * z;
    m.second += z2;
    m.fourth += z2 * z2;
    ++freq[v];
  }
  m.second /= count;
  m.fourth /= count;
  std::uint64_t best = 0;
  for (const auto& [v, c] : freq) best = std::max(best, c);
  m.max_point_probability = mpq_class(mpz_class(std::to_string(best))) / count;
  return m;
}

/// b = E[Z⁴] / (E[Z²])² for Z = f(ξ) − E f(ξ).
inline mpq_class fourth_moment_ratio(const MultilinearPolynomial& f, int n, int k,
                                     std::uint64_t budget = enumeration_budget()) {
  SliceMoments m = slice_moments(f, n, k, budget);
  if (m.second == 0) throw PreconditionError("degenerate: zero variance");
  return m.fourth / (m.second * m.second);
}

/// max_ℓ Pr(Z = ℓ) <= 1 − 1/(2^{4/3} b), decided exactly as 16((1 − P)b)³ >= 1.
inline bool fourth_moment_bound_holds(const mpq_class& max_point_probability, const mpq_class& b) {
  mpq_class x = (1 - max_point_probability) * b;
  return 16 * x * x * x >= 1;
}

/// P <= 1 − 2^{−4/3}·3^{−16d}, decided exactly as 16·3^{48d}(1 − P)³ >= 1.
inline bool weak_bound_holds(const mpq_class& max_point_probability, int d) {
  mpq_class gap = 1 - max_point_probability;
  mpz_class pow3;
  mpz_ui_pow_ui(pow3.get_mpz_t(), 3, static_cast<unsigned long>(48 * d));
  return gap * gap * gap * mpq_class(16 * pow3) >= 1;
}

inline double weak_bound_value(int d) { return 1.0 - std::pow(2.0, -4.0 / 3.0) * std::pow(3.0, -16.0 * d); }

struct WeakAnticoncentration {
  double bound = 1.0;  // 1 − 2^{−4/3} 3^{−16d}, rounded to double
  mpq_class exact_max_point_prob;
  bool holds = false;  // exact comparison
  int d = 0;
  bool heuristic = true;  // the constant is only established for X_{G,k}
};

/// For f on the half slice; d = deg f.
inline WeakAnticoncentration weak_anticoncentration_bound(const MultilinearPolynomial& f, int n, int k,
                                                          std::uint64_t budget = enumeration_budget()) {
  if (2 * k != n) throw PreconditionError("weak_anticoncentration_bound needs k = n/2");
  SliceMoments m = slice_moments(f, n, k, budget);
  if (m.second == 0) throw PreconditionError("degenerate: f is constant on the slice");
  WeakAnticoncentration out;
  out.d = std::max(f.degree(), 1);
  out.bound = weak_bound_value(out.d);
  out.exact_max_point_prob = m.max_point_probability;
  out.holds = weak_bound_holds(m.max_point_probability, out.d);
  return out;
}

/// Same check for X_{G,k} from its distribution, with d = r.
inline WeakAnticoncentration weak_anticoncentration_bound(const DistributionTable& table) {
  if (table.support_size() <= 1) throw PreconditionError("degenerate: X is constant");
  WeakAnticoncentration out;
  out.d = table.r;
  out.bound = weak_bound_value(table.r);
  out.exact_max_point_prob = table.max_probability();
  out.holds = weak_bound_holds(out.exact_max_point_prob, table.r);
  out.heuristic = false;
  return out;
}

// ---------------------------------------------------------------------------
// Rank
// ---------------------------------------------------------------------------

struct RankCertificate {
  std::vector<Mask> matching;  // disjoint index sets of nonzero degree-d coefficients
  std::size_t rank_lower_bound = 0;
  bool exact = false;  // maximum matching (d <= 2) rather than greedy
};

/// Matching in the d-uniform hypergraph of nonzero degree-d coefficients:
/// exact for d <= 2, greedy (within a factor d) otherwise.
inline RankCertificate compute_rank(const MultilinearPolynomial& f, int d) {
  RankCertificate out;
  if (d <= 0) {
    out.exact = true;
    return out;
  }
  std::vector<Mask> edges;
  for (const auto& [index, c] : f.terms())
    if (popcount(index) == d) edges.push_back(index);
  if (d == 2) {
    out.matching = maximum_matching(f.variables(), edges);
    out.exact = true;
  } else {
    out.matching = greedy_matching(edges);
    out.exact = d == 1;
  }
  out.rank_lower_bound = out.matching.size();
  return out;
}

inline RankCertificate compute_rank(const MultilinearPolynomial& f) { return compute_rank(f, f.degree()); }

struct FallbackCertificate {
  std::size_t r = 0;
  std::vector<Mask> matching;  // (d−1)-sets with |f_S| >= r·m_d, pairwise disjoint
  mpq_class m_d;
  mpq_class threshold;
};

namespace detail {

inline std::vector<Mask> fallback_edges(const MultilinearPolynomial& f, int d, const mpq_class& threshold, bool strict) {
  std::vector<Mask> edges;
  for (const auto& [index, c] : f.terms()) {
    if (popcount(index) != d - 1) continue;
    mpq_class a = abs(c);
    if (strict ? a > threshold : a >= threshold) edges.push_back(index);
  }
  return edges;
}

}  // namespace detail

/// Largest r such that the (d−1)-sets S with |f_S| >= r·m_d contain a greedy
/// matching of size r. With m_d = 0 every nonzero (d−1)-coefficient counts.
inline FallbackCertificate fallback_rank(const MultilinearPolynomial& f, int d) {
  FallbackCertificate out;
  if (d <= 0) return out;
  out.m_d = f.max_abs_coefficient(d);
  const bool degenerate = out.m_d == 0;
  const std::size_t upper = static_cast<std::size_t>(f.variables() / std::max(d - 1, 1));
  // Greedy matching size is not monotone in r, so every r is tried from the top.
  for (std::size_t r = upper; r >= 1; --r) {
    mpq_class threshold = degenerate ? mpq_class(0) : out.m_d * mpq_class(mpz_class(std::to_string(r)));
    std::vector<Mask> matching = greedy_matching(detail::fallback_edges(f, d, threshold, degenerate));
    if (matching.size() >= r) {
      matching.resize(r);
      out.r = r;
      out.matching = std::move(matching);
      out.threshold = threshold;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sign-variable evaluation
// ---------------------------------------------------------------------------

namespace detail {

/// Integer coefficients L·f with |L·f| summing below 2^62, for fast evaluation.
struct IntegerPolynomial {
  std::vector<std::pair<Mask, std::int64_t>> terms;
  int m = 0;

  explicit IntegerPolynomial(const MultilinearPolynomial& f) : m(f.variables()) {
    auto [scale, g] = clear_denominators(f);
    mpz_class total = 0;
    for (const auto& [index, c] : g.terms()) {
      mpz_class v = c.get_num();
      total += abs(v);
      terms.emplace_back(index, v.get_si());
    }
    if (total >= (mpz_class(1) << 62)) throw PreconditionError("coefficients too large for 64-bit evaluation");
  }

  std::int64_t at_signs(Mask negatives) const {
    std::int64_t s = 0;
    for (const auto& [index, c] : terms) s += (popcount(index & negatives) & 1) ? -c : c;
    return s;
  }
};

/// f at every sign vector, indexed by the mask of −1 coordinates (Walsh–Hadamard).
inline std::vector<std::int64_t> sign_table(const MultilinearPolynomial& f, int m, std::uint64_t budget) {
  if (m > 30 || f.variables() > m) throw BudgetExceeded("sign enumeration needs m <= 30");
  require_budget(mpz_class(1) << m, budget, "sign enumeration");
  IntegerPolynomial p(f);
  std::vector<std::int64_t> v(std::size_t{1} << m, 0);
  for (const auto& [index, c] : p.terms) v[static_cast<std::size_t>(index)] = c;
  for (std::size_t len = 1; len < v.size(); len <<= 1)
    for (std::size_t i = 0; i < v.size(); i += len << 1)
      for (std::size_t j = i; j < i + len; ++j) {
        std::int64_t a = v[j], b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
  return v;
}

}  // namespace detail

struct MnvReport {
  std::size_t rank = 0;
  bool rank_exact = false;
  double max_point_prob = 0.0;
  double scaled = 0.0;  // √rank · max_point_prob
  std::uint64_t trials = 0;
};

/// Empirical max_ℓ Pr(f(γ) = ℓ) for uniform γ ∈ {±1}^m, next to rank(f).
/// Trials run in blocks of 1024 on stream b of `seed`.
inline MnvReport mnv_rank_report(const MultilinearPolynomial& f, std::uint64_t trials, std::uint64_t seed,
                                 unsigned threads = 0) {
  if (trials == 0) throw PreconditionError("trials must be at least 1");
  const detail::IntegerPolynomial p(f);
  const Mask domain = low_mask(f.variables());
  constexpr std::uint64_t kBlock = 1024;
  const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<std::vector<std::int64_t>> values(blocks);
  parallel_blocks(blocks, threads, [&](std::size_t b) {
    Rng rng(seed, b);
    std::uint64_t count = std::min(kBlock, trials - b * kBlock);
    auto& out = values[b];
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      Mask neg = (static_cast<Mask>(rng.next()) << 64 | rng.next()) & domain;
      out.push_back(p.at_signs(neg));
    }
  });
  std::vector<std::int64_t> all;
  all.reserve(trials);
  for (const auto& v : values) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end());
  std::uint64_t best = 0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    best = std::max<std::uint64_t>(best, j - i);
    i = j;
  }
  MnvReport out;
  const RankCertificate cert = compute_rank(f);
  out.rank = cert.rank_lower_bound;
  out.rank_exact = cert.exact;
  out.trials = trials;
  out.max_point_prob = static_cast<double>(best) / static_cast<double>(trials);
  out.scaled = std::sqrt(static_cast<double>(out.rank)) * out.max_point_prob;
  return out;
}

/// Σ_i Pr(F(γ) ≠ F(γ with γ_i flipped)) for F = 1[p(γ) > 0], exactly.
inline mpq_class average_sensitivity(const MultilinearPolynomial& p, int m,
                                     std::uint64_t budget = enumeration_budget()) {
  if (m > 24) throw BudgetExceeded("average_sensitivity supports m <= 24");
  require_budget(mpz_class(m) << m, budget, "average_sensitivity");
  const std::vector<std::int64_t> values = detail::sign_table(p, m, budget);
  std::uint64_t flips = 0;
  for (std::size_t x = 0; x < values.size(); ++x) {
    const bool fx = values[x] > 0;
    for (int i = 0; i < m; ++i) flips += fx != (values[x ^ (std::size_t{1} << i)] > 0);
  }
  mpq_class out(mpz_class(std::to_string(flips)), mpz_class(1) << m);
  out.canonicalize();
  return out;
}

}  // namespace anticonc
