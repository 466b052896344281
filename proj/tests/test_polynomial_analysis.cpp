#include <gtest/gtest.h>

#include <cmath>

#include "anticonc/distribution.hpp"
#include "anticonc/polynomial_analysis.hpp"
#include "oracles.hpp"

using namespace anticonc;

namespace {

MultilinearPolynomial poly(int m, std::initializer_list<std::pair<std::initializer_list<int>, mpq_class>> terms) {
  MultilinearPolynomial p(m);
  for (const auto& [vars, c] : terms) p.add(mask_of(vars), c);
  return p;
}

// E over the slice of f·g, by direct enumeration.
mpq_class slice_inner(const MultilinearPolynomial& f, const MultilinearPolynomial& g, int n, int k) {
  mpq_class sum = 0;
  std::uint64_t points = 0;
  for_each_k_subset(n, k, [&](Mask x) {
    sum += f.evaluate_boolean(x) * g.evaluate_boolean(x);
    ++points;
  });
  return sum / mpq_class(mpz_class(static_cast<unsigned long>(points)));
}

}  // namespace

TEST(HarmonicBasis, ElementsAreHarmonicAndOrthogonal) {
  const int n = 6, k = 3;
  std::vector<MultilinearPolynomial> chis;
  for (int d = 0; d <= 3; ++d)
    for (Mask b : top_sets(n, d)) {
      MultilinearPolynomial chi(n);
      for (auto [mono, c] : harmonic_basis_element(b)) chi.add(mono, c);
      EXPECT_TRUE(is_harmonic(chi));
      EXPECT_EQ(chi.degree(), d);
      chis.push_back(chi);
    }
  // The top sets of size <= min(k, n−k) number C(n, k): they span the slice.
  EXPECT_EQ(mpz_class(static_cast<unsigned long>(chis.size())), binomial(n, k));
  for (std::size_t i = 0; i < chis.size(); ++i)
    for (std::size_t j = i + 1; j < chis.size(); ++j) EXPECT_EQ(slice_inner(chis[i], chis[j], n, k), 0);
}

TEST(HarmonicProject, Examples) {
  EXPECT_EQ(harmonic_project(poly(2, {{{0}, 1}, {{1}, 1}}), 2, 1), MultilinearPolynomial::constant(2, 1));
  EXPECT_EQ(harmonic_project(poly(2, {{{0}, 1}}), 2, 1),
            poly(2, {{{}, mpq_class(1, 2)}, {{0}, mpq_class(1, 2)}, {{1}, mpq_class(-1, 2)}}));
  EXPECT_EQ(harmonic_project(MultilinearPolynomial::constant(5, 7), 5, 2), MultilinearPolynomial::constant(5, 7));
  EXPECT_TRUE(harmonic_project(MultilinearPolynomial(4), 4, 2).is_zero());
}

TEST(HarmonicProject, AgreesOnSliceAndIsHarmonic) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int n = 4 + static_cast<int>(seed % 5);
    const int k = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(n - 1));
    const int deg = 1 + static_cast<int>(seed % 3);
    MultilinearPolynomial f = random_polynomial(n, deg, 8, 5, seed);
    MultilinearPolynomial g = harmonic_project(f, n, k);
    EXPECT_TRUE(derivative_sum(g).is_zero());
    EXPECT_LE(g.degree(), std::min({f.degree(), k, n - k}));
    for_each_k_subset(n, k, [&](Mask x) { EXPECT_EQ(g.evaluate_boolean(x), f.evaluate_boolean(x)); });
  }
  EXPECT_THROW(harmonic_project(MultilinearPolynomial(5), 4, 2), PreconditionError);
  EXPECT_THROW(harmonic_project(MultilinearPolynomial(3), 30, 15, 1000), BudgetExceeded);
}

TEST(HarmonicProject, HomogeneousPartsAreOrthogonal) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const int n = 8;
    MultilinearPolynomial g = harmonic_project(random_polynomial(n, 3, 10, 4, 100 + seed), n, 4);
    auto parts = homogeneous_parts(g);
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (std::size_t j = i + 1; j < parts.size(); ++j) EXPECT_EQ(slice_inner(parts[i], parts[j], n, 4), 0);
  }
}

TEST(NoiseOperator, FactorsAndParseval) {
  EXPECT_NEAR(static_cast<double>(ht_factor(1, 1.0, 4)), std::exp(-2.0 / 3.0), 1e-15);
  EXPECT_EQ(ht_factor(0, 3.0, 7), 1.0L);
  const int n = 8;
  MultilinearPolynomial g = harmonic_project(random_polynomial(n, 3, 10, 4, 5), n, 4);
  RealPolynomial id = apply_Ht(g, 0.0, n);
  for (const auto& [idx, c] : g.terms()) EXPECT_NEAR(static_cast<double>(id.coefficient(idx)), c.get_d(), 1e-12);
  EXPECT_THROW(apply_Ht(poly(2, {{{0, 1}, 1}}), 1.0, 2), PreconditionError);

  // E[(H_t g)²] = Σ_i e^{−2tλ_i} E[(g^{=i})²] on the slice.
  const double t = 0.7;
  RealPolynomial h = apply_Ht(g, t, n);
  long double lhs = 0;
  std::uint64_t points = 0;
  for_each_k_subset(n, 4, [&](Mask x) {
    long double v = h.evaluate_boolean(x);
    lhs += v * v;
    ++points;
  });
  lhs /= points;
  long double rhs = 0;
  auto parts = homogeneous_parts(g);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    long double f = ht_factor(static_cast<int>(i), t, n);
    rhs += f * f * static_cast<long double>(slice_inner(parts[i], parts[i], n, 4).get_d());
  }
  EXPECT_NEAR(static_cast<double>(lhs), static_cast<double>(rhs), 1e-9 * static_cast<double>(rhs));
}

TEST(Hypercontractivity, ConstantAndQuadraticCases) {
  HypercontractivityResult c = hypercontractivity_check(MultilinearPolynomial::constant(6, 3), 6, 0.5, 0.0, 4.0);
  EXPECT_NEAR(static_cast<double>(c.lhs), 9.0, 1e-12);
  EXPECT_EQ(c.rhs, 9.0L);
  EXPECT_TRUE(c.holds);
  EXPECT_FALSE(c.hypothesis_ok);  // t = 0 is too small for q = 4

  MultilinearPolynomial g = harmonic_project(random_polynomial(6, 2, 6, 3, 2), 6, 3);
  HypercontractivityResult two = hypercontractivity_check(g, 6, 0.5, 0.0, 2.0);
  EXPECT_NEAR(static_cast<double>(two.lhs), static_cast<double>(two.rhs), 1e-12 * static_cast<double>(two.rhs));
  EXPECT_TRUE(two.hypothesis_ok);
}

TEST(Hypercontractivity, HoldsAtMinimalValidT) {
  for (int n : {6, 8, 10}) {
    const double t = minimal_valid_t(n, 0.5, 4.0);
    EXPECT_NEAR(3.0, std::exp(2.0 * log_sobolev_rho(n, 0.5) * t), 1e-9);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      MultilinearPolynomial g = harmonic_project(random_polynomial(n, 3, 10, 5, seed), n, n / 2);
      HypercontractivityResult res = hypercontractivity_check(g, n, 0.5, t, 4.0);
      EXPECT_TRUE(res.hypothesis_ok);
      EXPECT_TRUE(res.holds) << res.lhs << " vs " << res.rhs;
    }
  }
  EXPECT_THROW(hypercontractivity_check(poly(2, {{{0, 1}, 1}}), 4, 0.5, 1.0, 4.0), PreconditionError);
  EXPECT_THROW(hypercontractivity_check(MultilinearPolynomial(5), 5, 0.5, 1.0, 4.0), PreconditionError);
}

TEST(FourthMoment, ExamplesAndMomentInequality) {
  EXPECT_EQ(fourth_moment_ratio(poly(6, {{{0}, 1}}), 6, 3), 1);
  EXPECT_THROW(fourth_moment_ratio(MultilinearPolynomial::constant(4, 2), 4, 2), PreconditionError);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 6 + 2 * static_cast<int>(seed % 2);
    MultilinearPolynomial f = random_polynomial(n, 1 + static_cast<int>(seed % 3), 5, 3, seed);
    SliceMoments m = slice_moments(f, n, n / 2);
    if (m.second == 0) continue;
    mpq_class b = m.fourth / (m.second * m.second);
    EXPECT_EQ(b, fourth_moment_ratio(f, n, n / 2));
    EXPECT_GE(b, 1);
    EXPECT_TRUE(fourth_moment_bound_holds(m.max_point_probability, b));
  }
}

TEST(SliceMoments, TwoPointValues) {
  // f = x₁ on BL(4, 2): value 1 with probability 1/2.
  SliceMoments m = slice_moments(poly(4, {{{0}, 1}}), 4, 2);
  EXPECT_EQ(m.mean, mpq_class(1, 2));
  EXPECT_EQ(m.second, mpq_class(1, 4));
  EXPECT_EQ(m.fourth, mpq_class(1, 16));
  EXPECT_EQ(m.max_point_probability, mpq_class(1, 2));
}

TEST(WeakBound, ExactComparisons) {
  WeakAnticoncentration w = weak_anticoncentration_bound(poly(2, {{{0}, 1}}), 2, 1);
  EXPECT_EQ(w.exact_max_point_prob, mpq_class(1, 2));
  EXPECT_TRUE(w.holds);
  EXPECT_NEAR(1.0 - w.bound, std::pow(2.0, -4.0 / 3.0) * std::pow(3.0, -16.0), 1e-15);
  EXPECT_THROW(weak_anticoncentration_bound(MultilinearPolynomial::constant(2, 1), 2, 1), PreconditionError);
  EXPECT_THROW(weak_anticoncentration_bound(poly(3, {{{0}, 1}}), 3, 1), PreconditionError);

  EXPECT_TRUE(weak_bound_holds(0, 1));
  EXPECT_FALSE(weak_bound_holds(1, 1));
  // Just above and below 1 − 2^{−4/3}3^{−16}: (1 − P)³ against 1/(16·3^48).
  mpz_class p3;
  mpz_ui_pow_ui(p3.get_mpz_t(), 3, 16);
  EXPECT_TRUE(weak_bound_holds(1 - mpq_class(1, p3 * 2), 1));
  EXPECT_FALSE(weak_bound_holds(1 - mpq_class(1, p3 * 3), 1));

  DistributionTable t = exact_distribution(make_complete_bipartite(2, 2, 2), 2);
  WeakAnticoncentration wx = weak_anticoncentration_bound(t);
  EXPECT_FALSE(wx.heuristic);
  EXPECT_EQ(wx.d, 2);
  EXPECT_EQ(wx.exact_max_point_prob, mpq_class(2, 3));
  EXPECT_TRUE(wx.holds);
  EXPECT_THROW(weak_anticoncentration_bound(exact_distribution(Hypergraph(2, 4), 2)), PreconditionError);
}

TEST(Rank, Examples) {
  EXPECT_EQ(compute_rank(poly(4, {{{0, 1}, 1}, {{2, 3}, 1}})).rank_lower_bound, 2u);
  EXPECT_EQ(compute_rank(poly(4, {{{0, 1}, 1}, {{0, 2}, 1}, {{0, 3}, 1}})).rank_lower_bound, 1u);
  EXPECT_EQ(compute_rank(MultilinearPolynomial(3)).rank_lower_bound, 0u);
  RankCertificate cubic = compute_rank(poly(6, {{{0, 1, 2}, 1}, {{3, 4, 5}, -2}, {{0}, 5}}));
  EXPECT_EQ(cubic.rank_lower_bound, 2u);
  EXPECT_FALSE(cubic.exact);
}

TEST(Rank, QuadraticMatchesBruteForceMatching) {
  Rng rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 2 + static_cast<int>(rng.below(11));
    Hypergraph g = make_random_uniform(m, 2, rng.uniform01(), rng.next());
    MultilinearPolynomial f(m);
    for (Mask e : g.edges()) f.add(e, 1);
    RankCertificate cert = compute_rank(f, 2);
    EXPECT_TRUE(cert.exact);
    EXPECT_EQ(cert.rank_lower_bound, oracle::max_matching(g.edges()));
    EXPECT_TRUE(is_matching(cert.matching));
    for (Mask s : cert.matching) EXPECT_NE(f.coefficient(s), 0);
  }
}

TEST(Rank, GreedyWithinFactorOfExactOnDenseQuadratic) {
  MultilinearPolynomial f = random_polynomial(20, 2, 120, 3, 4);
  MultilinearPolynomial top = f.homogeneous_part(2);
  const std::size_t exact = compute_rank(top, 2).rank_lower_bound;
  std::vector<Mask> edges;
  for (const auto& [idx, c] : top.terms()) edges.push_back(idx);
  EXPECT_GE(2 * greedy_matching(edges).size(), exact);
}

TEST(FallbackRank, ExamplesAndCertificate) {
  MultilinearPolynomial f = poly(5, {{{0, 1}, 10}, {{2, 3}, 10}, {{0, 1, 4}, 1}});
  FallbackCertificate c = fallback_rank(f, 3);
  EXPECT_EQ(c.m_d, 1);
  EXPECT_EQ(c.r, 2u);
  EXPECT_EQ(c.matching.size(), 2u);

  // Homogeneous of degree d: H′ is empty.
  EXPECT_EQ(fallback_rank(poly(4, {{{0, 1, 2}, 3}}), 3).r, 0u);
  // m_d = 0: every nonzero (d−1)-coefficient qualifies.
  FallbackCertificate z = fallback_rank(poly(6, {{{0, 1}, 1}, {{2, 3}, -1}, {{4, 5}, mpq_class(1, 100)}}), 3);
  EXPECT_EQ(z.m_d, 0);
  EXPECT_EQ(z.r, 3u);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    MultilinearPolynomial g = random_polynomial(12, 3, 30, 20, seed);
    FallbackCertificate cert = fallback_rank(g, 3);
    EXPECT_EQ(cert.matching.size(), cert.r);
    EXPECT_TRUE(is_matching(cert.matching));
    for (Mask s : cert.matching) {
      EXPECT_EQ(popcount(s), 2);
      EXPECT_GE(abs(g.coefficient(s)), cert.m_d * static_cast<unsigned long>(cert.r));
      EXPECT_NE(g.coefficient(s), 0);
    }
  }
}

TEST(Mnv, ExactValuesAndDeterminism) {
  MnvReport dict = mnv_rank_report(poly(1, {{{0}, 1}}), 20000, 3);
  EXPECT_EQ(dict.rank, 1u);
  EXPECT_NEAR(dict.max_point_prob, 0.5, 4 * std::sqrt(0.25 / 20000));

  // Σ x_{2i−1}x_{2i}, m = 20: compare with the full 2^20 enumeration.
  MultilinearPolynomial f(20);
  for (int i = 0; i < 10; ++i) f.add(bit(2 * i) | bit(2 * i + 1), 1);
  std::map<std::int64_t, std::uint64_t> freq;
  for (std::uint64_t neg = 0; neg < (1u << 20); ++neg) {
    std::int64_t v = 0;
    for (int i = 0; i < 10; ++i) v += (((neg >> (2 * i)) ^ (neg >> (2 * i + 1))) & 1) ? -1 : 1;
    ++freq[v];
  }
  std::uint64_t best = 0;
  for (auto [v, c] : freq) best = std::max(best, c);
  const double exact = static_cast<double>(best) / (1u << 20);
  const std::uint64_t trials = 100000;
  MnvReport rep = mnv_rank_report(f, trials, 9, 1);
  EXPECT_EQ(rep.rank, 10u);
  EXPECT_TRUE(rep.rank_exact);
  EXPECT_NEAR(rep.max_point_prob, exact, 4 * std::sqrt(exact * (1 - exact) / trials));
  EXPECT_DOUBLE_EQ(rep.scaled, std::sqrt(10.0) * rep.max_point_prob);
  EXPECT_EQ(mnv_rank_report(f, trials, 9, 4).max_point_prob, rep.max_point_prob);
}

TEST(AverageSensitivity, Examples) {
  EXPECT_EQ(average_sensitivity(poly(1, {{{0}, 1}}), 1), 1);
  EXPECT_EQ(average_sensitivity(poly(3, {{{0}, 1}, {{1}, 1}, {{2}, 1}}), 3), mpq_class(3, 2));
  EXPECT_EQ(average_sensitivity(poly(2, {{{0, 1}, 1}}), 2), 2);
  // Ties count as 0: the zero polynomial is constant.
  EXPECT_EQ(average_sensitivity(MultilinearPolynomial(4), 4), 0);
  EXPECT_THROW(average_sensitivity(MultilinearPolynomial(2), 25), BudgetExceeded);
}

TEST(AverageSensitivity, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int m = 6;
    MultilinearPolynomial p = random_polynomial(m, 3, 8, 4, seed);
    std::uint64_t flips = 0;
    for (Mask x = 0; x < (Mask{1} << m); ++x)
      for (int i = 0; i < m; ++i) flips += (p.evaluate_signs(x) > 0) != (p.evaluate_signs(x ^ bit(i)) > 0);
    mpq_class expect(mpz_class(static_cast<unsigned long>(flips)), mpz_class(1) << m);
    expect.canonicalize();
    EXPECT_EQ(average_sensitivity(p, m), expect);
  }
}
