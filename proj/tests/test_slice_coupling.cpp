#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "anticonc/slice_coupling.hpp"
#include "oracles.hpp"

using namespace anticonc;

namespace {

std::vector<int> gamma_of(int h, std::uint64_t neg) {
  std::vector<int> g(static_cast<std::size_t>(h));
  for (int i = 0; i < h; ++i) g[static_cast<std::size_t>(i)] = ((neg >> i) & 1) ? -1 : 1;
  return g;
}

}  // namespace

TEST(Coupling, SmallExampleFollowsConvention) {
  // σ = identity on 4 vertices, γ = (+1, −1): ξ picks σ(0) = 0 and σ(1 + 2) = 3.
  CouplingSample c = make_coupling({0, 1, 2, 3}, {1, -1});
  EXPECT_EQ(c.xi.ones, bit(0) | bit(3));
  EXPECT_EQ(c.xi.weight(), 2);
  EXPECT_THROW(make_coupling({0, 1, 1, 3}, {1, 1}), PreconditionError);
  EXPECT_THROW(make_coupling({0, 1, 2}, {1}), PreconditionError);
  EXPECT_THROW(make_coupling({0, 1, 2, 3}, {1, 0}), PreconditionError);
  EXPECT_THROW(make_coupling({0, 1, 2, 3}, {1}), PreconditionError);
}

TEST(Coupling, EveryPairGivesTheUniformSlice) {
  // Over all n!·2^{n/2} (σ, γ), each half-weight vector appears equally often.
  for (int n : {2, 4, 6}) {
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::map<std::uint64_t, std::uint64_t> hist;
    do {
      for (std::uint64_t neg = 0; neg < (std::uint64_t{1} << (n / 2)); ++neg) {
        Mask xi = make_coupling(sigma, gamma_of(n / 2, neg)).xi.ones;
        ++hist[static_cast<std::uint64_t>(xi)];
      }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    ASSERT_EQ(mpz_class(static_cast<unsigned long>(hist.size())), binomial(n, n / 2));
    const std::uint64_t first = hist.begin()->second;
    for (auto [xi, count] : hist) {
      EXPECT_EQ(oracle::pc(xi), n / 2);
      EXPECT_EQ(count, first);
    }
  }
}

TEST(Coupling, SampledSlicesHaveRightWeight) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(sample_slice(30, 11, seed).weight(), 11);
    CouplingSample c = sample_coupled(20, seed);
    EXPECT_EQ(c.xi.weight(), 10);
    EXPECT_EQ(c.xi.ones, make_coupling(c.sigma, c.gamma).xi.ones);
  }
  EXPECT_THROW(sample_coupled(5, 1), PreconditionError);
  EXPECT_THROW(sample_slice(4, 5, 1), PreconditionError);
}

TEST(Coupling, EvaluateMatchesLabelOracle) {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 * (2 + static_cast<int>(rng.below(4)));
    const int r = 2 + static_cast<int>(rng.below(2));
    Hypergraph g = make_random_uniform(n, r, 0.5, rng.next());
    std::vector<int> sigma = rng.permutation(n);
    std::vector<int> gamma = gamma_of(n / 2, rng.next());
    EXPECT_EQ(static_cast<long>(evaluate_coupled(g, sigma, gamma)), oracle::coupled_value(g, sigma, gamma));
  }
}

TEST(CoupledPolynomial, MatchesDirectFourierSums) {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 * (1 + static_cast<int>(rng.below(4)));
    const int r = 2 + static_cast<int>(rng.below(2));
    if (r > n) continue;
    Hypergraph g = make_random_uniform(n, r, rng.uniform01(), rng.next());
    std::vector<int> sigma = rng.permutation(n);
    const int h = n / 2;
    auto expect = oracle::fourier(h, [&](const std::vector<int>& gamma) { return oracle::coupled_value(g, sigma, gamma); });
    MultilinearPolynomial p = coupled_polynomial(g, sigma);
    EXPECT_EQ(p.size(), expect.size());
    for (const auto& [idx, c] : expect) EXPECT_EQ(p.coefficient(static_cast<Mask>(idx)), c);
    for (std::uint64_t neg = 0; neg < (std::uint64_t{1} << h); ++neg)
      EXPECT_EQ(p.evaluate_signs(neg), oracle::coupled_value(g, sigma, gamma_of(h, neg)));
  }
}

TEST(ExtractCoefficients, TopTwoLayersMatchInterpolation) {
  Rng rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 * (2 + static_cast<int>(rng.below(3)));
    const int r = 2 + static_cast<int>(rng.below(2));
    Hypergraph g = make_random_uniform(n, r, rng.uniform01(), rng.next());
    std::vector<int> sigma = rng.permutation(n);
    const int h = n / 2;
    auto full = oracle::fourier(h, [&](const std::vector<int>& gamma) { return oracle::coupled_value(g, sigma, gamma); });
    MultilinearPolynomial top = extract_coefficients(g, sigma);
    for (const auto& [idx, c] : top.terms()) EXPECT_GE(popcount(idx), r - 1);
    for (int q : {r, r - 1}) {
      if (q > h) continue;
      for_each_k_subset(h, q, [&](Mask s) {
        auto it = full.find(static_cast<std::uint64_t>(s));
        const mpq_class want = it == full.end() ? mpq_class(0) : it->second;
        EXPECT_EQ(top.coefficient(s), want);
      });
    }
    // Nothing of degree above r survives in the full expansion.
    for (const auto& [idx, c] : full) EXPECT_LE(oracle::pc(idx), r);
  }
}

TEST(ExtractCoefficients, ExamplesAndScaling) {
  // Single edge {0, 1} under the identity: X = (1 + γ1)(1 + γ2)/4.
  Hypergraph g(2, 4, {bit(0) | bit(1)});
  std::vector<int> id{0, 1, 2, 3};
  MultilinearPolynomial p = extract_coefficients(g, id);
  EXPECT_EQ(p.coefficient(bit(0) | bit(1)), mpq_class(1, 4));
  EXPECT_EQ(p.coefficient(bit(0)), mpq_class(1, 4));
  EXPECT_EQ(p.coefficient(bit(1)), mpq_class(1, 4));
  EXPECT_EQ(p.size(), 3u);
  EXPECT_EQ(unnormalized(p, 2).coefficient(bit(0) | bit(1)), 1);
  EXPECT_TRUE(extract_coefficients(Hypergraph(3, 6), std::vector<int>{0, 1, 2, 3, 4, 5}).is_zero());
  // Complementing G negates every coefficient of degree at least 1.
  Hypergraph c = complement(g);
  MultilinearPolynomial pc = extract_coefficients(c, id);
  EXPECT_EQ(pc + p, MultilinearPolynomial(2));
}

TEST(ExtractCoefficients, Preconditions) {
  Hypergraph g(2, 4, {bit(0) | bit(1)});
  EXPECT_THROW(extract_coefficients(g, std::vector<int>{0, 1}), PreconditionError);
  EXPECT_THROW(extract_coefficients(g, std::vector<int>{0, 1, 2, 2}), PreconditionError);
}

TEST(TailBound, Formula) {
  const std::vector<double> c{1.0, 2.0};
  EXPECT_DOUBLE_EQ(concentration_tail_bound(c, 4.0), std::exp(-16.0 / 40.0));
  EXPECT_EQ(concentration_tail_bound(c, 0.0), 1.0);
  EXPECT_EQ(concentration_tail_bound(std::vector<double>{}, 1.0), 0.0);
  EXPECT_THROW(concentration_tail_bound(c, -1.0), PreconditionError);
}
