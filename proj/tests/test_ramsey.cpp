#include <gtest/gtest.h>

#include "anticonc/ramsey.hpp"
#include "oracles.hpp"

using namespace anticonc;

namespace {

TwoColoring monochromatic(int r, int n, Color col) {
  TwoColoring c(r, n);
  for_each_k_subset(n, r, [&](Mask s) { c.set(s, col); });
  return c;
}

// Cross triples red, triples inside A or inside B blue.
TwoColoring gabm_coloring(int na, int nb) {
  VertexSet a(low_mask(na)), b(low_mask(na + nb) & ~low_mask(na));
  return coloring_from_hypergraph(make_gabm(a, b, {}));
}

Color color_of(const TwoColoring& c, std::vector<int> vs) {
  Mask m = 0;
  for (int v : vs) m |= bit(v);
  return c.color(m);
}

// Pattern check written against label vectors: for every f: [3] -> [3], all
// triples (v1, v2, v3) of distinct vertices with v_i in V_{f(i)} share one
// colour, and the triples inside the union use both colours.
bool pattern_oracle(const TwoColoring& c, const std::vector<std::vector<int>>& parts) {
  for (int f = 0; f < 27; ++f) {
    const int f0 = f % 3, f1 = (f / 3) % 3, f2 = f / 9;
    Color seen = Color::uncolored;
    bool any = false;
    for (int x : parts[static_cast<std::size_t>(f0)])
      for (int y : parts[static_cast<std::size_t>(f1)])
        for (int z : parts[static_cast<std::size_t>(f2)]) {
          if (x == y || y == z || x == z) continue;
          Color col = color_of(c, {x, y, z});
          if (col == Color::uncolored) return false;
          if (any && col != seen) return false;
          seen = col;
          any = true;
        }
  }
  std::vector<int> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  bool red = false, blue = false;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      for (std::size_t k = j + 1; k < all.size(); ++k) {
        Color col = color_of(c, {all[i], all[j], all[k]});
        red = red || col == Color::red;
        blue = blue || col == Color::blue;
      }
  return red && blue;
}

std::vector<std::vector<int>> as_lists(const std::vector<Mask>& parts) {
  std::vector<std::vector<int>> out;
  for (Mask p : parts) out.push_back(bits_of(p));
  return out;
}

}  // namespace

TEST(TwoColoring, StorageAndCounts) {
  TwoColoring c(3, 6);
  EXPECT_EQ(c.size(), 20u);
  EXPECT_EQ(c.count(Color::uncolored), 20u);
  c.set(bit(0) | bit(1) | bit(5), Color::red);
  c.set(bit(2) | bit(3) | bit(4), Color::blue);
  EXPECT_EQ(c.color(bit(0) | bit(1) | bit(5)), Color::red);
  EXPECT_EQ(c.count(Color::red), 1u);
  EXPECT_EQ(c.count(Color::blue), 1u);
  TwoColoring from = coloring_from_hypergraph(make_complete_bipartite(2, 2, 2));
  EXPECT_EQ(from.count(Color::red), 4u);
  EXPECT_EQ(from.count(Color::blue), 2u);
  TwoColoring r1 = random_coloring(3, 10, 0.3, 5), r2 = random_coloring(3, 10, 0.3, 5);
  EXPECT_EQ(r1, r2);
  EXPECT_EQ(r1.count(Color::uncolored), 0u);
}

TEST(TwoColoring, TextRoundTripAndErrors) {
  TwoColoring c = random_coloring(3, 7, 0.5, 2);
  c.set(bit(0) | bit(1) | bit(2), Color::uncolored);
  const std::string text = format_coloring(c);
  EXPECT_EQ(parse_coloring(text), c);
  EXPECT_EQ(text.substr(0, 4), "3 7\n");
  TwoColoring p = parse_coloring("2 3\n1 2 R\n# c\n2 3 B\n1 3 U\n");
  EXPECT_EQ(p.color(bit(0) | bit(1)), Color::red);
  EXPECT_EQ(p.color(bit(1) | bit(2)), Color::blue);
  EXPECT_EQ(p.color(bit(0) | bit(2)), Color::uncolored);
  auto line_of = [](const std::string& t) {
    try {
      parse_coloring(t);
    } catch (const ParseError& e) {
      return static_cast<long>(e.line());
    }
    return -1L;
  };
  EXPECT_EQ(line_of("2 3\n1 2\n"), 2);
  EXPECT_EQ(line_of("2 3\n1 2 G\n"), 2);
  EXPECT_EQ(line_of("2 3\n1 2 R\n1 4 B\n"), 3);
  EXPECT_EQ(line_of("2 3\n1 2 R x\n"), 2);
}

TEST(MixedDegreeSets, Examples) {
  // Red perfect matching {12, 34}: each vertex has one red and two blue pairs.
  TwoColoring split(2, 4);
  for_each_k_subset(4, 2, [&](Mask s) { split.set(s, Color::blue); });
  split.set(bit(0) | bit(1), Color::red);
  split.set(bit(2) | bit(3), Color::red);
  EXPECT_EQ(mixed_degree_sets(split, mpq_class(1, 4)).size(), 4u);
  EXPECT_TRUE(mixed_degree_sets(monochromatic(3, 8, Color::red), mpq_class(1, 100)).empty());
  EXPECT_EQ(alpha_r(mpq_class(3), 2), 1);
  EXPECT_EQ(alpha_r(mpq_class(3, 5), 1), mpq_class(1, 625));
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 15, 64);
  EXPECT_EQ(alpha_r(mpq_class(1, 5), 3), mpq_class(mpz_class(1), den));
}

TEST(MixedDegreeSets, MatchesDirectCount) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    TwoColoring c = random_coloring(3, 10, 0.5, seed);
    const mpq_class alpha(3, 10);
    std::set<std::uint64_t> expect;
    for (int x = 0; x < 10; ++x)
      for (int y = x + 1; y < 10; ++y) {
        int red = 0, blue = 0;
        for (int z = 0; z < 10; ++z) {
          if (z == x || z == y) continue;
          Color col = color_of(c, {x, y, z});
          red += col == Color::red;
          blue += col == Color::blue;
        }
        if (red >= 3 && blue >= 3) expect.insert((1ull << x) | (1ull << y));
      }
    std::set<std::uint64_t> got;
    for (Mask s : mixed_degree_sets(c, alpha)) got.insert(static_cast<std::uint64_t>(s));
    EXPECT_EQ(got, expect);
  }
}

TEST(BipartitePattern, GabmColoringAndMonochromatic) {
  TwoColoring c = gabm_coloring(6, 6);
  for (int q : {1, 2}) {
    auto p = find_bipartite_pattern(c, q);
    ASSERT_TRUE(p) << q;
    EXPECT_TRUE(verify_bipartite_pattern(c, *p, q));
    // Independent recheck over transversals.
    for (int x : bits_of(p->parts[0]))
      for (int y : bits_of(p->parts[1])) {
        for (int v : bits_of(p->red)) EXPECT_EQ(color_of(c, {x, y, v}), Color::red);
        for (int v : bits_of(p->blue)) EXPECT_EQ(color_of(c, {x, y, v}), Color::blue);
      }
  }
  EXPECT_FALSE(find_bipartite_pattern(monochromatic(3, 10, Color::red), 1));
  EXPECT_FALSE(find_bipartite_pattern(monochromatic(2, 10, Color::blue), 2));
  EXPECT_THROW(find_bipartite_pattern(monochromatic(4, 8, Color::red), 1), PreconditionError);
}

TEST(BipartitePattern, GraphCaseAndVerifierRejections) {
  TwoColoring c = coloring_from_hypergraph(make_complete_bipartite(4, 4, 2));
  auto p = find_bipartite_pattern(c, 2);
  ASSERT_TRUE(p);
  for (int x : bits_of(p->parts[0])) {
    for (int v : bits_of(p->red)) EXPECT_EQ(color_of(c, {x, v}), Color::red);
    for (int v : bits_of(p->blue)) EXPECT_EQ(color_of(c, {x, v}), Color::blue);
  }
  BipartitePattern broken = *p;
  std::swap(broken.red, broken.blue);
  EXPECT_FALSE(verify_bipartite_pattern(c, broken, 2));
  BipartitePattern overlap = *p;
  overlap.blue = overlap.red;
  EXPECT_FALSE(verify_bipartite_pattern(c, overlap, 2));
}

TEST(UnavoidablePattern, GabmColoringWithPairs) {
  TwoColoring c = gabm_coloring(6, 6);
  auto w = find_unavoidable_pattern(c, 2, 1);
  ASSERT_TRUE(w);
  EXPECT_TRUE(verify_pattern(c, *w));
  EXPECT_TRUE(pattern_oracle(c, as_lists(w->parts)));
  auto w4 = find_unavoidable_pattern(c, 2, 4);
  ASSERT_TRUE(w4);
  EXPECT_EQ(w4->parts, w->parts);
}

TEST(UnavoidablePattern, SingletonsNeverWitness) {
  // With t = 1 the union holds one triple, so it is always monochromatic.
  EXPECT_FALSE(find_unavoidable_pattern(gabm_coloring(5, 5), 1));
  EXPECT_FALSE(find_unavoidable_pattern(random_coloring(3, 9, 0.5, 1), 1));
}

TEST(UnavoidablePattern, MonochromaticAndRandom) {
  EXPECT_FALSE(find_unavoidable_pattern(monochromatic(3, 9, Color::blue), 2));
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    TwoColoring c = random_coloring(3, 14, 0.5, seed);
    auto w = find_unavoidable_pattern(c, 2);
    if (!w) continue;
    EXPECT_TRUE(verify_pattern(c, *w));
    EXPECT_TRUE(pattern_oracle(c, as_lists(w->parts)));
  }
}

TEST(UnavoidablePattern, VerifierRejectsBadWitnesses) {
  TwoColoring c = gabm_coloring(6, 6);
  EXPECT_FALSE(verify_pattern(c, PatternWitness{{bit(0) | bit(1), bit(1) | bit(2), bit(6) | bit(7)}}));
  EXPECT_FALSE(verify_pattern(c, PatternWitness{{bit(0) | bit(1), bit(2) | bit(3), bit(4) | bit(5)}}));
  EXPECT_FALSE(verify_pattern(c, PatternWitness{{bit(0) | bit(6), bit(1) | bit(7), bit(2) | bit(8)}}));
}

TEST(MonochromaticClique, RamseyThreeThreeExhaustive) {
  // Every 2-colouring of K_6 has a monochromatic triangle.
  for (std::uint32_t code = 0; code < (1u << 15); ++code) {
    TwoColoring c(2, 6);
    int i = 0;
    for_each_k_subset(6, 2, [&](Mask s) { c.set(s, ((code >> i++) & 1) ? Color::red : Color::blue); });
    auto k = monochromatic_clique(c, 3);
    ASSERT_TRUE(k) << code;
    const std::vector<int> v = k->elements();
    ASSERT_EQ(v.size(), 3u);
    Color a = color_of(c, {v[0], v[1]});
    EXPECT_EQ(color_of(c, {v[0], v[2]}), a);
    EXPECT_EQ(color_of(c, {v[1], v[2]}), a);
  }
}

TEST(MonochromaticClique, PentagonHasNone) {
  TwoColoring c(2, 5);
  for_each_k_subset(5, 2, [&](Mask s) {
    const std::vector<int> v = bits_of(s);
    const int d = v[1] - v[0];
    c.set(s, d == 1 || d == 4 ? Color::red : Color::blue);
  });
  EXPECT_FALSE(monochromatic_clique(c, 3));
  auto all = monochromatic_clique(monochromatic(3, 9, Color::red), 6);
  ASSERT_TRUE(all);
  EXPECT_TRUE(is_monochromatic(monochromatic(3, 9, Color::red), all->bits(), Color::red));
  EXPECT_EQ(monochromatic_clique(c, 1)->size(), 1);
}
