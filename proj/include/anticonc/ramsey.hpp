#pragma once

#include <atomic>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "core/bits.hpp"
#include "core/budget.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/random.hpp"
#include "hypergraph.hpp"

namespace anticonc {

enum class Color : std::uint8_t { uncolored = 0, red = 1, blue = 2 };

inline char color_token(Color c) { return c == Color::red ? 'R' : c == Color::blue ? 'B' : 'U'; }

/// A partial red/blue colouring of the r-subsets of {0, ..., n-1}, stored by
/// colex rank. Every r-set starts uncoloured.
class TwoColoring {
 public:
  TwoColoring() = default;
  TwoColoring(int r, int n) : r_(r), n_(n), binom_(n) {
    if (r < 1 || n < 0 || n > kMaxVertices) throw PreconditionError("colouring needs r >= 1 and 0 <= n <= 128");
    mpz_class total = binomial(n, r);
    require_budget(total, enumeration_budget(), "TwoColoring");
    colors_.assign(static_cast<std::size_t>(total.get_ui()), Color::uncolored);
  }

  int uniformity() const { return r_; }
  int order() const { return n_; }
  std::size_t size() const { return colors_.size(); }

  Color color(Mask s) const { return colors_[colex_rank(s, binom_)]; }
  void set(Mask s, Color c) { colors_[colex_rank(s, binom_)] = c; }
  Color color_at_rank(std::size_t rank) const { return colors_[rank]; }

  std::size_t count(Color c) const {
    std::size_t k = 0;
    for (Color x : colors_) k += x == c;
    return k;
  }

  template <class F>
  void for_each_set(F&& f) const {
    for_each_k_subset(n_, r_, [&](Mask s) { f(s, color(s)); });
  }

  friend bool operator==(const TwoColoring& a, const TwoColoring& b) {
    return a.r_ == b.r_ && a.n_ == b.n_ && a.colors_ == b.colors_;
  }

 private:
  int r_ = 0;
  int n_ = 0;
  BinomialTable binom_{0};
  std::vector<Color> colors_;
};

/// Edges of `g` red, non-edges blue.
inline TwoColoring coloring_from_hypergraph(const Hypergraph& g) {
  TwoColoring c(g.uniformity(), g.order());
  for_each_k_subset(g.order(), g.uniformity(), [&](Mask s) { c.set(s, Color::blue); });
  for (Mask e : g.edges()) c.set(e, Color::red);
  return c;
}

/// Each r-set red with probability p_red, otherwise blue.
inline TwoColoring random_coloring(int r, int n, double p_red, std::uint64_t seed) {
  TwoColoring c(r, n);
  Rng rng(seed);
  for_each_k_subset(n, r, [&](Mask s) { c.set(s, rng.bernoulli(p_red) ? Color::red : Color::blue); });
  return c;
}

// Text format: "r n" header, then one line per coloured r-set with r 1-based
// vertices and a token in {R, B, U}. Unlisted sets are uncoloured.

inline TwoColoring parse_coloring(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto [r, n] = detail::parse_header(in, line, line_no);
  TwoColoring c(r, n);
  while (detail::next_content_line(in, line, line_no)) {
    std::istringstream ls(line);
    Mask e = detail::parse_edge_tokens(ls, r, n, line_no);
    std::string tok, extra;
    if (!(ls >> tok)) throw ParseError(line_no, "missing colour token");
    if (ls >> extra) throw ParseError(line_no, "trailing tokens after colour");
    if (tok == "R") c.set(e, Color::red);
    else if (tok == "B") c.set(e, Color::blue);
    else if (tok == "U") c.set(e, Color::uncolored);
    else throw ParseError(line_no, "colour token must be R, B or U");
  }
  return c;
}

inline TwoColoring parse_coloring(const std::string& text) {
  std::istringstream in(text);
  return parse_coloring(in);
}

/// Lists red and blue sets in colex order; uncoloured sets are omitted.
inline void write_coloring(std::ostream& out, const TwoColoring& c) {
  out << c.uniformity() << ' ' << c.order() << '\n';
  c.for_each_set([&](Mask s, Color col) {
    if (col == Color::uncolored) return;
    for_each_bit(s, [&](int v) { out << v + 1 << ' '; });
    out << color_token(col) << '\n';
  });
}

inline std::string format_coloring(const TwoColoring& c) {
  std::ostringstream out;
  write_coloring(out, c);
  return out.str();
}

/// (ε/3)^{4^r}, exact.
inline mpq_class alpha_r(const mpq_class& eps, int r) {
  if (r < 1 || r > 6) throw PreconditionError("alpha_r needs 1 <= r <= 6");
  mpq_class base = eps / 3;
  base.canonicalize();
  mpz_class num, den;
  const unsigned long e = 1ul << (2 * r);
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

/// (r-1)-sets lying in at least α·n red and at least α·n blue r-sets.
inline std::vector<Mask> mixed_degree_sets(const TwoColoring& c, const mpq_class& alpha) {
  const int r = c.uniformity(), n = c.order();
  if (r < 1) return {};
  require_budget(binomial(n, r - 1), enumeration_budget(), "mixed_degree_sets");
  const mpq_class threshold = alpha * n;
  std::vector<Mask> out;
  for_each_k_subset(n, r - 1, [&](Mask s) {
    long red = 0, blue = 0;
    for (int v = 0; v < n; ++v) {
      if ((s >> v) & 1) continue;
      Color col = c.color(s | bit(v));
      red += col == Color::red;
      blue += col == Color::blue;
    }
    if (mpq_class(red) >= threshold && mpq_class(blue) >= threshold) out.push_back(s);
  });
  return out;
}

struct BipartitePattern {
  std::vector<Mask> parts;  // V_1, ..., V_{r-1}
  Mask red = 0;             // R
  Mask blue = 0;            // B
};

namespace detail {

/// Calls visit(T) for every transversal T (one vertex from each part).
template <class F>
bool for_each_transversal(const std::vector<Mask>& parts, std::size_t i, Mask acc, F&& visit) {
  if (i == parts.size()) return visit(acc);
  bool keep = true;
  for_each_bit(parts[i], [&](int v) {
    if (keep) keep = for_each_transversal(parts, i + 1, acc | bit(v), visit);
  });
  return keep;
}

/// Vertices v outside `used` with every transversal + v coloured `col`.
inline Mask common_completions(const TwoColoring& c, const std::vector<Mask>& parts, Mask used, Color col) {
  Mask out = 0;
  for (int v = 0; v < c.order(); ++v) {
    if ((used >> v) & 1) continue;
    bool all = for_each_transversal(parts, 0, 0, [&](Mask t) { return c.color(t | bit(v)) == col; });
    if (all) out |= bit(v);
  }
  return out;
}

inline Mask lowest_bits(Mask m, int q) {
  Mask out = 0;
  for (int i = 0; i < q; ++i) {
    Mask low = m & (~m + 1);
    out |= low;
    m &= m - 1;
  }
  return out;
}

}  // namespace detail

/// Checks conditions (i) and (ii) directly against the colouring.
inline bool verify_bipartite_pattern(const TwoColoring& c, const BipartitePattern& p, int q) {
  if (static_cast<int>(p.parts.size()) != c.uniformity() - 1) return false;
  Mask used = 0;
  std::vector<Mask> all = p.parts;
  all.push_back(p.red);
  all.push_back(p.blue);
  for (Mask s : all) {
    if (popcount(s) != q || (s & used) != 0) return false;
    used |= s;
  }
  bool ok = true;
  detail::for_each_transversal(p.parts, 0, 0, [&](Mask t) {
    for_each_bit(p.red, [&](int v) { ok = ok && c.color(t | bit(v)) == Color::red; });
    for_each_bit(p.blue, [&](int v) { ok = ok && c.color(t | bit(v)) == Color::blue; });
    return ok;
  });
  return ok;
}

/// Disjoint q-sets V_1, ..., V_{r-1}, R, B with every transversal of the V_i
/// red when completed by R and blue when completed by B. Scans V_1 < ... <
/// V_{r-1} by least element; the first hit in that order is returned.
inline std::optional<BipartitePattern> find_bipartite_pattern(const TwoColoring& c, int q) {
  const int r = c.uniformity(), n = c.order();
  if (r < 2 || r > 3) throw PreconditionError("find_bipartite_pattern needs r in {2, 3}");
  if (q < 1) throw PreconditionError("find_bipartite_pattern needs q >= 1");
  if ((r + 1) * q > n) return std::nullopt;
  require_budget(binomial(n, q) * binomial(n, q), enumeration_budget(), "find_bipartite_pattern");
  std::optional<BipartitePattern> found;
  auto try_parts = [&](const std::vector<Mask>& parts, Mask used) {
    Mask red = detail::common_completions(c, parts, used, Color::red);
    if (popcount(red) < q) return false;
    Mask blue = detail::common_completions(c, parts, used, Color::blue);
    if (popcount(blue) < q) return false;
    found = BipartitePattern{parts, detail::lowest_bits(red, q), detail::lowest_bits(blue, q)};
    return true;
  };
  bool done = false;
  for_each_k_subset(n, q, [&](Mask v1) {
    if (done) return;
    if (r == 2) {
      done = try_parts({v1}, v1);
      return;
    }
    for_each_k_subset(n, q, [&](Mask v2) {
      if (done || (v1 & v2) != 0 || lowest_bit(v2) < lowest_bit(v1)) return;
      done = try_parts({v1, v2}, v1 | v2);
    });
  });
  if (found && !verify_bipartite_pattern(c, *found, q))
    throw std::logic_error("find_bipartite_pattern: witness failed verification");
  return found;
}

struct PatternWitness {
  std::vector<Mask> parts;  // V_1, ..., V_r
};

namespace detail {

/// Colour shared by every r-set {v_1, ..., v_r} with v_i ∈ parts[f(i)];
/// nullopt when two such sets differ or one is uncoloured. Vacuous classes
/// report Color::uncolored with `empty` set.
struct ClassColor {
  bool uniform = true;
  bool empty = true;
  Color color = Color::uncolored;
};

inline ClassColor class_color(const TwoColoring& c, const std::vector<Mask>& parts, const std::vector<int>& f) {
  ClassColor out;
  const int r = c.uniformity();
  auto rec = [&](auto&& self, int i, Mask acc) -> void {
    if (!out.uniform) return;
    if (i == r) {
      Color col = c.color(acc);
      if (col == Color::uncolored) out.uniform = false;
      else if (out.empty) {
        out.empty = false;
        out.color = col;
      } else if (col != out.color) {
        out.uniform = false;
      }
      return;
    }
    for_each_bit(parts[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])] & ~acc,
                 [&](int v) { self(self, i + 1, acc | bit(v)); });
  };
  rec(rec, 0, 0);
  return out;
}

/// Calls visit(f) for each f: [r] -> [m] (as a vector), stopping on false.
template <class F>
bool for_each_function(int r, int m, F&& visit) {
  std::vector<int> f(static_cast<std::size_t>(r), 0);
  for (;;) {
    if (!visit(f)) return false;
    int i = r - 1;
    while (i >= 0 && f[static_cast<std::size_t>(i)] == m - 1) f[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) return true;
    ++f[static_cast<std::size_t>(i)];
  }
}

/// f-good for every f whose image lies in the first m parts.
inline bool f_good_prefix(const TwoColoring& c, const std::vector<Mask>& parts, int m) {
  return for_each_function(c.uniformity(), m, [&](const std::vector<int>& f) {
    return class_color(c, parts, f).uniform;
  });
}

}  // namespace detail

/// V_1, ..., V_r pairwise disjoint of equal size, f-good for all r^r maps f,
/// and the r-sets inside their union use both colours.
inline bool verify_pattern(const TwoColoring& c, const PatternWitness& w) {
  const int r = c.uniformity();
  if (static_cast<int>(w.parts.size()) != r || r == 0) return false;
  Mask used = 0;
  for (Mask s : w.parts) {
    if (popcount(s) != popcount(w.parts[0]) || (s & used) != 0) return false;
    used |= s;
  }
  if (!detail::f_good_prefix(c, w.parts, r)) return false;
  bool red = false, blue = false;
  const std::vector<int> elems = bits_of(used);
  for_each_k_subset(static_cast<int>(elems.size()), r, [&](Mask local) {
    Mask s = 0;
    for_each_bit(local, [&](int i) { s |= bit(elems[static_cast<std::size_t>(i)]); });
    Color col = c.color(s);
    red = red || col == Color::red;
    blue = blue || col == Color::blue;
  });
  return red && blue;
}

/// Backtracking search for disjoint t-sets V_1, V_2, V_3 (least elements
/// increasing) that are f-good for all 27 maps and not monochromatic. Outer
/// branches over V_1 run in parallel; the witness with the smallest V_1 in
/// colex order is returned, so the result does not depend on `threads`.
inline std::optional<PatternWitness> find_unavoidable_pattern(const TwoColoring& c, int t, unsigned threads = 0) {
  if (c.uniformity() != 3) throw PreconditionError("find_unavoidable_pattern needs r = 3");
  if (t < 1) throw PreconditionError("find_unavoidable_pattern needs t >= 1");
  const int n = c.order();
  if (3 * t > n) return std::nullopt;
  mpz_class firsts = binomial(n, t);
  require_budget(firsts * firsts * firsts, enumeration_budget(), "find_unavoidable_pattern");
  std::vector<Mask> v1s;
  for_each_k_subset(n, t, [&](Mask s) { v1s.push_back(s); });
  std::vector<std::optional<PatternWitness>> found(v1s.size());
  std::atomic<std::size_t> best{v1s.size()};
  parallel_blocks(v1s.size(), threads, [&](std::size_t b) {
    if (b > best.load()) return;
    std::vector<Mask> parts{v1s[b]};
    if (!detail::f_good_prefix(c, parts, 1)) return;
    bool done = false;
    for_each_k_subset(n, t, [&](Mask v2) {
      if (done || (v2 & parts[0]) != 0 || lowest_bit(v2) < lowest_bit(parts[0])) return;
      std::vector<Mask> two{parts[0], v2};
      if (!detail::f_good_prefix(c, two, 2)) return;
      for_each_k_subset(n, t, [&](Mask v3) {
        if (done || (v3 & (two[0] | two[1])) != 0 || lowest_bit(v3) < lowest_bit(v2)) return;
        PatternWitness w{{two[0], two[1], v3}};
        if (verify_pattern(c, w)) {
          found[b] = w;
          done = true;
        }
      });
    });
    if (done) {
      std::size_t cur = best.load();
      while (b < cur && !best.compare_exchange_weak(cur, b)) {}
    }
  });
  for (auto& w : found)
    if (w) return w;
  return std::nullopt;
}

/// True when every r-subset of `s` has colour `col`.
inline bool is_monochromatic(const TwoColoring& c, Mask s, Color col) {
  bool ok = true;
  for_each_k_subset(c.order(), c.uniformity(), [&](Mask e) {
    if (ok && is_subset(e, s)) ok = c.color(e) == col;
  });
  return ok;
}

/// A `size`-set whose r-subsets share one colour (red tried first), by
/// backtracking in label order. Gives up after `node_budget` nodes.
inline std::optional<VertexSet> monochromatic_clique(const TwoColoring& c, int size,
                                                     std::uint64_t node_budget = 50'000'000) {
  const int r = c.uniformity(), n = c.order();
  if (size < 0) throw PreconditionError("clique size must be non-negative");
  if (size > n) return std::nullopt;
  if (size < r) return VertexSet(low_mask(size));
  std::uint64_t nodes = 0;
  for (Color col : {Color::red, Color::blue}) {
    std::optional<VertexSet> out;
    // The new vertex v closes r-sets with every (r-1)-subset of `chosen`.
    auto extends = [&](Mask chosen, int v) {
      bool ok = true;
      for_each_k_subset(n, r - 1, [&](Mask s) {
        if (ok && is_subset(s, chosen)) ok = c.color(s | bit(v)) == col;
      });
      return ok;
    };
    auto rec = [&](auto&& self, int next, Mask chosen) -> bool {
      if (popcount(chosen) == size) {
        out = VertexSet(chosen);
        return true;
      }
      if (++nodes > node_budget) return false;
      for (int v = next; v <= n - (size - popcount(chosen)); ++v)
        if (extends(chosen, v) && self(self, v + 1, chosen | bit(v))) return true;
      return false;
    };
    if (rec(rec, 0, 0)) {
      if (!is_monochromatic(c, out->bits(), col)) throw std::logic_error("monochromatic_clique: witness failed verification");
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace anticonc
