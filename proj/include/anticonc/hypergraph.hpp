#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "core/bits.hpp"
#include "core/budget.hpp"
#include "core/errors.hpp"
#include "core/random.hpp"

namespace anticonc {

/// An r-uniform hypergraph on vertices {0, ..., n-1}, each edge an n-bit mask.
///
/// Immutable after construction. Lookup structures depend on r: adjacency
/// rows for graphs, pair links (bitmask of third vertices) for 3-graphs and a
/// hash set otherwise. Per-vertex stars are always available.
class Hypergraph {
 public:
  Hypergraph() = default;

  /// Empty r-graph on n vertices.
  Hypergraph(int r, int n) : Hypergraph(r, n, std::vector<Mask>{}) {}

  /// Throws PreconditionError on a wrong-size edge, an out-of-range vertex or
  /// a duplicate edge.
  Hypergraph(int r, int n, std::vector<Mask> edges) : r_(r), n_(n), edges_(std::move(edges)) {
    if (r < 1) throw PreconditionError("uniformity must be at least 1");
    if (n < 0 || n > kMaxVertices) throw PreconditionError("vertex count must lie in [0, 128]");
    const Mask outside = ~low_mask(n);
    for (Mask e : edges_) {
      if (popcount(e) != r) throw PreconditionError("edge does not have exactly r vertices");
      if ((e & outside) != 0) throw PreconditionError("edge vertex outside [1, n]");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw PreconditionError("duplicate edge");
    index();
  }

  int uniformity() const { return r_; }
  int order() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Mask>& edges() const { return edges_; }
  VertexSet vertices() const { return VertexSet::range(n_); }

  bool has_edge(Mask e) const {
    if (popcount(e) != r_) return false;
    if (r_ == 1) return std::binary_search(edges_.begin(), edges_.end(), e);
    if (r_ == 2) {
      int a = lowest_bit(e);
      int b = lowest_bit(e & (e - 1));
      return (adj_[static_cast<std::size_t>(a)] >> b) & 1;
    }
    if (r_ == 3) {
      int a = lowest_bit(e);
      Mask rest = e & (e - 1);
      int b = lowest_bit(rest);
      int c = lowest_bit(rest & (rest - 1));
      return (link_[pair_index(a, b)] >> c) & 1;
    }
    return lookup_.count(e) != 0;
  }

  /// Value of a_S: 1 if S is an edge.
  int a(Mask s) const { return has_edge(s) ? 1 : 0; }

  /// Edges containing vertex v.
  const std::vector<Mask>& star(int v) const { return stars_[static_cast<std::size_t>(v)]; }

  std::size_t vertex_degree(int v) const { return star(v).size(); }

  /// deg(S): number of edges containing S. deg(empty) = e(G).
  std::size_t degree(Mask s) const {
    int size = popcount(s);
    if (size == 0) return edges_.size();
    if (size > r_) return 0;
    if (size == r_) return static_cast<std::size_t>(a(s));
    if (r_ == 3 && size == 2) {
      int x = lowest_bit(s);
      int y = lowest_bit(s & (s - 1));
      return static_cast<std::size_t>(popcount(link_[pair_index(x, y)]));
    }
    if (size == 1) return vertex_degree(lowest_bit(s));
    std::size_t count = 0;
    for (Mask e : star(lowest_bit(s)))
      if (is_subset(s, e)) ++count;
    return count;
  }

  /// Neighbourhood row of a graph (r = 2).
  Mask neighbours(int v) const { return adj_[static_cast<std::size_t>(v)]; }

  /// For 3-graphs: mask of z with {x, y, z} an edge.
  Mask pair_link(int x, int y) const { return link_[pair_index(x, y)]; }

  /// Number of edges e with v in e and e inside `within` (v must be in `within`).
  std::size_t edges_at_within(int v, Mask within) const {
    if (r_ == 2) return static_cast<std::size_t>(popcount(adj_[static_cast<std::size_t>(v)] & within));
    if (r_ == 3 && popcount(within) < static_cast<int>(vertex_degree(v))) {
      std::size_t twice = 0;
      for_each_bit(within & ~bit(v), [&](int x) { twice += static_cast<std::size_t>(popcount(link_[pair_index(v, x)] & within)); });
      return twice / 2;
    }
    std::size_t count = 0;
    for (Mask e : star(v))
      if (is_subset(e, within)) ++count;
    return count;
  }

  /// e(G[X]).
  std::size_t edges_within(Mask within) const {
    if (r_ == 2) {
      std::size_t twice = 0;
      for_each_bit(within, [&](int v) { twice += static_cast<std::size_t>(popcount(adj_[static_cast<std::size_t>(v)] & within)); });
      return twice / 2;
    }
    std::size_t count = 0;
    for (Mask e : edges_)
      if (is_subset(e, within)) ++count;
    return count;
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.r_ == b.r_ && a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t pair_index(int x, int y) const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(y);
  }

  void index() {
    stars_.assign(static_cast<std::size_t>(n_), {});
    for (Mask e : edges_) for_each_bit(e, [&](int v) { stars_[static_cast<std::size_t>(v)].push_back(e); });
    if (r_ == 2) {
      adj_.assign(static_cast<std::size_t>(n_), 0);
      for (Mask e : edges_) {
        int a = lowest_bit(e), b = lowest_bit(e & (e - 1));
        adj_[static_cast<std::size_t>(a)] |= bit(b);
        adj_[static_cast<std::size_t>(b)] |= bit(a);
      }
    } else if (r_ == 3) {
      link_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
      for (Mask e : edges_) {
        int a = lowest_bit(e);
        Mask rest = e & (e - 1);
        int b = lowest_bit(rest);
        int c = lowest_bit(rest & (rest - 1));
        link_[pair_index(a, b)] |= bit(c);
        link_[pair_index(b, a)] |= bit(c);
        link_[pair_index(a, c)] |= bit(b);
        link_[pair_index(c, a)] |= bit(b);
        link_[pair_index(b, c)] |= bit(a);
        link_[pair_index(c, b)] |= bit(a);
      }
    } else if (r_ >= 4) {
      lookup_.insert(edges_.begin(), edges_.end());
    }
  }

  int r_ = 2;
  int n_ = 0;
  std::vector<Mask> edges_;
  std::vector<std::vector<Mask>> stars_;
  std::vector<Mask> adj_;
  std::vector<Mask> link_;
  std::unordered_set<Mask, MaskHash> lookup_;
};

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// G[A], relabelled 0..|A|-1 by increasing original label.
inline Hypergraph induced_subgraph(const Hypergraph& g, VertexSet a) {
  std::vector<int> keep = a.elements();
  std::vector<int> relabel(static_cast<std::size_t>(g.order()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) relabel[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
  std::vector<Mask> edges;
  for (Mask e : g.edges()) {
    if (!is_subset(e, a.bits())) continue;
    Mask out = 0;
    for_each_bit(e, [&](int v) { out |= bit(relabel[static_cast<std::size_t>(v)]); });
    edges.push_back(out);
  }
  return Hypergraph(g.uniformity(), static_cast<int>(keep.size()), std::move(edges));
}

inline Hypergraph complement(const Hypergraph& g) {
  require_budget(binomial(g.order(), g.uniformity()), enumeration_budget(), "complement");
  std::vector<Mask> edges;
  for_each_k_subset(g.order(), g.uniformity(), [&](Mask s) {
    if (!g.has_edge(s)) edges.push_back(s);
  });
  return Hypergraph(g.uniformity(), g.order(), std::move(edges));
}

inline Hypergraph make_complete(int n, int r) {
  std::vector<Mask> edges;
  for_each_k_subset(n, r, [&](Mask s) { edges.push_back(s); });
  return Hypergraph(r, n, std::move(edges));
}

/// Complete bipartite r-graph K^{(r)}_{a,b}: parts {0..a-1} and {a..a+b-1};
/// edges are the r-sets meeting both parts.
inline Hypergraph make_complete_bipartite(int a, int b, int r) {
  if (a < 0 || b < 0) throw PreconditionError("part sizes must be non-negative");
  if (r < 2) throw PreconditionError("complete bipartite hypergraph needs r >= 2");
  const Mask first = low_mask(a);
  const Mask second = low_mask(a + b) & ~first;
  std::vector<Mask> edges;
  for_each_k_subset(a + b, r, [&](Mask s) {
    if ((s & first) != 0 && (s & second) != 0) edges.push_back(s);
  });
  return Hypergraph(r, a + b, std::move(edges));
}

using VertexPair = std::pair<int, int>;

/// G_{A,B,M} on n vertices: triples meeting both A and B, except triples
/// containing a pair of M. Vertices outside A ∪ B are isolated.
inline Hypergraph make_gabm(int n, VertexSet a, VertexSet b, std::span<const VertexPair> m) {
  if (!a.disjoint(b)) throw PreconditionError("G_{A,B,M}: A and B must be disjoint");
  if (!(a | b).subset_of(VertexSet::range(n))) throw PreconditionError("G_{A,B,M}: vertex outside [1, n]");
  Mask used = 0;
  for (auto [x, y] : m) {
    if (!a.contains(x) || !b.contains(y)) throw PreconditionError("G_{A,B,M}: pair of M not in A x B");
    if ((used & (bit(x) | bit(y))) != 0) throw PreconditionError("G_{A,B,M}: pairs of M must be disjoint");
    used |= bit(x) | bit(y);
  }
  std::vector<Mask> forbidden;
  forbidden.reserve(m.size());
  for (auto [x, y] : m) forbidden.push_back(bit(x) | bit(y));
  std::vector<Mask> edges;
  const Mask support = (a | b).bits();
  for_each_k_subset(n, 3, [&](Mask s) {
    if (!is_subset(s, support) || (s & a.bits()) == 0 || (s & b.bits()) == 0) return;
    for (Mask p : forbidden)
      if (is_subset(p, s)) return;
    edges.push_back(s);
  });
  return Hypergraph(3, n, std::move(edges));
}

/// G_{A,B,M} on the vertex set A ∪ B = {0, ..., |A|+|B|-1}.
inline Hypergraph make_gabm(VertexSet a, VertexSet b, std::span<const VertexPair> m) {
  return make_gabm((a | b).size(), a, b, m);
}

/// Each r-set is an edge independently with probability p.
inline Hypergraph make_random_uniform(int n, int r, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw PreconditionError("edge probability must lie in [0, 1]");
  require_budget(binomial(n, r), enumeration_budget(), "make_random_uniform");
  Rng rng(seed);
  std::vector<Mask> edges;
  for_each_k_subset(n, r, [&](Mask s) {
    if (p >= 1.0 || (p > 0.0 && rng.bernoulli(p))) edges.push_back(s);
  });
  return Hypergraph(r, n, std::move(edges));
}

/// Exactly m distinct r-sets, uniformly at random.
inline Hypergraph make_random_fixed(int n, int r, std::uint64_t m, std::uint64_t seed) {
  mpz_class total = binomial(n, r);
  if (mpz_class(std::to_string(m)) > total) throw PreconditionError("edge count exceeds C(n, r)");
  Rng rng(seed);
  std::vector<Mask> edges;
  if (total <= mpz_class(1u << 22)) {
    std::vector<Mask> all;
    for_each_k_subset(n, r, [&](Mask s) { all.push_back(s); });
    for (std::uint64_t i = 0; i < m; ++i) {
      std::size_t j = i + rng.below(all.size() - i);
      std::swap(all[i], all[j]);
      edges.push_back(all[i]);
    }
  } else {
    std::unordered_set<Mask, MaskHash> seen;
    while (edges.size() < m) {
      Mask s = rng.k_subset(n, r);
      if (seen.insert(s).second) edges.push_back(s);
    }
  }
  return Hypergraph(r, n, std::move(edges));
}

// ---------------------------------------------------------------------------
// Text format: "r n" header, one edge per line as 1-based vertex indices,
// '#' starts a comment line.
// ---------------------------------------------------------------------------

namespace detail {

inline bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

inline std::pair<int, int> parse_header(std::istream& in, std::string& line, std::size_t& line_no) {
  if (!next_content_line(in, line, line_no)) throw ParseError(line_no, "missing \"r n\" header");
  std::istringstream hs(line);
  int r = 0, n = 0;
  std::string extra;
  if (!(hs >> r >> n) || (hs >> extra)) throw ParseError(line_no, "header must be \"r n\"");
  if (r < 1 || n < 0 || n > kMaxVertices) throw ParseError(line_no, "header values out of range");
  return {r, n};
}

inline Mask parse_edge_tokens(std::istringstream& ls, int r, int n, std::size_t line_no) {
  Mask e = 0;
  for (int i = 0; i < r; ++i) {
    long v = 0;
    if (!(ls >> v)) throw ParseError(line_no, "expected " + std::to_string(r) + " vertex indices");
    if (v < 1 || v > n) throw ParseError(line_no, "vertex " + std::to_string(v) + " outside [1, " + std::to_string(n) + "]");
    if ((e >> (v - 1)) & 1) throw ParseError(line_no, "repeated vertex in edge");
    e |= bit(static_cast<int>(v - 1));
  }
  return e;
}

}  // namespace detail

inline Hypergraph parse_hypergraph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto [r, n] = detail::parse_header(in, line, line_no);
  std::vector<Mask> edges;
  std::unordered_set<Mask, MaskHash> seen;
  while (detail::next_content_line(in, line, line_no)) {
    std::istringstream ls(line);
    Mask e = detail::parse_edge_tokens(ls, r, n, line_no);
    std::string extra;
    if (ls >> extra) throw ParseError(line_no, "trailing token \"" + extra + "\"");
    if (!seen.insert(e).second) throw ParseError(line_no, "duplicate edge");
    edges.push_back(e);
  }
  return Hypergraph(r, n, std::move(edges));
}

inline Hypergraph parse_hypergraph(const std::string& text) {
  std::istringstream in(text);
  return parse_hypergraph(in);
}

/// Serialises edges in sorted order, so equal edge sets give equal text.
inline void write_hypergraph(std::ostream& out, const Hypergraph& g) {
  out << g.uniformity() << ' ' << g.order() << '\n';
  for (Mask e : g.edges()) {
    bool first = true;
    for_each_bit(e, [&](int v) {
      out << (first ? "" : " ") << v + 1;
      first = false;
    });
    out << '\n';
  }
}

inline std::string format_hypergraph(const Hypergraph& g) {
  std::ostringstream out;
  write_hypergraph(out, g);
  return out.str();
}

}  // namespace anticonc
