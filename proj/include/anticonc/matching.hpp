#pragma once

#include <utility>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "core/bits.hpp"

namespace anticonc {

/// Maximum matching of a simple graph on {0, ..., n-1} (Edmonds).
inline std::vector<std::pair<int, int>> maximum_matching(int n, const std::vector<std::pair<int, int>>& edges) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  Graph g(static_cast<std::size_t>(n));
  for (auto [u, v] : edges) boost::add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v), g);
  std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(static_cast<std::size_t>(n));
  boost::edmonds_maximum_cardinality_matching(g, &mate[0]);
  std::vector<std::pair<int, int>> out;
  const auto null = boost::graph_traits<Graph>::null_vertex();
  for (std::size_t u = 0; u < mate.size(); ++u)
    if (mate[u] != null && u < mate[u]) out.emplace_back(static_cast<int>(u), static_cast<int>(mate[u]));
  return out;
}

/// Same, for edges given as 2-element masks.
inline std::vector<Mask> maximum_matching(int n, const std::vector<Mask>& edges) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(edges.size());
  for (Mask e : edges) pairs.emplace_back(lowest_bit(e), lowest_bit(e & (e - 1)));
  std::vector<Mask> out;
  for (auto [u, v] : maximum_matching(n, pairs)) out.push_back(bit(u) | bit(v));
  return out;
}

/// Greedy maximal matching: scan `edges` in order, keep each edge disjoint
/// from those kept so far. Within a factor d of optimum for d-uniform input.
inline std::vector<Mask> greedy_matching(const std::vector<Mask>& edges) {
  std::vector<Mask> out;
  Mask used = 0;
  for (Mask e : edges) {
    if ((e & used) != 0) continue;
    out.push_back(e);
    used |= e;
  }
  return out;
}

inline bool is_matching(const std::vector<Mask>& sets) {
  Mask used = 0;
  for (Mask s : sets) {
    if ((s & used) != 0) return false;
    used |= s;
  }
  return true;
}

}  // namespace anticonc
