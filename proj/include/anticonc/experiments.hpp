#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/random.hpp"
#include "greedy_procedure.hpp"
#include "hypergraph.hpp"
#include "json_io.hpp"
#include "matching.hpp"
#include "polynomial_analysis.hpp"
#include "ramsey.hpp"
#include "structure.hpp"

// Seeded experiment drivers shared by the CLI and the acceptance suite. Every
// driver takes a JSON config, fills in defaults, and returns a result whose
// "config" member echoes the effective parameters (seed included, thread
// count excluded: results do not depend on it).

namespace anticonc {

namespace detail {

template <class T>
T config_value(Json& config, const char* key, T fallback) {
  if (!config.contains(key)) config[key] = fallback;
  try {
    return config[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key \"") + key + "\" has the wrong type");
  }
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : (v[h - 1] + v[h]) / 2.0;
}

}  // namespace detail

/// Graph from a description object: {"kind": "complete_bipartite", "n"} (K_{n/2,n/2}),
/// {"kind": "gnp", "n", "p", "seed"?}, {"kind": "empty", "n"} or
/// {"kind": "file", "path"}. The gnp seed defaults to stream 0 of `seed`.
inline Hypergraph build_graph(Json& spec, std::uint64_t seed) {
  const std::string kind = detail::config_value<std::string>(spec, "kind", "complete_bipartite");
  if (kind == "file") {
    const std::string path = detail::config_value<std::string>(spec, "path", "");
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open graph file " + path);
    return parse_hypergraph(in);
  }
  const int n = detail::config_value<int>(spec, "n", 64);
  if (kind == "complete_bipartite") return make_complete_bipartite(n / 2, n - n / 2, 2);
  if (kind == "empty") return Hypergraph(2, n);
  if (kind == "gnp") {
    const double p = detail::config_value<double>(spec, "p", 0.5);
    const auto gseed = detail::config_value<std::uint64_t>(spec, "seed", stream_seed(seed, 0));
    return make_random_uniform(n, 2, p, gseed);
  }
  throw ConfigError("unknown graph kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// Matching probability of H
// ---------------------------------------------------------------------------

struct MatchingReport {
  Json config;
  MatchingExperiment data;
};

inline MatchingReport run_matching_experiment(Json config, std::uint64_t seed, unsigned threads) {
  config["seed"] = seed;
  Json spec = config.contains("graph") ? config["graph"] : Json::object();
  const Hypergraph g = build_graph(spec, seed);
  config["graph"] = spec;
  const auto samples = detail::config_value<std::uint64_t>(config, "samples", 100);
  const double threshold = detail::config_value<double>(config, "threshold", 1.0);
  MatchingReport out;
  out.data = matching_probability_experiment(g, samples, stream_seed(seed, 1), threshold, threads);
  out.config = config;
  return out;
}

inline Json to_json(const MatchingReport& r) {
  Json out;
  out["config"] = r.config;
  out["fraction_below"] = r.data.fraction_below;
  out["mean"] = r.data.mean;
  out["sizes"] = r.data.sizes;
  return out;
}

// ---------------------------------------------------------------------------
// Greedy procedure
// ---------------------------------------------------------------------------

struct GreedyRun {
  std::size_t steps = 0;
  std::size_t successes = 0;
  std::size_t matching = 0;    // |M| built by the procedure
  std::size_t h_matching = 0;  // maximum matching of H(G, σ) for the final σ
};

struct GreedyReport {
  Json config;
  bool applicable = true;
  std::string reason;  // why the variant does not apply
  bool complemented = false;
  double T = 0.0;
  std::size_t high_degree = 0;
  std::vector<GreedyRun> runs;

  std::size_t total_steps() const {
    std::size_t s = 0;
    for (const auto& r : runs) s += r.steps;
    return s;
  }
  std::size_t total_successes() const {
    std::size_t s = 0;
    for (const auto& r : runs) s += r.successes;
    return s;
  }
  double step_success_rate() const {
    return total_steps() == 0 ? 0.0 : static_cast<double>(total_successes()) / static_cast<double>(total_steps());
  }
  /// Fraction of runs with |M| >= factor·T.
  double fraction_matching_at_least(double factor) const {
    if (runs.empty()) return 0.0;
    std::size_t c = 0;
    for (const auto& r : runs) c += static_cast<double>(r.matching) >= factor * T;
    return static_cast<double>(c) / static_cast<double>(runs.size());
  }
};

/// Run i uses stream i + 1 of `seed`.
inline GreedyReport run_greedy_experiment(Json config, std::uint64_t seed, unsigned threads) {
  config["seed"] = seed;
  Json spec = config.contains("graph") ? config["graph"] : Json::object();
  const Hypergraph g = build_graph(spec, seed);
  config["graph"] = spec;
  const std::string vname = detail::config_value<std::string>(config, "variant", "avoid_high_degree");
  GreedyVariant variant;
  if (vname == "avoid_high_degree") variant = GreedyVariant::avoid_high_degree;
  else if (vname == "high_degree") variant = GreedyVariant::high_degree;
  else throw ConfigError("unknown greedy variant \"" + vname + "\"");
  const auto runs = detail::config_value<std::uint64_t>(config, "runs", 100);
  GreedyReport out;
  out.config = config;
  out.runs.assign(runs, {});
  std::vector<ProcedureTrace> first(runs > 0 ? 1 : 0);
  try {
    parallel_blocks(runs, threads, [&](std::size_t i) {
      ProcedureTrace trace = run_greedy_procedure(g, variant, stream_seed(seed, i + 1));
      // Complementing negates every coefficient sum, so H(G, σ) = H(Ḡ, σ).
      AuxiliaryGraph h = build_auxiliary_H(g, trace.sigma);
      out.runs[i] = {trace.steps.size(), trace.successes(), trace.matching.size(),
                     maximum_matching(h.k, h.edges).size()};
      if (i == 0) first[0] = std::move(trace);
    });
  } catch (const PreconditionError& e) {
    out.applicable = false;
    out.reason = e.what();
    out.runs.clear();
    return out;
  }
  if (!first.empty()) {
    out.complemented = first[0].complemented;
    out.T = first[0].T;
    out.high_degree = static_cast<std::size_t>(popcount(first[0].high_degree));
  }
  return out;
}

inline Json to_json(const GreedyReport& r) {
  Json out;
  out["config"] = r.config;
  out["applicable"] = r.applicable;
  if (!r.applicable) {
    out["reason"] = r.reason;
    return out;
  }
  out["complemented"] = r.complemented;
  out["high_degree_count"] = r.high_degree;
  out["T"] = r.T;
  out["steps"] = r.total_steps();
  out["successes"] = r.total_successes();
  out["step_success_rate"] = r.step_success_rate();
  Json rows = Json::array();
  for (const auto& run : r.runs) rows.push_back(Json::array({run.steps, run.successes, run.matching, run.h_matching}));
  out["runs_columns"] = Json::array({"steps", "successes", "matching", "h_matching"});
  out["runs"] = rows;
  return out;
}

// ---------------------------------------------------------------------------
// Rank versus max point probability for quadratic sign polynomials
// ---------------------------------------------------------------------------

/// Quadratic polynomial in m variables whose degree-2 support has maximum
/// matching exactly `rank`: a random perfect matching on 2·rank chosen
/// variables plus random extra pairs and linear terms inside that set.
inline MultilinearPolynomial random_rank_quadratic(int m, int rank, int range, std::uint64_t seed) {
  if (rank < 1 || 2 * rank > m) throw PreconditionError("random_rank_quadratic needs 1 <= rank <= m/2");
  if (range < 1) throw PreconditionError("coefficient range must be positive");
  Rng rng(seed);
  const std::vector<int> support = bits_of(rng.k_subset(m, 2 * rank));
  std::vector<int> order = rng.permutation(2 * rank);
  auto coeff = [&] {
    long c = static_cast<long>(rng.below(static_cast<std::uint64_t>(range))) + 1;
    return mpq_class(rng.coin() ? c : -c);
  };
  auto var = [&](int i) { return support[static_cast<std::size_t>(i)]; };
  MultilinearPolynomial f(m);
  for (int i = 0; i < rank; ++i) f.set(bit(var(order[2 * i])) | bit(var(order[2 * i + 1])), coeff());
  for (int i = 0; i < 2 * rank; ++i) {
    for (int j = i + 1; j < 2 * rank; ++j) {
      Mask s = bit(var(i)) | bit(var(j));
      if (f.coefficient(s) == 0 && rng.below(4) == 0) f.set(s, coeff());
    }
    if (rng.coin()) f.set(bit(var(i)), coeff());
  }
  return f;
}

struct MnvBucket {
  int rank = 0;
  std::vector<double> max_point_probs;
  double median = 0.0;
};

struct MnvTrendReport {
  Json config;
  std::vector<MnvBucket> buckets;

  bool medians_non_increasing() const {
    for (std::size_t i = 1; i < buckets.size(); ++i)
      if (buckets[i].median > buckets[i - 1].median) return false;
    return true;
  }
};

/// Polynomial i of bucket b uses seed stream_seed(seed, b·2^32 + i) for its
/// coefficients and sign draws.
inline MnvTrendReport run_mnv_trend(Json config, std::uint64_t seed, unsigned threads) {
  config["seed"] = seed;
  const auto ranks = detail::config_value<std::vector<int>>(config, "ranks", {1, 2, 4, 8, 16});
  const int m = detail::config_value<int>(config, "variables", 32);
  const auto per_bucket = detail::config_value<std::uint64_t>(config, "per_bucket", 200);
  const auto trials = detail::config_value<std::uint64_t>(config, "trials", 100000);
  const int range = detail::config_value<int>(config, "range", 8);
  MnvTrendReport out;
  out.config = config;
  for (std::size_t b = 0; b < ranks.size(); ++b) {
    MnvBucket bucket;
    bucket.rank = ranks[b];
    bucket.max_point_probs.assign(per_bucket, 0.0);
    parallel_blocks(per_bucket, threads, [&](std::size_t i) {
      const std::uint64_t s = stream_seed(seed, (static_cast<std::uint64_t>(b) << 32) + i);
      MultilinearPolynomial f = random_rank_quadratic(m, bucket.rank, range, s);
      MnvReport rep = mnv_rank_report(f, trials, s, 1);
      if (static_cast<int>(rep.rank) != bucket.rank)
        throw std::logic_error("random_rank_quadratic produced the wrong rank");
      bucket.max_point_probs[i] = rep.max_point_prob;
    });
    bucket.median = detail::median(bucket.max_point_probs);
    out.buckets.push_back(std::move(bucket));
  }
  return out;
}

inline Json to_json(const MnvTrendReport& r) {
  Json out;
  out["config"] = r.config;
  Json buckets = Json::array();
  for (const auto& b : r.buckets) {
    Json j;
    j["rank"] = b.rank;
    j["median"] = b.median;
    j["max_point_probs"] = b.max_point_probs;
    buckets.push_back(j);
  }
  out["buckets"] = buckets;
  out["medians_non_increasing"] = r.medians_non_increasing();
  return out;
}

// ---------------------------------------------------------------------------
// Hypercontractivity on the slice
// ---------------------------------------------------------------------------

struct HypercontractivityCase {
  int n = 0;
  MultilinearPolynomial g;  // harmonic projection of a random polynomial
  HypercontractivityResult result;
};

struct HypercontractivityReport {
  Json config;
  std::vector<HypercontractivityCase> cases;

  std::size_t violations() const {
    std::size_t v = 0;
    for (const auto& c : cases) v += !c.result.holds;
    return v;
  }
};

/// Case i draws its polynomial from stream i of `seed`; n cycles through "ns".
inline HypercontractivityReport run_hypercontractivity(Json config, std::uint64_t seed, unsigned threads) {
  config["seed"] = seed;
  const auto ns = detail::config_value<std::vector<int>>(config, "ns", {6, 8, 10});
  const auto count = detail::config_value<std::uint64_t>(config, "count", 100);
  const int degree = detail::config_value<int>(config, "degree", 3);
  const int terms = detail::config_value<int>(config, "terms", 10);
  const int range = detail::config_value<int>(config, "range", 5);
  const double q = detail::config_value<double>(config, "q", 4.0);
  const double p = 0.5;
  config["p"] = p;
  if (ns.empty()) throw ConfigError("config key \"ns\" must be non-empty");
  HypercontractivityReport out;
  out.config = config;
  out.cases.resize(count);
  parallel_blocks(count, threads, [&](std::size_t i) {
    const int n = ns[i % ns.size()];
    const int k = n / 2;
    MultilinearPolynomial f = random_polynomial(n, std::min(degree, k), terms, range, stream_seed(seed, i));
    MultilinearPolynomial g = harmonic_project(f, n, k);
    const double t = minimal_valid_t(n, p, q);
    out.cases[i] = {n, g, hypercontractivity_check(g, n, p, t, q)};
  });
  return out;
}

inline Json to_json(const HypercontractivityReport& r) {
  Json out;
  out["config"] = r.config;
  out["violations"] = r.violations();
  Json rows = Json::array();
  for (const auto& c : r.cases)
    rows.push_back(Json::array({c.n, c.result.t, static_cast<double>(c.result.lhs), static_cast<double>(c.result.rhs),
                                c.result.holds}));
  out["cases_columns"] = Json::array({"n", "t", "lhs", "rhs", "holds"});
  out["cases"] = rows;
  return out;
}

// ---------------------------------------------------------------------------
// Ramsey patterns on random colourings
// ---------------------------------------------------------------------------

struct PatternCase {
  std::size_t red = 0, blue = 0;
  std::size_t mixed = 0;
  bool bipartite = false;
  bool unavoidable = false;
  bool clique = false;
};

struct PatternsReport {
  Json config;
  mpq_class mixed_bound;  // α_r(ε)·n^{r−1}
  std::vector<PatternCase> cases;
};

/// Colouring i is drawn from stream i of `seed`, each r-set red with
/// probability p_red. mixed_degree_sets runs with α = α_r(ε).
inline PatternsReport run_patterns(Json config, std::uint64_t seed, unsigned threads) {
  config["seed"] = seed;
  const int n = detail::config_value<int>(config, "n", 12);
  const int r = detail::config_value<int>(config, "r", 3);
  const double p_red = detail::config_value<double>(config, "p_red", 0.5);
  const auto count = detail::config_value<std::uint64_t>(config, "count", 10);
  const std::string eps_text = detail::config_value<std::string>(config, "eps", "1/5");
  const int t = detail::config_value<int>(config, "t", 2);
  const int q = detail::config_value<int>(config, "q", 1);
  const int clique = detail::config_value<int>(config, "clique", 4);
  mpq_class eps;
  if (eps.set_str(eps_text, 10) != 0 || eps.get_den() == 0) throw ConfigError("config key \"eps\" must be a rational p/q");
  eps.canonicalize();
  PatternsReport out;
  out.config = config;
  const mpq_class alpha = alpha_r(eps, r);
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r - 1));
  out.mixed_bound = alpha * mpq_class(power);
  out.cases.resize(count);
  parallel_blocks(count, threads, [&](std::size_t i) {
    TwoColoring c = random_coloring(r, n, p_red, stream_seed(seed, i));
    PatternCase pc;
    pc.red = c.count(Color::red);
    pc.blue = c.count(Color::blue);
    pc.mixed = mixed_degree_sets(c, alpha).size();
    if (r == 2 || r == 3) pc.bipartite = find_bipartite_pattern(c, q).has_value();
    if (r == 3) pc.unavoidable = find_unavoidable_pattern(c, t, 1).has_value();
    pc.clique = monochromatic_clique(c, clique).has_value();
    out.cases[i] = pc;
  });
  return out;
}

inline Json to_json(const PatternsReport& r) {
  Json out;
  out["config"] = r.config;
  out["mixed_bound"] = rational_string(r.mixed_bound);
  Json rows = Json::array();
  for (const auto& c : r.cases)
    rows.push_back(Json::array({c.red, c.blue, c.mixed, c.bipartite, c.unavoidable, c.clique}));
  out["cases_columns"] = Json::array({"red", "blue", "mixed", "bipartite", "unavoidable", "clique"});
  out["cases"] = rows;
  return out;
}

}  // namespace anticonc
