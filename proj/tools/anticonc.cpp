// anticonc: command-line front end for the anticonc library.
//
// Exit codes: 0 ok, 2 parse / usage error, 3 enumeration budget exceeded,
// 4 precondition violated, 1 anything else.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "anticonc/anticonc.hpp"

namespace {

using namespace anticonc;

enum ExitCode { kOk = 0, kOther = 1, kParse = 2, kBudget = 3, kPrecondition = 4 };

struct Common {
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string format = "json";
  std::optional<std::uint64_t> budget;

  std::uint64_t budget_value() const { return budget ? *budget : enumeration_budget(); }

  /// An explicit seed, or a fresh one that is echoed with the output.
  std::uint64_t seed_value() {
    if (!seed) seed = std::random_device{}() * 0x100000001ULL ^ std::random_device{}();
    return *seed;
  }
};

Hypergraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  return parse_hypergraph(in);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// CSV and table output start with the config echo as a comment line.
void emit(const Common& opt, const Json& config, const Json& result, const std::string& csv,
          const std::string& table) {
  if (opt.format == "json") {
    Json out;
    out["config"] = config;
    out["result"] = result;
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "# config " << config.dump() << '\n' << (opt.format == "csv" ? csv : table);
  }
}

Json sigma_json(const std::vector<int>& sigma) {
  Json out = Json::array();
  for (int v : sigma) out.push_back(v + 1);
  return out;
}

// ---------------------------------------------------------------------------
// distribution
// ---------------------------------------------------------------------------

struct DistributionArgs {
  std::string graph;
  int k = 0;
  std::optional<long> ell;
  std::optional<std::uint64_t> mc;
};

int cmd_distribution(Common& opt, const DistributionArgs& a) {
  const Hypergraph g = read_graph(a.graph);
  Json config;
  config["command"] = "distribution";
  config["graph"] = a.graph;
  config["k"] = a.k;
  if (a.ell) config["ell"] = *a.ell;
  if (!a.ell) {
    if (a.mc) throw PreconditionError("--mc needs --ell");
    DistributionTable t = exact_distribution(g, a.k, opt.threads, opt.budget_value());
    config["method"] = "exact";
    std::ostringstream table;
    table << "ell  count  probability\n";
    for (std::size_t l = 0; l < t.counts.size(); ++l)
      if (t.counts[l] != 0)
        table << l << "  " << t.counts[l].get_str() << "  " << rational_string(t.probability(static_cast<long>(l)))
              << '\n';
    emit(opt, config, distribution_json(t), distribution_csv(t), table.str());
    return kOk;
  }
  const long ell = *a.ell;
  bool exact = !a.mc;
  mpq_class p;
  if (exact) {
    try {
      p = point_probability(g, a.k, ell, opt.threads, opt.budget_value());
    } catch (const BudgetExceeded&) {
      exact = false;
    }
  }
  if (exact) {
    config["method"] = "exact";
    Json result;
    result["ell"] = ell;
    result["probability"] = rational_string(p);
    result["decimal"] = p.get_d();
    emit(opt, config, result,
         "ell,probability,decimal\n" + std::to_string(ell) + ',' + rational_string(p) + ',' +
             format_double(p.get_d()) + '\n',
         "Pr(X = " + std::to_string(ell) + ") = " + rational_string(p) + '\n');
    return kOk;
  }
  const std::uint64_t trials = a.mc ? *a.mc : 100000;
  config["method"] = "monte_carlo";
  config["trials"] = trials;
  config["seed"] = opt.seed_value();
  MonteCarloEstimate est = monte_carlo_probability(g, a.k, ell, trials, opt.seed_value(), opt.threads);
  Json result;
  result["ell"] = ell;
  result["estimate"] = est.estimate;
  result["stderr"] = est.standard_error;
  result["hits"] = est.hits;
  result["trials"] = est.trials;
  emit(opt, config, result,
       "ell,estimate,stderr,hits,trials\n" + std::to_string(ell) + ',' + format_double(est.estimate) + ',' +
           format_double(est.standard_error) + ',' + std::to_string(est.hits) + ',' + std::to_string(est.trials) +
           '\n',
       "Pr(X = " + std::to_string(ell) + ") ~ " + format_double(est.estimate) + " +- " +
           format_double(est.standard_error) + '\n');
  return kOk;
}

// ---------------------------------------------------------------------------
// coeffs
// ---------------------------------------------------------------------------

struct CoeffsArgs {
  std::string graph;
  std::string sigma_file;
};

int cmd_coeffs(Common& opt, const CoeffsArgs& a) {
  const Hypergraph g = read_graph(a.graph);
  const int n = g.order();
  if (n % 2 != 0) throw PreconditionError("coeffs needs an even number of vertices, got " + std::to_string(n));
  Json config;
  config["command"] = "coeffs";
  config["graph"] = a.graph;
  std::vector<int> sigma;
  if (!a.sigma_file.empty()) {
    std::ifstream in(a.sigma_file);
    if (!in) throw PreconditionError("cannot open " + a.sigma_file);
    sigma = parse_sigma(in);
    if (static_cast<int>(sigma.size()) != n) throw PreconditionError("sigma length differs from n");
    config["sigma_file"] = a.sigma_file;
  } else {
    config["seed"] = opt.seed_value();
    Rng rng(opt.seed_value());
    sigma = rng.permutation(n);
  }
  const MultilinearPolynomial f = extract_coefficients(g, sigma, opt.budget_value());
  const int d = g.uniformity();
  const RankCertificate rank = compute_rank(f, d);
  const AuxiliaryGraph h = build_auxiliary_H(g, sigma);
  Json result;
  result["sigma"] = sigma_json(sigma);
  result["coefficients"] = polynomial_json(f);
  result["rank"] = rank.rank_lower_bound;
  result["rank_exact"] = rank.exact;
  result["rank_matching"] = sets_json(rank.matching);
  result["auxiliary"] = auxiliary_json(h);

  std::ostringstream csv, table;
  csv << "coeff,vars\n";
  for (const auto& [mono, c] : f.terms()) {
    csv << rational_string(c) << ',';
    bool first = true;
    for_each_bit(mono, [&](int v) {
      csv << (first ? "" : " ") << v + 1;
      first = false;
    });
    csv << '\n';
  }
  table << "rank " << rank.rank_lower_bound << (rank.exact ? " (exact)" : " (greedy lower bound)") << '\n';
  table << format_polynomial(f);
  emit(opt, config, result, csv.str(), table.str());
  return kOk;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

int cmd_classify(Common& opt, const std::string& path) {
  const Hypergraph g = read_graph(path);
  Json config;
  config["command"] = "classify";
  config["graph"] = path;
  const StructureReport rep = recognize_gabm(g);
  const Json result = structure_report_json(rep, &g);
  std::ostringstream table;
  table << "verdict " << to_string(rep.verdict) << '\n';
  for (auto it = result.begin(); it != result.end(); ++it)
    if (it.key() != "verdict") table << it.key() << ' ' << it.value().dump() << '\n';
  emit(opt, config, result, "verdict\n" + std::string(to_string(rep.verdict)) + '\n', table.str());
  return kOk;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string name;
  std::string config_file;
  std::string trace_file;
};

std::string rows_csv(const Json& columns, const Json& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i].get<std::string>();
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "");
      if (row[i].is_number_float()) out << format_double(row[i].get<double>());
      else out << row[i].dump();
    }
    out << '\n';
  }
  return out.str();
}

/// Scalar members of a report as "key value" lines.
std::string scalars_table(const Json& result) {
  std::ostringstream out;
  for (auto it = result.begin(); it != result.end(); ++it)
    if (it.key() != "config" && !it.value().is_structured()) out << it.key() << ' ' << it.value().dump() << '\n';
  return out.str();
}

int cmd_experiment(Common& opt, const ExperimentArgs& a) {
  Json cfg = a.config_file.empty() ? Json::object() : read_json_file(a.config_file);
  if (!cfg.is_object()) throw ConfigError("experiment config must be a JSON object");
  const std::uint64_t seed = cfg.contains("seed") && !opt.seed ? cfg["seed"].get<std::uint64_t>() : opt.seed_value();
  Json result, config;
  std::string csv;
  if (a.name == "matching") {
    MatchingReport r = run_matching_experiment(cfg, seed, opt.threads);
    result = to_json(r);
    std::ostringstream s;
    s << "sample,matching_size\n";
    for (std::size_t i = 0; i < r.data.sizes.size(); ++i) s << i << ',' << r.data.sizes[i] << '\n';
    csv = s.str();
  } else if (a.name == "greedy") {
    GreedyReport r = run_greedy_experiment(cfg, seed, opt.threads);
    result = to_json(r);
    csv = r.applicable ? rows_csv(result["runs_columns"], result["runs"]) : "applicable\nfalse\n";
    if (!a.trace_file.empty() && r.applicable) {
      Json spec = r.config["graph"];
      const Hypergraph g = build_graph(spec, seed);
      const GreedyVariant v = r.config["variant"] == "high_degree" ? GreedyVariant::high_degree
                                                                    : GreedyVariant::avoid_high_degree;
      const ProcedureTrace trace = run_greedy_procedure(g, v, stream_seed(seed, 1));
      std::ofstream out(a.trace_file);
      out << trace_summary_json(trace).dump() << '\n' << trace_json_lines(trace);
    }
  } else if (a.name == "mnv-trend") {
    MnvTrendReport r = run_mnv_trend(cfg, seed, opt.threads);
    result = to_json(r);
    std::ostringstream s;
    s << "rank,index,max_point_prob\n";
    for (const auto& b : r.buckets)
      for (std::size_t i = 0; i < b.max_point_probs.size(); ++i)
        s << b.rank << ',' << i << ',' << format_double(b.max_point_probs[i]) << '\n';
    csv = s.str();
  } else if (a.name == "hypercontractivity") {
    HypercontractivityReport r = run_hypercontractivity(cfg, seed, opt.threads);
    result = to_json(r);
    csv = rows_csv(result["cases_columns"], result["cases"]);
  } else if (a.name == "patterns") {
    PatternsReport r = run_patterns(cfg, seed, opt.threads);
    result = to_json(r);
    csv = rows_csv(result["cases_columns"], result["cases"]);
  } else {
    throw ConfigError("unknown experiment \"" + a.name + "\"");
  }
  config["command"] = "experiment " + a.name;
  config.update(result["config"]);
  result.erase("config");
  emit(opt, config, result, csv, scalars_table(result));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Induced-subgraph statistics, slice couplings and structure finders"};
  app.require_subcommand(1);
  Common opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "64-bit seed (generated and echoed when absent)");
    sub->add_option("--threads", opt.threads, "worker cap; 0 = hardware concurrency")->check(CLI::NonNegativeNumber);
    sub->add_option("--format", opt.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
    sub->add_option("--budget", opt.budget, "maximum subsets enumerated (overrides ANTICONC_BUDGET)");
  };

  DistributionArgs dist;
  auto* d = app.add_subcommand("distribution", "distribution of X_{G,k}, or Pr(X = ell)");
  d->add_option("graph", dist.graph, "graph file")->required();
  d->add_option("-k,--k", dist.k, "subset size")->required();
  d->add_option("--ell", dist.ell, "single value of X");
  d->add_option("--mc", dist.mc, "Monte Carlo trials (forces sampling)");
  add_common(d);

  CoeffsArgs co;
  auto* c = app.add_subcommand("coeffs", "coupled polynomial coefficients, rank and auxiliary graph");
  c->add_option("graph", co.graph, "graph file")->required();
  auto* sigma_opt = c->add_option("--sigma", co.sigma_file, "file with a 1-based permutation");
  add_common(c);
  c->get_option("--seed")->excludes(sigma_opt);

  std::string classify_path;
  auto* cl = app.add_subcommand("classify", "recognise G_{A,B,M}, its complement, or an F-copy");
  cl->add_option("graph", classify_path, "3-graph file")->required();
  add_common(cl);

  ExperimentArgs ex;
  auto* e = app.add_subcommand("experiment", "seeded experiments");
  e->add_option("name", ex.name, "matching, greedy, mnv-trend, hypercontractivity or patterns")->required();
  e->add_option("--config", ex.config_file, "JSON config file");
  e->add_option("--trace", ex.trace_file, "greedy: write the first run's trace as JSON lines");
  add_common(e);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kParse;
  }

  try {
    if (*d) return cmd_distribution(opt, dist);
    if (*c) return cmd_coeffs(opt, co);
    if (*cl) return cmd_classify(opt, classify_path);
    if (*e) return cmd_experiment(opt, ex);
  } catch (const ParseError& err) {
    std::cerr << "parse error: " << err.what() << '\n';
    return kParse;
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kParse;
  } catch (const BudgetExceeded& err) {
    std::cerr << "budget exceeded: " << err.what() << '\n';
    return kBudget;
  } catch (const PreconditionError& err) {
    std::cerr << "precondition: " << err.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kOther;
  }
  return kOther;
}
