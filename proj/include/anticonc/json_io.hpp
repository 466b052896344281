#pragma once

#include <cstdio>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "core/bits.hpp"
#include "core/errors.hpp"
#include "distribution.hpp"
#include "gabm.hpp"
#include "greedy_procedure.hpp"
#include "polynomial.hpp"
#include "slice_coupling.hpp"
#include "structure.hpp"

namespace anticonc {

/// Insertion-ordered, so serialised keys follow construction order.
using Json = nlohmann::ordered_json;

/// 17 significant digits, independent of locale.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string rational_string(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_str();
}

/// 1-based sorted vertex list.
inline Json vertices_json(Mask s) {
  Json out = Json::array();
  for_each_bit(s, [&](int v) { out.push_back(v + 1); });
  return out;
}

inline Json sets_json(const std::vector<Mask>& sets) {
  Json out = Json::array();
  for (Mask s : sets) out.push_back(vertices_json(s));
  return out;
}

// ---------------------------------------------------------------------------
// Distribution tables
// ---------------------------------------------------------------------------

/// {"config"?, "n", "k", "r", "total", "counts": {"ℓ": count}, "probabilities": {"ℓ": "p/q"}}
/// over ℓ with a nonzero count. Big integers are decimal strings.
inline Json distribution_json(const DistributionTable& t, const Json& config = nullptr) {
  Json out;
  if (!config.is_null()) out["config"] = config;
  out["n"] = t.n;
  out["k"] = t.k;
  out["r"] = t.r;
  out["total"] = t.total.get_str();
  Json counts = Json::object(), probs = Json::object();
  for (std::size_t l = 0; l < t.counts.size(); ++l) {
    if (t.counts[l] == 0) continue;
    counts[std::to_string(l)] = t.counts[l].get_str();
    probs[std::to_string(l)] = rational_string(t.probability(static_cast<long>(l)));
  }
  out["counts"] = counts;
  out["probabilities"] = probs;
  return out;
}

/// `ell,count,probability` rows for every ℓ with a nonzero count.
inline std::string distribution_csv(const DistributionTable& t) {
  std::ostringstream out;
  out << "ell,count,probability\n";
  for (std::size_t l = 0; l < t.counts.size(); ++l) {
    if (t.counts[l] == 0) continue;
    out << l << ',' << t.counts[l].get_str() << ',' << format_double(t.probability(static_cast<long>(l)).get_d())
        << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Coupling samples
// ---------------------------------------------------------------------------

inline Json coupling_json(const CouplingSample& s) {
  Json sigma = Json::array();
  for (int v : s.sigma) sigma.push_back(v + 1);
  Json out;
  out["sigma"] = sigma;
  out["gamma"] = s.gamma;
  return out;
}

/// Reads σ (1-based) either from a JSON object with a "sigma" array or from a
/// whitespace-separated list of integers.
inline std::vector<int> parse_sigma(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<int> sigma;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(1, std::string("invalid JSON: ") + e.what());
    }
    if (!j.contains("sigma") || !j["sigma"].is_array()) throw ParseError(1, "missing \"sigma\" array");
    for (const auto& v : j["sigma"]) {
      if (!v.is_number_integer()) throw ParseError(1, "sigma entries must be integers");
      sigma.push_back(v.get<int>() - 1);
    }
  } else {
    std::istringstream ls(text);
    std::string tok;
    std::size_t line = 1;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        sigma.push_back(v - 1);
      } catch (const std::exception&) {
        throw ParseError(line, "sigma entry \"" + tok + "\" is not an integer");
      }
    }
  }
  for (int v : sigma)
    if (v < 0 || v >= static_cast<int>(sigma.size())) throw ParseError(1, "sigma is not a permutation of [1, n]");
  detail::check_permutation(sigma);
  return sigma;
}

// ---------------------------------------------------------------------------
// Polynomials and auxiliary graphs
// ---------------------------------------------------------------------------

/// [{"coeff": "p/q", "vars": [1-based]}] in graded order.
inline Json polynomial_json(const MultilinearPolynomial& p) {
  Json out = Json::array();
  for (const auto& [mono, c] : p.terms()) {
    Json term;
    term["coeff"] = rational_string(c);
    term["vars"] = vertices_json(mono);
    out.push_back(term);
  }
  return out;
}

inline Json auxiliary_json(const AuxiliaryGraph& h) {
  Json out;
  out["k"] = h.k;
  out["H"] = sets_json(h.edges);
  if (h.r == 3) out["H_prime"] = sets_json(h.h_prime);
  return out;
}

// ---------------------------------------------------------------------------
// Structure reports and procedure traces
// ---------------------------------------------------------------------------

inline Json structure_report_json(const StructureReport& rep, const Hypergraph* g = nullptr) {
  Json out;
  out["verdict"] = to_string(rep.verdict);
  if (rep.form) {
    out["A"] = vertices_json(rep.form->a.bits());
    out["B"] = vertices_json(rep.form->b.bits());
    Json m = Json::array();
    for (auto [x, y] : rep.form->m) m.push_back(Json::array({x + 1, y + 1}));
    out["M"] = m;
  }
  if (rep.tuple) {
    Json t = Json::array();
    for (int v : *rep.tuple) t.push_back(v + 1);
    out["tuple"] = t;
    if (g != nullptr) out["signed_sum"] = f_membership(*g, *rep.tuple).sum;
  }
  return out;
}

/// One JSON object per step; positions and vertices 1-based, -1 kept as null.
inline Json step_json(const ProcedureStep& s) {
  auto one = [](int v) { return v < 0 ? Json(nullptr) : Json(v + 1); };
  Json out;
  out["t"] = s.t;
  out["unrevealed"] = s.unrevealed;
  out["Q"] = vertices_json(s.q_t);
  out["u"] = one(s.u);
  out["w"] = one(s.w);
  out["i"] = one(s.i);
  out["j"] = one(s.j);
  out["partner_i"] = one(s.partner_i);
  out["partner_j"] = one(s.partner_j);
  out["success"] = s.success;
  return out;
}

inline std::string trace_json_lines(const ProcedureTrace& trace) {
  std::string out;
  for (const auto& s : trace.steps) out += step_json(s).dump() + '\n';
  return out;
}

inline Json trace_summary_json(const ProcedureTrace& trace) {
  Json out;
  out["variant"] = to_string(trace.variant);
  out["complemented"] = trace.complemented;
  out["U"] = vertices_json(trace.high_degree);
  out["T"] = trace.T;
  out["steps"] = trace.steps.size();
  out["successes"] = trace.successes();
  Json m = Json::array();
  for (auto [i, j] : trace.matching) m.push_back(Json::array({i + 1, j + 1}));
  out["matching"] = m;
  return out;
}

}  // namespace anticonc
