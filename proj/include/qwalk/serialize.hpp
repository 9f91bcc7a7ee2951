#ifndef QWALK_SERIALIZE_HPP
#define QWALK_SERIALIZE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qwalk/closed_form.hpp"
#include "qwalk/corona.hpp"
#include "qwalk/error.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/number_theory.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/transfer.hpp"

namespace qwalk {

using Json = nlohmann::ordered_json;

// ---- graphs -------------------------------------------------------------

inline Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.order()}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<std::int64_t>();
    if (n < 1) throw ParseError("graph JSON needs n >= 1");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("graph JSON edges must be [i, j] pairs");
      const auto a = e[0].get<std::int64_t>();
      const auto b = e[1].get<std::int64_t>();
      if (a < 0 || b < 0) throw ParseError("negative vertex index in graph JSON");
      edges.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b)});
    }
    return Graph(static_cast<std::size_t>(n), std::move(edges));
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("bad graph JSON: ") + ex.what());
  } catch (const ParameterError& ex) {
    throw ParseError(ex.what());
  }
}

/// Edge-list text or its JSON mirror, told apart by the first character.
inline Graph parse_graph_text(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& ex) {
      throw ParseError(std::string("bad graph JSON: ") + ex.what());
    }
    return graph_from_json(j);
  }
  return parse_edge_list(text);
}

inline Json to_json(const CoronaSpec& spec) {
  Json sats = Json::array();
  for (const auto& h : spec.satellites) sats.push_back(to_json(h));
  return {{"base", to_json(spec.base)}, {"satellites", std::move(sats)}};
}

inline CoronaSpec corona_spec_from_json(const Json& j) {
  if (!j.contains("base") || !j.contains("satellites") || !j.at("satellites").is_array()) {
    throw ParseError("corona JSON needs \"base\" and a \"satellites\" array");
  }
  CoronaSpec spec;
  spec.base = graph_from_json(j.at("base"));
  for (const auto& h : j.at("satellites")) spec.satellites.push_back(graph_from_json(h));
  return spec;
}

/// Flat index -> canonical label.
inline Json label_map_json(const CoronaLayout& layout) {
  Json labels = Json::array();
  for (std::size_t i = 0; i < layout.order(); ++i) labels.push_back(to_string(layout.label(i)));
  return labels;
}

// ---- spectra ------------------------------------------------------------

inline Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const Spectrum& s, bool with_projectors = true) {
  Json j{{"eigenvalues", s.eigenvalues}, {"multiplicities", s.multiplicities}};
  if (with_projectors) {
    Json ps = Json::array();
    for (const auto& p : s.projectors) ps.push_back(matrix_json(p));
    j["projectors"] = std::move(ps);
  }
  return j;
}

inline Spectrum spectrum_from_json(const Json& j) {
  try {
    Spectrum s;
    s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    s.multiplicities = j.at("multiplicities").get<std::vector<std::size_t>>();
    for (const auto& p : j.at("projectors")) {
      const auto n = static_cast<Eigen::Index>(p.size());
      Eigen::MatrixXd m(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = p.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != n) throw ShapeError("projector is not square");
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
      }
      s.projectors.push_back(std::move(m));
    }
    if (s.eigenvalues.size() != s.multiplicities.size() ||
        s.eigenvalues.size() != s.projectors.size()) {
      throw ParseError("spectrum JSON lists differ in length");
    }
    return s;
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("bad spectrum JSON: ") + ex.what());
  }
}

inline Json to_json(const SpectrumDeviation& d) {
  return {{"completeness", d.completeness}, {"idempotence", d.idempotence},
          {"orthogonality", d.orthogonality}, {"trace", d.trace},
          {"reconstruction", d.reconstruction}, {"max", d.max()}};
}

// ---- base spectral data -------------------------------------------------

inline Json to_json(const BaseSpectralData& d) {
  Json entries = Json::object();
  for (const auto& [pair, slots] : d.projector_entries) {
    Json row = Json::object();
    for (std::size_t j = 0; j < slots.size(); ++j) {
      if (slots[j]) row[detail::fmt_double(d.eigenvalues[j])] = *slots[j];
    }
    entries[std::to_string(pair.first) + "," + std::to_string(pair.second)] = std::move(row);
  }
  Json j{{"r", d.r}, {"n", d.n}, {"eigenvalues", d.eigenvalues}};
  if (!d.multiplicities.empty()) j["multiplicities"] = d.multiplicities;
  j["projector_entries"] = std::move(entries);
  return j;
}

/// Keys of "projector_entries" are "u,v"; inner keys are eigenvalues written
/// as numbers and matched to the eigenvalue list within 1e-6.
inline BaseSpectralData base_data_from_json(const Json& j) {
  try {
    BaseSpectralData d;
    d.r = j.at("r").get<std::int64_t>();
    d.n = j.at("n").get<std::size_t>();
    d.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    if (j.contains("multiplicities")) {
      d.multiplicities = j.at("multiplicities").get<std::vector<std::size_t>>();
    }
    if (j.contains("projector_entries")) {
      for (const auto& [key, row] : j.at("projector_entries").items()) {
        std::size_t u = 0;
        std::size_t v = 0;
        char tail = 0;
        if (std::sscanf(key.c_str(), "%zu,%zu%c", &u, &v, &tail) != 2) {
          throw ParseError("bad vertex pair key '" + key + "'");
        }
        if (u >= d.n || v >= d.n) throw ParseError("vertex pair '" + key + "' out of range");
        d.projector_entries[BaseSpectralData::key(u, v)].resize(d.eigenvalues.size());
        for (const auto& [lam, value] : row.items()) {
          double x = 0.0;
          if (std::sscanf(lam.c_str(), "%lf%c", &x, &tail) != 1) {
            throw ParseError("bad eigenvalue key '" + lam + "'");
          }
          std::optional<std::size_t> idx;
          for (std::size_t i = 0; i < d.eigenvalues.size(); ++i) {
            if (std::abs(d.eigenvalues[i] - x) < 1e-6) idx = i;
          }
          if (!idx) throw DataError("projector entry for unknown eigenvalue " + lam);
          d.set_entry(*idx, u, v, value.get<double>());
        }
      }
    }
    d.validate();
    return d;
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("bad spectral data JSON: ") + ex.what());
  }
}

// ---- closed form --------------------------------------------------------

inline Json to_json(const CoronaEigenvalueSet& set) {
  Json values = Json::array();
  for (const auto& e : set.all()) {
    values.push_back({{"value", e.value},
                      {"multiplicity", e.multiplicity},
                      {"branch", branch_tag(e.branch)},
                      {"source", e.source},
                      {"sign", e.sign}});
  }
  Json lambdas = Json::array();
  for (const auto& p : set.lambda_pm) {
    lambdas.push_back({{"lambda", p.lambda}, {"Lambda", p.big_lambda}});
  }
  return {{"r", set.r},
          {"k", set.k},
          {"n", set.n},
          {"m", set.m},
          {"total_multiplicity", set.total_multiplicity()},
          {"eigenvalues", std::move(values)},
          {"Lambda", std::move(lambdas)},
          {"Lambda_r", set.r_pm.big_lambda}};
}

// ---- reports ------------------------------------------------------------

inline Json to_json(const QuadraticClass& c) {
  const char* kind = c.kind == QuadraticClass::Kind::all_integer ? "all_integer"
                     : c.kind == QuadraticClass::Kind::quadratic ? "quadratic"
                                                                 : "unclassifiable";
  Json j{{"kind", kind}, {"tolerance", c.tolerance}};
  if (c.kind != QuadraticClass::Kind::unclassifiable) {
    j["a"] = c.a;
    j["delta"] = c.delta;
    j["b"] = c.b;
  } else {
    j["reason"] = c.reason == QuadraticClass::Reason::refuted ? "refuted" : "search_bound";
    j["detail"] = c.detail;
  }
  return j;
}

inline Json to_json(const PeriodicityReport& r) {
  Json j{{"vertex", r.vertex},
         {"verdict", verdict_name(r.verdict)},
         {"criterion", r.criterion},
         {"detail", r.detail},
         {"support", r.support}};
  if (r.quadratic) j["quadratic"] = to_json(*r.quadratic);
  if (!r.evidence.empty()) {
    Json ev = Json::object();
    for (const auto& [k, v] : r.evidence) ev[k] = v;
    j["evidence"] = std::move(ev);
  }
  if (r.anomaly) j["anomaly"] = true;
  return j;
}

inline Json to_json(const BoundCheck& b) {
  Json j{{"criterion", b.criterion}, {"passed", b.passed}};
  if (!b.passed) {
    j["violated"] = b.violated;
    j["lhs"] = b.lhs;
    j["rhs"] = b.rhs;
    if (b.lambda) j["lambda"] = *b.lambda;
  }
  return j;
}

inline Json to_json(const NoPstReport& r) {
  Json vs = Json::array();
  for (const auto& w : r.vertices) {
    Json x{{"vertex", w.vertex}, {"bound", to_json(w.bound)}};
    x["negative_eigenvalue"] = w.negative_eigenvalue ? Json(*w.negative_eigenvalue) : Json(nullptr);
    vs.push_back(std::move(x));
  }
  return {{"criterion", r.criterion}, {"no_pst", r.no_pst}, {"m", r.m},
          {"detail", r.detail}, {"vertices", std::move(vs)}};
}

inline Json to_json(const GapResult& g) {
  Json j{{"criterion", g.criterion}, {"fired", g.fired}, {"detail", g.detail}};
  if (g.fired) j["gap"] = g.gap;
  if (g.lambda) j["lambda"] = *g.lambda;
  if (g.mu) j["mu"] = *g.mu;
  if (g.kappa) j["kappa"] = *g.kappa;
  return j;
}

inline Json to_json(const PstCertificate& c) {
  Json j{{"criterion", c.criterion}, {"u", c.u}, {"v", c.v}, {"holds", c.holds},
         {"support", c.support}, {"signs", c.signs}};
  if (c.inconclusive) j["inconclusive"] = true;
  if (!c.b.empty()) {
    j["a"] = c.a;
    j["delta"] = c.delta;
    j["b"] = c.b;
  }
  if (c.g != 0) {
    j["rho"] = c.rho;
    j["g"] = c.g;
  }
  if (c.holds || c.t0 > 0.0) {
    j["t0"] = c.t0;
    j["fidelity"] = c.fidelity;
  }
  if (!c.failed_condition.empty()) j["failed_condition"] = c.failed_condition;
  return j;
}

inline Json to_json(const PgstPreconditions& p) {
  Json checks = Json::array();
  for (const auto& c : p.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"criterion", p.criterion()}, {"ok", p.ok}, {"u", p.u}, {"v", p.v}, {"g", p.g},
          {"zero_in_support", p.zero_in_support}, {"support", p.support},
          {"perron_radicand", p.perron_radicand}, {"checks", std::move(checks)}};
}

inline Json to_json(const PgstWitness& w) {
  Json targets = Json::array();
  for (const auto& t : w.targets) {
    targets.push_back({{"c", t.c}, {"s", t.s}, {"lambdas", t.lambdas}, {"alpha", t.alpha}});
  }
  Json j{{"criterion", w.criterion()},
         {"preconditions", to_json(w.preconditions)},
         {"found", w.found},
         {"eps", w.eps},
         {"phase_tolerance", w.phase_tolerance},
         {"kronecker_tolerance", w.kronecker_tolerance},
         {"targets", std::move(targets)},
         {"scanned_up_to", w.scanned_up_to},
         {"detail", w.detail}};
  if (w.found) {
    j["l"] = w.l;
    j["T"] = w.time;
    j["amplitude"] = {{"re", w.amplitude.real()}, {"im", w.amplitude.imag()}};
    j["achieved_fidelity"] = w.achieved_fidelity;
    j["q"] = w.kronecker->q;
    j["kronecker_errors"] = w.kronecker->errors;
  } else {
    j["best_fidelity"] = w.best_fidelity;
    j["best_T"] = w.best_time;
  }
  return j;
}

inline Json amplitude_json(std::complex<double> z) {
  return {{"re", z.real()}, {"im", z.imag()}, {"fidelity", std::abs(z)}};
}

/// CSV with header "t,re,im,fidelity".
inline void write_curve_csv(std::ostream& out, const AmplitudeCurve& c) {
  out << "t,re,im,fidelity\n";
  char buf[128];
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", c.times[i], c.amplitudes[i].real(),
                  c.amplitudes[i].imag(), c.fidelities[i]);
    out << buf;
  }
}

}  // namespace qwalk

#endif  // QWALK_SERIALIZE_HPP
