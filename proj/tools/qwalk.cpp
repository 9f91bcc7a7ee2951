// qwalk: command-line front end. Every command prints exactly one JSON
// document on stdout; diagnostics go to stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwalk/qwalk.hpp"

namespace {

using qwalk::Json;

enum class Status { ok, precondition_failed, inconclusive, not_found, usage };

int exit_code(Status s) {
  switch (s) {
    case Status::ok: return 0;
    case Status::precondition_failed: return 2;
    case Status::inconclusive: return 3;
    case Status::not_found: return 4;
    case Status::usage: return 64;
  }
  return 64;
}

const char* status_name(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::precondition_failed: return "precondition_failed";
    case Status::inconclusive: return "inconclusive";
    case Status::not_found: return "not_found";
    case Status::usage: return "usage";
  }
  return "usage";
}

int emit(Status s, Json payload) {
  Json out{{"status", status_name(s)}};
  for (auto& [k, v] : payload.items()) out[k] = v;
  std::cout << out.dump(2) << '\n';
  return exit_code(s);
}

/// Thrown for bad command-line usage that CLI11 itself cannot see.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

/// "family:p1:p2..." or "@file".
qwalk::Graph parse_graph_spec(const std::string& spec) {
  if (spec.empty()) throw UsageError("empty graph spec");
  if (spec.front() == '@') return qwalk::parse_graph_text(read_file(spec.substr(1)));
  const auto parts = split(spec, ':');
  qwalk::GraphFamily family{};
  try {
    family = qwalk::parse_family(parts.front());
  } catch (const qwalk::Error& e) {
    throw UsageError(e.what());
  }
  std::vector<std::int64_t> params;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    try {
      std::size_t used = 0;
      params.push_back(std::stoll(parts[i], &used));
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("bad parameter '" + parts[i] + "' in graph spec '" + spec + "'");
    }
  }
  try {
    return qwalk::build_named_graph(family, params);
  } catch (const qwalk::ParameterError& e) {
    throw UsageError(e.what());
  }
}

double recognition_tolerance() {
  if (const char* env = std::getenv("QWALK_TOL")) {
    try {
      const double tol = std::stod(env);
      if (tol > 0.0 && tol < 0.5) return tol;
    } catch (const std::exception&) {
    }
    throw UsageError("QWALK_TOL must be a number in (0, 0.5)");
  }
  return qwalk::kRecognizeTolerance;
}

/// Graph input shared by the subcommands: a plain graph or a corona.
struct GraphInput {
  std::string graph;
  std::string base;
  std::string satellites;
  std::string each;
  std::string corona_json;

  void attach(CLI::App* app) {
    app->add_option("--graph", graph, "graph spec: family:params or @edge-list-file");
    app->add_option("--base", base, "corona base graph spec");
    app->add_option("--satellites", satellites, "comma-separated satellite specs, one per base vertex");
    app->add_option("--each", each, "one satellite spec attached to every base vertex");
    app->add_option("--corona", corona_json, "corona spec JSON file");
  }

  bool is_corona() const { return !base.empty() || !corona_json.empty(); }
  bool given() const { return !graph.empty() || is_corona(); }

  qwalk::CoronaSpec corona_spec() const {
    if (!corona_json.empty()) {
      try {
        return qwalk::corona_spec_from_json(Json::parse(read_file(corona_json)));
      } catch (const Json::parse_error& e) {
        throw qwalk::ParseError(e.what());
      }
    }
    qwalk::CoronaSpec spec;
    spec.base = parse_graph_spec(base);
    if (!each.empty() == !satellites.empty()) {
      throw UsageError("give exactly one of --satellites or --each with --base");
    }
    if (!each.empty()) {
      spec.satellites.assign(spec.base.order(), parse_graph_spec(each));
    } else {
      for (const auto& s : split(satellites, ',')) spec.satellites.push_back(parse_graph_spec(s));
    }
    return spec;
  }

  struct Built {
    qwalk::Graph graph;
    std::optional<qwalk::CoronaSpec> spec;
    std::optional<qwalk::CoronaLayout> layout;
  };

  Built build() const {
    if (!graph.empty() && is_corona()) throw UsageError("--graph conflicts with corona inputs");
    if (!given()) throw UsageError("no graph input; use --graph or --base");
    if (!graph.empty()) return {parse_graph_spec(graph), std::nullopt, std::nullopt};
    auto spec = corona_spec();
    auto cg = qwalk::build_corona(spec);
    return {std::move(cg.graph), std::move(spec), std::move(cg.layout)};
  }
};

/// Flat index, or a "v:i[/w:j]" label when a layout is known.
std::size_t parse_vertex(const std::string& text, const std::optional<qwalk::CoronaLayout>& layout,
                         std::size_t order) {
  if (text.rfind("v:", 0) == 0) {
    if (!layout) throw UsageError("label '" + text + "' needs a corona input");
    try {
      return layout->flat_index(qwalk::parse_corona_label(text));
    } catch (const qwalk::Error& e) {
      throw UsageError(std::string("unknown label: ") + e.what());
    }
  }
  std::size_t used = 0;
  long long value = -1;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
  }
  if (value < 0 || used != text.size() || static_cast<std::size_t>(value) >= order) {
    throw UsageError("unknown vertex '" + text + "'");
  }
  return static_cast<std::size_t>(value);
}

Json vertex_json(std::size_t flat, const std::optional<qwalk::CoronaLayout>& layout) {
  if (layout) return qwalk::to_string(layout->label(flat));
  return flat;
}

// ---- build --------------------------------------------------------------

struct BuildCmd {
  GraphInput in;
  std::string out;

  int run() const {
    if (!in.is_corona()) throw UsageError("build needs --base with --satellites or --each");
    const auto built = in.build();
    Json payload{{"vertices", built.graph.order()}, {"edges", built.graph.size()}};
    if (!out.empty()) {
      std::ofstream(out + ".edges") << qwalk::serialize_edge_list(built.graph);
      std::ofstream(out + ".labels.json") << qwalk::label_map_json(*built.layout).dump(2) << '\n';
      payload["edge_list"] = out + ".edges";
      payload["label_map"] = out + ".labels.json";
    } else {
      payload["labels"] = qwalk::label_map_json(*built.layout);
      payload["graph"] = qwalk::to_json(built.graph);
    }
    return emit(Status::ok, std::move(payload));
  }
};

// ---- spectrum -----------------------------------------------------------

struct SpectrumCmd {
  GraphInput in;
  bool closed_form = false;
  bool no_projectors = false;
  std::optional<std::int64_t> k;
  std::optional<std::int64_t> m;

  int run() const {
    const auto built = in.build();
    const Eigen::MatrixXd a = built.graph.adjacency();
    Json payload;
    if (!closed_form) {
      const auto s = qwalk::eigendecompose(a);
      payload["mode"] = "numeric";
      payload["spectrum"] = qwalk::to_json(s, !no_projectors);
      payload["deviation"] = qwalk::to_json(qwalk::spectrum_deviation(s, &a));
      return emit(Status::ok, std::move(payload));
    }
    if (!built.spec) throw UsageError("--closed-form needs a corona input (--base ...)");
    const auto params = qwalk::validate_regular_corona(*built.spec, 2);
    if ((k && *k != static_cast<std::int64_t>(params.k)) ||
        (m && *m != static_cast<std::int64_t>(params.m))) {
      throw qwalk::PreconditionError("--k/--m disagree with the satellites (k = " +
                                     std::to_string(params.k) + ", m = " + std::to_string(params.m) + ")");
    }
    const auto s = qwalk::corona_eigenprojectors(*built.spec);
    payload["mode"] = "closed-form";
    payload["branches"] = qwalk::to_json(qwalk::corona_eigenvalues(*built.spec));
    payload["spectrum"] = qwalk::to_json(s, !no_projectors);
    payload["deviation"] = qwalk::to_json(qwalk::spectrum_deviation(s, &a));
    payload["labels"] = qwalk::label_map_json(*built.layout);
    return emit(Status::ok, std::move(payload));
  }
};

// ---- fidelity -----------------------------------------------------------

struct FidelityCmd {
  GraphInput in;
  std::string data;
  std::string u;
  std::string v;
  std::optional<double> t;
  std::vector<double> scan;
  std::string out;
  std::int64_t k = 0;
  std::int64_t m = 1;

  int run() const {
    if (t.has_value() == !scan.empty()) throw UsageError("give exactly one of --t or --scan");
    if (!scan.empty() && (scan[2] < 2 || scan[2] != std::floor(scan[2]))) {
      throw UsageError("--scan steps must be an integer >= 2");
    }
    if (!data.empty()) return run_data();
    const auto built = in.build();
    const auto s = qwalk::eigendecompose(built.graph.adjacency());
    const auto iu = parse_vertex(u, built.layout, built.graph.order());
    const auto iv = parse_vertex(v, built.layout, built.graph.order());
    Json payload{{"u", vertex_json(iu, built.layout)}, {"v", vertex_json(iv, built.layout)},
                 {"source", "spectral decomposition"}};
    if (t) {
      payload["t"] = *t;
      payload["amplitude"] = qwalk::amplitude_json(qwalk::transition_entry(s, *t, iu, iv));
      return emit(Status::ok, std::move(payload));
    }
    const auto curve = qwalk::fidelity_scan(s, iu, iv, scan[0], scan[1], static_cast<std::size_t>(scan[2]));
    return finish_scan(curve, std::move(payload));
  }

  int run_data() const {
    if (in.given()) throw UsageError("--data conflicts with graph inputs");
    qwalk::BaseSpectralData d;
    try {
      d = qwalk::base_data_from_json(Json::parse(read_file(data)));
    } catch (const Json::parse_error& e) {
      throw qwalk::ParseError(e.what());
    }
    if (m < 1 || k < 0) throw UsageError("--m must be >= 1 and --k >= 0");
    auto base_vertex = [&](const std::string& text) {
      if (text.rfind("v:", 0) == 0) {
        const auto label = qwalk::parse_corona_label(text);
        if (!label.is_base_copy()) throw UsageError("spectral data covers base copies only");
        if (label.base_vertex >= d.n) throw UsageError("unknown label '" + text + "'");
        return label.base_vertex;
      }
      return parse_vertex(text, std::nullopt, d.n);
    };
    const auto iu = base_vertex(u);
    const auto iv = base_vertex(v);
    const auto mu = static_cast<std::size_t>(m);
    Json payload{{"u", qwalk::to_string(qwalk::CoronaLabel{iu, 0})},
                 {"v", qwalk::to_string(qwalk::CoronaLabel{iv, 0})},
                 {"k", k},
                 {"m", m},
                 {"source", "closed-form transfer entry"}};
    if (t) {
      payload["t"] = *t;
      payload["amplitude"] = qwalk::amplitude_json(qwalk::corona_transfer_entry(d, k, mu, *t, iu, iv));
      return emit(Status::ok, std::move(payload));
    }
    const auto steps = static_cast<std::size_t>(scan[2]);
    if (!(scan[0] < scan[1])) throw qwalk::ParameterError("fidelity scan needs t_min < t_max");
    qwalk::AmplitudeCurve curve;
    const double h = (scan[1] - scan[0]) / static_cast<double>(steps - 1);
    curve.max_fidelity = -1.0;
    for (std::size_t i = 0; i < steps; ++i) {
      const double ti = i + 1 == steps ? scan[1] : scan[0] + h * static_cast<double>(i);
      const auto z = qwalk::corona_transfer_entry(d, k, mu, ti, iu, iv);
      curve.times.push_back(ti);
      curve.amplitudes.push_back(z);
      curve.fidelities.push_back(std::abs(z));
      if (std::abs(z) > curve.max_fidelity) {
        curve.max_fidelity = std::abs(z);
        curve.argmax_time = ti;
      }
    }
    return finish_scan(curve, std::move(payload));
  }

  int finish_scan(const qwalk::AmplitudeCurve& curve, Json payload) const {
    if (out.empty()) throw UsageError("--scan needs --out for the CSV curve");
    std::ofstream file(out);
    if (!file) throw UsageError("cannot write '" + out + "'");
    qwalk::write_curve_csv(file, curve);
    payload["scan"] = {{"t_min", scan[0]}, {"t_max", scan[1]}, {"steps", curve.times.size()},
                       {"csv", out}, {"argmax_time", curve.argmax_time},
                       {"max_fidelity", curve.max_fidelity}};
    return emit(Status::ok, std::move(payload));
  }
};

// ---- certify ------------------------------------------------------------

struct CertifyCmd {
  GraphInput in;
  std::string data;
  std::string mode;
  std::string u;
  std::string v;
  double eps = 0.01;
  std::int64_t lmax = 100'000;
  std::int64_t lcap = 10'000'000;
  std::optional<std::int64_t> g;
  bool assume_pst = false;
  bool probe = false;

  int run() const {
    const double tol = recognition_tolerance();
    if (mode == "periodic") return periodic(tol);
    if (mode == "pst") return pst(tol);
    if (mode == "pgst") return pgst();
    throw UsageError("unknown certify mode '" + mode + "'");
  }

  int periodic(double tol) const {
    const auto built = in.build();
    const auto s = qwalk::eigendecompose(built.graph.adjacency());
    const auto iu = parse_vertex(u, built.layout, built.graph.order());
    auto report = qwalk::is_periodic_vertex(s, iu, tol);
    Json payload = qwalk::to_json(report);
    payload["vertex"] = vertex_json(iu, built.layout);
    if (built.spec) payload["corona"] = corona_evidence(*built.spec, built.layout->label(iu), tol);
    if (probe) {
      const auto p = qwalk::periodicity_probe(s, iu);
      payload["probe"] = {{"horizon", p.horizon}, {"step", p.step}, {"threshold", p.threshold},
                          {"max_after_dip", p.max_after_dip},
                          {"return_time", p.return_time ? Json(*p.return_time) : Json(nullptr)}};
    }
    const auto status = report.verdict == qwalk::Verdict::inconclusive ? Status::inconclusive : Status::ok;
    return emit(status, std::move(payload));
  }

  /// Base-level criteria for the base vertex under `label`, when the corona
  /// meets the closed-form hypotheses.
  static Json corona_evidence(const qwalk::CoronaSpec& spec, const qwalk::CoronaLabel& label,
                              double tol) {
    qwalk::RegularCoronaParams p;
    try {
      p = qwalk::validate_regular_corona(spec, 2);
    } catch (const qwalk::Error& e) {
      return {{"applicable", false}, {"reason", e.what()}};
    }
    const auto gs = qwalk::eigendecompose(spec.base.adjacency());
    const auto supp = qwalk::support_values(gs, label.base_vertex);
    const auto r = static_cast<std::int64_t>(p.r);
    const auto k = static_cast<std::int64_t>(p.k);
    Json j{{"applicable", true}, {"base_vertex", label.base_vertex}, {"base_support", supp},
           {"r", p.r}, {"k", p.k}, {"m", p.m}, {"n", p.n}};
    j["base_copy"] = qwalk::to_json(qwalk::corona_base_periodicity(supp, r, k, p.m, p.n, tol));
    j["bounds"] = qwalk::to_json(qwalk::necessary_bound_check(supp, r, k, p.m, p.n, tol));
    j["gap"] = qwalk::to_json(qwalk::gap_non_periodicity(supp, r, k, p.n));
    return j;
  }

  int pst(double tol) const {
    const auto built = in.build();
    const auto s = qwalk::eigendecompose(built.graph.adjacency());
    const auto iu = parse_vertex(u, built.layout, built.graph.order());
    const auto iv = parse_vertex(v, built.layout, built.graph.order());
    if (iu == iv) throw UsageError("pst needs two distinct vertices");
    const auto cert = qwalk::certify_pst(s, iu, iv, tol);
    Json payload = qwalk::to_json(cert);
    payload["u"] = vertex_json(iu, built.layout);
    payload["v"] = vertex_json(iv, built.layout);
    return emit(cert.inconclusive ? Status::inconclusive : Status::ok, std::move(payload));
  }

  int pgst() const {
    qwalk::BaseSpectralData d;
    std::size_t iu = 0;
    std::size_t iv = 0;
    std::int64_t gg = 0;
    if (!data.empty()) {
      if (in.given()) throw UsageError("--data conflicts with graph inputs");
      try {
        d = qwalk::base_data_from_json(Json::parse(read_file(data)));
      } catch (const Json::parse_error& e) {
        throw qwalk::ParseError(e.what());
      }
      iu = parse_vertex(u, std::nullopt, d.n);
      iv = parse_vertex(v, std::nullopt, d.n);
      if (!g) throw UsageError("--g is required with --data");
      gg = *g;
    } else if (in.is_corona()) {
      // Accept K_2 o K_1 style input: use its base graph with base-copy labels.
      const auto spec = in.corona_spec();
      const auto p = qwalk::validate_regular_corona(spec, 2);
      if (p.m != 1) throw qwalk::PreconditionError("PGST constructions need K_1 satellites");
      const qwalk::CoronaLayout layout(spec);
      auto base_of = [&](const std::string& text) {
        const auto label = layout.label(parse_vertex(text, layout, layout.order()));
        if (!label.is_base_copy()) throw UsageError("PGST is stated for base copies only");
        return label.base_vertex;
      };
      iu = base_of(u);
      iv = base_of(v);
      std::tie(d, gg) = from_graph(spec.base, iu, iv);
    } else if (!in.graph.empty()) {
      const auto base = parse_graph_spec(in.graph);
      iu = parse_vertex(u, std::nullopt, base.order());
      iv = parse_vertex(v, std::nullopt, base.order());
      std::tie(d, gg) = from_graph(base, iu, iv);
    } else {
      throw UsageError("pgst needs --data, --graph (base G) or a corona input");
    }
    qwalk::PgstOptions opt;
    opt.l_max = lmax;
    opt.l_cap = std::max(lcap, lmax);
    opt.assume_pst = assume_pst;
    const auto w = qwalk::pgst_witness_time(d, iu, iv, gg, eps, opt);
    Json payload = qwalk::to_json(w);
    payload["u"] = qwalk::to_string(qwalk::CoronaLabel{iu, 0});
    payload["v"] = qwalk::to_string(qwalk::CoronaLabel{iv, 0});
    if (!w.preconditions.ok) return emit(Status::precondition_failed, std::move(payload));
    return emit(w.found ? Status::ok : Status::not_found, std::move(payload));
  }

  /// Base spectral data plus g: --g if given, else from the PST certificate.
  std::pair<qwalk::BaseSpectralData, std::int64_t> from_graph(const qwalk::Graph& base, std::size_t iu,
                                                              std::size_t iv) const {
    const auto info = qwalk::analyze_structure(base);
    if (!info.is_regular || !info.is_connected) {
      throw qwalk::PreconditionError("base graph must be regular and connected");
    }
    if (iu == iv) throw UsageError("pgst needs two distinct vertices");
    const auto s = qwalk::eigendecompose(base.adjacency());
    auto d = qwalk::base_data_from_spectrum(s, {{iu, iv}});
    if (g) return {std::move(d), *g};
    const auto cert = qwalk::certify_pst(s, iu, iv);
    if (!cert.holds) {
      throw qwalk::PreconditionError("base graph has no PST between the given vertices (" +
                                     cert.failed_condition + ")");
    }
    // PST at t0 = pi/(g sqrt(Delta)) with Delta = 1 here.
    return {std::move(d), cert.g};
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum walks on vertex complemented coronas"};
  app.require_subcommand(1);

  BuildCmd build;
  auto* b = app.add_subcommand("build", "build a corona; write its edge list and label map");
  build.in.attach(b);
  b->add_option("--out", build.out, "output prefix (writes PREFIX.edges, PREFIX.labels.json)");

  SpectrumCmd spectrum;
  auto* s = app.add_subcommand("spectrum", "eigenvalues and eigenprojectors");
  spectrum.in.attach(s);
  s->add_flag("--closed-form", spectrum.closed_form, "assemble the corona spectrum from its factors");
  s->add_flag("--no-projectors", spectrum.no_projectors, "omit projector matrices");
  s->add_option("--k", spectrum.k, "expected satellite degree");
  s->add_option("--m", spectrum.m, "expected satellite order");

  FidelityCmd fidelity;
  auto* f = app.add_subcommand("fidelity", "transition amplitude H(t)_{u,v}");
  fidelity.in.attach(f);
  f->add_option("--data", fidelity.data, "base spectral data JSON (closed-form evaluation)");
  f->add_option("--u", fidelity.u, "source vertex (index or v:i[/w:j])")->required();
  f->add_option("--v", fidelity.v, "target vertex")->required();
  f->add_option("--t", fidelity.t, "single time");
  f->add_option("--scan", fidelity.scan, "t_min t_max steps")->expected(3);
  f->add_option("--out", fidelity.out, "CSV output for --scan");
  f->add_option("--k", fidelity.k, "satellite degree for --data");
  f->add_option("--m", fidelity.m, "satellite order for --data");

  CertifyCmd certify;
  auto* c = app.add_subcommand("certify", "periodicity, PST and PGST verdicts");
  certify.in.attach(c);
  c->add_option("mode", certify.mode, "periodic | pst | pgst")
      ->required()
      ->check(CLI::IsMember({"periodic", "pst", "pgst"}));
  c->add_option("--data", certify.data, "base spectral data JSON (pgst)");
  c->add_option("--u", certify.u, "vertex")->required();
  c->add_option("--v", certify.v, "second vertex (pst, pgst)");
  c->add_option("--eps", certify.eps, "PGST fidelity target 1 - eps");
  c->add_option("--lmax", certify.lmax, "initial Kronecker scan bound");
  c->add_option("--lcap", certify.lcap, "largest Kronecker scan bound after doubling");
  c->add_option("--g", certify.g, "PST in the base graph at time pi/g");
  c->add_flag("--assume-pst", certify.assume_pst, "trust base PST instead of checking it");
  c->add_flag("--probe", certify.probe, "add a numeric return-time probe (periodic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return emit(Status::usage, {{"error", e.what()}});
  }

  try {
    if (*b) return build.run();
    if (*s) return spectrum.run();
    if (*f) return fidelity.run();
    if ((certify.mode == "pst" || certify.mode == "pgst") && certify.v.empty()) {
      throw UsageError(certify.mode + " needs --v");
    }
    return certify.run();
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return emit(Status::usage, {{"error", e.what()}});
  } catch (const qwalk::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return emit(Status::usage, {{"error", e.what()}});
  } catch (const qwalk::SpecError& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return emit(Status::usage, {{"error", e.what()}});
  } catch (const qwalk::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return emit(Status::usage, {{"error", e.what()}});
  } catch (const qwalk::PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return emit(Status::precondition_failed, {{"error", e.what()}});
  } catch (const qwalk::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return emit(Status::precondition_failed, {{"error", e.what()}});
  } catch (const qwalk::FactorizationLimitError& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return emit(Status::inconclusive, {{"error", e.what()}});
  } catch (const qwalk::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return emit(Status::inconclusive, {{"error", e.what()}});
  }
}
