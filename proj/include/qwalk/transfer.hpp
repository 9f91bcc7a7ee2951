#ifndef QWALK_TRANSFER_HPP
#define QWALK_TRANSFER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qwalk/closed_form.hpp"
#include "qwalk/corona.hpp"
#include "qwalk/error.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/number_theory.hpp"
#include "qwalk/spectral.hpp"

namespace qwalk {

/// Machine-readable names of the decision rules, as they appear in the JSON
/// "criterion" field.
namespace criterion {
inline constexpr std::string_view integer_spectrum = "integer-spectrum";
inline constexpr std::string_view quadratic_form = "quadratic-form";
inline constexpr std::string_view periodicity = "periodicity-criterion";
inline constexpr std::string_view corona_integer = "lemma-4.2a";
inline constexpr std::string_view corona_radical = "lemma-4.2b";
inline constexpr std::string_view bounds = "corollary-4.3";
inline constexpr std::string_view complete_satellites = "corollary-4.4";
inline constexpr std::string_view gap_exact = "theorem-4.5";
inline constexpr std::string_view gap_pairs = "corollary-4.6a";
inline constexpr std::string_view gap_perron = "corollary-4.6b";
inline constexpr std::string_view pst = "pst-characterization";
inline constexpr std::string_view pgst_any_g = "theorem-4.8";
inline constexpr std::string_view pgst_zero_in_support = "theorem-4.9";
inline constexpr std::string_view none = "none";
}  // namespace criterion

enum class Verdict { periodic, not_periodic, inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::periodic: return "periodic";
    case Verdict::not_periodic: return "not_periodic";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct PeriodicityReport {
  std::size_t vertex = 0;
  Verdict verdict = Verdict::inconclusive;
  std::string criterion{criterion::none};
  std::string detail;
  std::vector<double> support;
  std::optional<QuadraticClass> quadratic;
  /// Named numbers behind the verdict (offending eigenvalue, radicand, Delta, ...).
  std::map<std::string, double> evidence;
  /// Set when the restricted and the exhaustive Delta searches disagree.
  bool anomaly = false;
};

/// Periodicity of u from its eigenvalue support: periodic iff the support is
/// all integers or all (a + b sqrt(Delta)) / 2 with a common a and Delta.
inline PeriodicityReport is_periodic_vertex(const Spectrum& s, std::size_t u,
                                            double tol = kRecognizeTolerance,
                                            double support_tol = kSupportTolerance) {
  PeriodicityReport rep;
  rep.vertex = u;
  rep.support = support_values(s, u, support_tol);
  double radius = 0.0;
  for (double x : s.eigenvalues) radius = std::max(radius, std::abs(x));
  // Conjugates of support eigenvalues are eigenvalues too, so |a| <= 2 rho.
  const auto a_bound = 2 * static_cast<std::int64_t>(std::ceil(radius)) + 2;
  auto cls = classify_quadratic(rep.support, tol, kDeltaMax, a_bound);
  switch (cls.kind) {
    case QuadraticClass::Kind::all_integer:
      rep.verdict = Verdict::periodic;
      rep.criterion = criterion::integer_spectrum;
      rep.detail = "every eigenvalue in the support is an integer";
      break;
    case QuadraticClass::Kind::quadratic:
      rep.verdict = Verdict::periodic;
      rep.criterion = criterion::quadratic_form;
      rep.detail = "support is (a + b sqrt(Delta))/2 with a = " + std::to_string(cls.a) +
                   ", Delta = " + std::to_string(cls.delta);
      rep.evidence["a"] = static_cast<double>(cls.a);
      rep.evidence["delta"] = static_cast<double>(cls.delta);
      break;
    case QuadraticClass::Kind::unclassifiable:
      rep.criterion = criterion::periodicity;
      rep.verdict = cls.reason == QuadraticClass::Reason::refuted ? Verdict::not_periodic
                                                                  : Verdict::inconclusive;
      rep.detail = cls.detail;
      break;
  }
  rep.quadratic = std::move(cls);
  return rep;
}

namespace detail {

inline std::uint64_t checked_u64(unsigned __int128 x, const char* what) {
  if (x > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max())) {
    throw ParameterError(std::string(what) + " exceeds 2^63-1");
  }
  return static_cast<std::uint64_t>(x);
}

/// (x)^2 + 4 m f^2 with x an integer.
inline std::uint64_t radicand(std::int64_t x, std::uint64_t m, std::uint64_t f) {
  using wide = unsigned __int128;
  const auto ax = static_cast<wide>(x < 0 ? -static_cast<wide>(x) : static_cast<wide>(x));
  return checked_u64(ax * ax + wide{4} * m * f * f, "radicand");
}

/// Support values other than r.
inline std::vector<double> non_perron(const std::vector<double>& supp, double r, double tol) {
  std::vector<double> out;
  for (double x : supp) {
    if (std::abs(x - r) > tol) out.push_back(x);
  }
  return out;
}

inline void require_corona_numbers(std::int64_t r, std::int64_t k, std::uint64_t m, std::uint64_t n) {
  if (n < 2) throw PreconditionError("base graph needs n >= 2 vertices");
  if (m < 1) throw PreconditionError("satellites need m >= 1 vertices");
  if (r < 0 || k < 0) throw PreconditionError("degrees must be nonnegative");
}

/// Checks a fixed Delta for the r = k case: every lambda - k is b sqrt(Delta)
/// and b^2 + 4m/Delta is a square. Returns the first failing lambda.
inline std::optional<double> radical_case_failure(const std::vector<double>& lambdas,
                                                  std::int64_t k, std::uint64_t m,
                                                  std::uint64_t n, std::uint64_t delta,
                                                  double tol) {
  using wide = unsigned __int128;
  const wide perron = wide{4} * m * (n - 1) * (n - 1);
  if (perron % delta != 0 || !is_perfect_square(checked_u64(perron / delta, "radicand"))) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (m % delta != 0) return std::numeric_limits<double>::quiet_NaN();
  const double root = std::sqrt(static_cast<double>(delta));
  for (double lambda : lambdas) {
    const auto b = recognize_integer((lambda - static_cast<double>(k)) / root, tol);
    if (!b) return lambda;
    if (!is_perfect_square(radicand(*b, m / delta, 1))) return lambda;
  }
  return std::nullopt;
}

}  // namespace detail

/// Periodicity of the base copy (v,0) decided from supp_G(v) alone.
///
/// r != k: every lambda - k and both radicals must be integers.
/// r == k: everything must be an integer multiple of one sqrt(Delta). The
/// Perron radical 2(n-1) sqrt(m) forces Delta = squarefree(m); an exhaustive
/// search over Delta <= `delta_fallback` runs alongside and any disagreement
/// sets `anomaly`.
inline PeriodicityReport corona_base_periodicity(const std::vector<double>& supp, std::int64_t r,
                                                 std::int64_t k, std::uint64_t m, std::uint64_t n,
                                                 double tol = kRecognizeTolerance,
                                                 std::uint64_t delta_fallback = 10'000) {
  detail::require_corona_numbers(r, k, m, n);
  PeriodicityReport rep;
  rep.support = supp;
  const auto lambdas = detail::non_perron(supp, static_cast<double>(r), tol);
  if (lambdas.size() == supp.size()) {
    throw PreconditionError("r = " + std::to_string(r) + " is not in the given support");
  }
  for (double x : supp) {
    if (!std::isfinite(x)) {
      rep.detail = "non-finite eigenvalue";
      return rep;
    }
  }

  if (r != k) {
    rep.criterion = criterion::corona_integer;
    const auto perron = detail::radicand(r - k, m, n - 1);
    rep.evidence["perron_radicand"] = static_cast<double>(perron);
    for (double lambda : lambdas) {
      const auto li = recognize_integer(lambda, tol);
      if (!li) {
        rep.verdict = Verdict::not_periodic;
        rep.detail = "lambda - k is not an integer for lambda = " + detail::fmt_double(lambda);
        rep.evidence["lambda"] = lambda;
        return rep;
      }
      const auto rad = detail::radicand(*li - k, m, 1);
      if (!is_perfect_square(rad)) {
        rep.verdict = Verdict::not_periodic;
        rep.detail = "(lambda - k)^2 + 4m = " + std::to_string(rad) + " is not a square for lambda = " +
                     std::to_string(*li);
        rep.evidence["lambda"] = lambda;
        rep.evidence["radicand"] = static_cast<double>(rad);
        return rep;
      }
    }
    if (!is_perfect_square(perron)) {
      rep.verdict = Verdict::not_periodic;
      rep.detail = "(r - k)^2 + 4m(n-1)^2 = " + std::to_string(perron) + " is not a square";
      return rep;
    }
    rep.verdict = Verdict::periodic;
    rep.detail = "all of lambda - k and both radicals are integers";
    return rep;
  }

  rep.criterion = criterion::corona_radical;
  const auto forced = square_free_part(m).c;
  rep.evidence["delta"] = static_cast<double>(forced);
  const auto failure = detail::radical_case_failure(lambdas, k, m, n, forced, tol);

  std::optional<std::uint64_t> found;
  for (std::uint64_t delta = 1; delta <= delta_fallback; ++delta) {
    if (square_free_part(delta).c != delta) continue;
    if (!detail::radical_case_failure(lambdas, k, m, n, delta, tol)) {
      found = delta;
      break;
    }
  }
  if (found.has_value() == failure.has_value() || (found && *found != forced)) {
    rep.anomaly = true;
    rep.evidence["fallback_delta"] = found ? static_cast<double>(*found) : 0.0;
  }

  if (!failure) {
    rep.verdict = Verdict::periodic;
    rep.detail = "all quantities are integer multiples of sqrt(" + std::to_string(forced) + ")";
  } else {
    rep.verdict = Verdict::not_periodic;
    rep.detail = "no common sqrt(Delta); Delta = " + std::to_string(forced) + " fails";
    if (!std::isnan(*failure)) {
      rep.detail += " at lambda = " + detail::fmt_double(*failure);
      rep.evidence["lambda"] = *failure;
    }
  }
  if (rep.anomaly) rep.detail += " (exhaustive Delta search disagrees)";
  return rep;
}

struct BoundCheck {
  bool passed = true;
  std::string criterion{criterion::bounds};
  std::string violated;
  std::optional<double> lambda;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Necessary conditions for (v,0) to be periodic:
/// m >= |lambda - k| + 1 for lambda in supp minus r, and m(n-1)^2 >= |r - k| + 1.
inline BoundCheck necessary_bound_check(const std::vector<double>& supp, std::int64_t r,
                                        std::int64_t k, std::uint64_t m, std::uint64_t n,
                                        double tol = kRecognizeTolerance) {
  detail::require_corona_numbers(r, k, m, n);
  BoundCheck out;
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  for (double lambda : detail::non_perron(supp, static_cast<double>(r), tol)) {
    const double rhs = std::abs(lambda - kd) + 1.0;
    if (md < rhs - tol) {
      out.passed = false;
      out.violated = "m >= |lambda - k| + 1";
      out.lambda = lambda;
      out.lhs = md;
      out.rhs = rhs;
      return out;
    }
  }
  const double n1 = static_cast<double>(n - 1);
  const double rhs = std::abs(static_cast<double>(r - k)) + 1.0;
  if (md * n1 * n1 < rhs - tol) {
    out.passed = false;
    out.violated = "m(n-1)^2 >= |r - k| + 1";
    out.lhs = md * n1 * n1;
    out.rhs = rhs;
  }
  return out;
}

struct NoPstReport {
  bool no_pst = false;
  std::string criterion{criterion::complete_satellites};
  std::size_t m = 0;
  struct VertexWitness {
    std::size_t vertex = 0;
    std::optional<double> negative_eigenvalue;
    BoundCheck bound;
  };
  std::vector<VertexWitness> vertices;
  std::string detail;
};

/// Runs the complete-satellite argument vertex by vertex: each support holds
/// a negative eigenvalue, which breaks m >= |lambda - (m-1)| + 1.
inline NoPstReport no_pst_complete_satellites(const Spectrum& g, std::size_t m,
                                              double tol = kRecognizeTolerance) {
  if (m < 1) throw ParameterError("complete satellites need m >= 1");
  const auto r = recognize_integer(g.eigenvalues.front(), tol);
  if (!r || g.multiplicities.front() != 1) {
    throw PreconditionError("base must be regular and connected");
  }
  detail::require_regular_spectrum(g, g.dim(), *r, "base graph");
  const auto k = static_cast<std::int64_t>(m) - 1;
  NoPstReport rep;
  rep.m = m;
  rep.no_pst = true;
  for (std::size_t v = 0; v < g.dim(); ++v) {
    NoPstReport::VertexWitness w;
    w.vertex = v;
    const auto supp = support_values(g, v);
    for (double x : supp) {
      if (x < -tol) {
        w.negative_eigenvalue = x;
        break;
      }
    }
    w.bound = necessary_bound_check(supp, *r, k, m, g.dim(), tol);
    if (!w.negative_eigenvalue || w.bound.passed) {
      rep.no_pst = false;
      rep.detail = "argument does not apply at vertex " + std::to_string(v);
    }
    rep.vertices.push_back(std::move(w));
  }
  if (rep.no_pst) rep.detail = "every base copy violates the bound, so no vertex is periodic";
  return rep;
}

inline NoPstReport no_pst_complete_satellites(const Graph& g, std::size_t m) {
  const auto info = analyze_structure(g);
  if (!info.is_regular || !info.is_connected) {
    throw PreconditionError("base must be regular and connected");
  }
  return no_pst_complete_satellites(eigendecompose(g.adjacency()), m);
}

struct GapResult {
  bool fired = false;
  std::string criterion{criterion::none};
  std::optional<double> lambda;
  std::optional<double> mu;
  std::optional<double> kappa;
  double gap = 0.0;
  std::string detail;
};

/// Interval tests on supp minus r:
///   0 < |lambda - k| - |mu - k| < 3, or 0 < ||r - k| - (n-1)|kappa - k|| < 3.
/// Fired means no vertex over this base vertex is periodic, whatever m is.
inline GapResult gap_non_periodicity(const std::vector<double>& supp, std::int64_t r,
                                     std::int64_t k, std::uint64_t n, double tol = 1e-9) {
  if (n < 2) throw PreconditionError("base graph needs n >= 2 vertices");
  GapResult out;
  const auto lambdas = detail::non_perron(supp, static_cast<double>(r), kRecognizeTolerance);
  if (lambdas.empty()) {
    out.detail = "support has no eigenvalue other than r";
    return out;
  }
  const double kd = static_cast<double>(k);
  for (double lambda : lambdas) {
    for (double mu : lambdas) {
      const double gap = std::abs(lambda - kd) - std::abs(mu - kd);
      if (gap > tol && gap < 3.0 - tol) {
        out.fired = true;
        out.criterion = criterion::gap_pairs;
        out.lambda = lambda;
        out.mu = mu;
        out.gap = gap;
        out.detail = "|lambda - k| - |mu - k| = " + detail::fmt_double(gap) + " lies in (0, 3)";
        return out;
      }
    }
  }
  const double rk = std::abs(static_cast<double>(r - k));
  const double n1 = static_cast<double>(n - 1);
  for (double kappa : lambdas) {
    const double gap = std::abs(rk - n1 * std::abs(kappa - kd));
    if (gap > tol && gap < 3.0 - tol) {
      out.fired = true;
      out.criterion = criterion::gap_perron;
      out.kappa = kappa;
      out.gap = gap;
      out.detail = "||r - k| - (n-1)|kappa - k|| = " + detail::fmt_double(gap) + " lies in (0, 3)";
      return out;
    }
  }
  out.detail = "no gap in (0, 3)";
  return out;
}

/// x in {sqrt(Delta), 2 sqrt(Delta)} for a square-free Delta; returns
/// (coefficient, Delta).
inline std::optional<std::pair<int, std::int64_t>> radical_gap(double x,
                                                               double tol = kRecognizeTolerance) {
  if (!(x > tol)) return std::nullopt;
  for (int coef : {1, 2}) {
    const double y = x / coef;
    const auto sq = recognize_integer(y * y, tol * std::max(1.0, y));
    if (!sq || *sq < 1) continue;
    const auto u = static_cast<std::uint64_t>(*sq);
    if (square_free_part(u).c == u) return std::make_pair(coef, *sq);
  }
  return std::nullopt;
}

/// Exact membership form of the gap tests.
inline GapResult gap_membership_non_periodicity(const std::vector<double>& supp, std::int64_t r,
                                                std::int64_t k, std::uint64_t n,
                                                double tol = kRecognizeTolerance) {
  if (n < 2) throw PreconditionError("base graph needs n >= 2 vertices");
  GapResult out;
  out.criterion = criterion::gap_exact;
  const auto lambdas = detail::non_perron(supp, static_cast<double>(r), tol);
  const double kd = static_cast<double>(k);
  auto describe = [](const std::pair<int, std::int64_t>& hit) {
    return (hit.first == 2 ? std::string("2") : std::string()) + "sqrt(" +
           std::to_string(hit.second) + ")";
  };
  for (double lambda : lambdas) {
    for (double mu : lambdas) {
      const double gap = std::abs(lambda - kd) - std::abs(mu - kd);
      if (const auto hit = radical_gap(gap, tol)) {
        out.fired = true;
        out.lambda = lambda;
        out.mu = mu;
        out.gap = gap;
        out.detail = "|lambda - k| - |mu - k| = " + describe(*hit);
        return out;
      }
    }
  }
  const double rk = std::abs(static_cast<double>(r - k));
  const double n1 = static_cast<double>(n - 1);
  for (double kappa : lambdas) {
    const double gap = std::abs(rk - n1 * std::abs(kappa - kd));
    if (const auto hit = radical_gap(gap, tol)) {
      out.fired = true;
      out.kappa = kappa;
      out.gap = gap;
      out.detail = "||r - k| - (n-1)|kappa - k|| = " + describe(*hit);
      return out;
    }
  }
  out.criterion = criterion::none;
  out.detail = "no difference of the form sqrt(Delta) or 2 sqrt(Delta)";
  return out;
}

struct PstCertificate {
  std::size_t u = 0;
  std::size_t v = 0;
  bool holds = false;
  /// True when the verdict could not be decided (search bounds hit).
  bool inconclusive = false;
  std::string criterion{criterion::pst};
  std::vector<double> support;
  std::vector<int> signs;  // aligned with support
  std::int64_t a = 0;
  std::int64_t delta = 1;
  std::vector<std::int64_t> b;  // aligned with support
  double rho = 0.0;
  std::int64_t g = 0;
  double t0 = 0.0;
  double fidelity = 0.0;
  std::string failed_condition;
};

/// Strong cospectrality, the quadratic form of supp(u), and the sign/parity
/// rule with g = gcd((rho - lambda)/sqrt(Delta)); then t0 = pi/(g sqrt(Delta)),
/// confirmed numerically.
inline PstCertificate certify_pst(const Spectrum& s, std::size_t u, std::size_t v,
                                  double tol = kRecognizeTolerance) {
  PstCertificate cert;
  cert.u = u;
  cert.v = v;
  const auto cosp = strongly_cospectral(s, u, v);
  if (!cosp.strongly_cospectral) {
    cert.failed_condition = "strong cospectrality";
    return cert;
  }
  const auto supp_idx = eigenvalue_support(s, u);
  for (auto j : supp_idx) {
    cert.support.push_back(s.eigenvalues[j]);
    const auto it = std::find_if(cosp.signs.begin(), cosp.signs.end(),
                                 [&](const auto& p) { return p.first == j; });
    cert.signs.push_back(it == cosp.signs.end() ? 0 : it->second);
  }
  double radius = 0.0;
  for (double x : s.eigenvalues) radius = std::max(radius, std::abs(x));
  const auto cls = classify_quadratic(cert.support, tol, kDeltaMax,
                                      2 * static_cast<std::int64_t>(std::ceil(radius)) + 2);
  if (cls.kind == QuadraticClass::Kind::unclassifiable) {
    if (cls.reason == QuadraticClass::Reason::search_bound) {
      cert.inconclusive = true;
      cert.failed_condition = "unclassifiable spectrum";
    } else {
      cert.failed_condition = "quadratic form";
    }
    return cert;
  }
  cert.a = cls.a;
  cert.delta = cls.delta;
  cert.b = cls.b;
  cert.rho = *std::max_element(cert.support.begin(), cert.support.end());
  const double root = std::sqrt(static_cast<double>(cert.delta));

  std::vector<std::int64_t> steps;
  for (double lambda : cert.support) {
    const auto q = recognize_integer((cert.rho - lambda) / root, tol);
    if (!q) {
      cert.failed_condition = "(rho - lambda)/sqrt(Delta) is not an integer";
      return cert;
    }
    steps.push_back(*q);
  }
  for (auto q : steps) cert.g = std::gcd(cert.g, q);
  if (cert.g == 0) {
    cert.failed_condition = "support is a single eigenvalue";
    return cert;
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const bool even = (steps[i] / cert.g) % 2 == 0;
    if (even != (cert.signs[i] > 0)) {
      cert.failed_condition = "sign parity at eigenvalue " + detail::fmt_double(cert.support[i]);
      return cert;
    }
  }
  cert.t0 = std::numbers::pi / (static_cast<double>(cert.g) * root);
  cert.fidelity = std::abs(transition_entry(s, cert.t0, u, v));
  if (!(cert.fidelity > 1.0 - 1e-8)) {
    cert.failed_condition = "numeric fidelity at t0 is " + detail::fmt_double(cert.fidelity);
    return cert;
  }
  cert.holds = true;
  return cert;
}

struct FalsificationProbe {
  double horizon = 500.0;
  double step = 1e-3;
  double threshold = 1e-3;
  /// First time after the initial dip where |H(t)_{u,u}| > 1 - threshold.
  std::optional<double> return_time;
  double max_after_dip = 0.0;
};

/// Grid scan of |H(t)_{u,u}| on (0, horizon]. The stretch near t = 0 where
/// the amplitude has not yet dropped below 1 - threshold is skipped.
inline FalsificationProbe periodicity_probe(const Spectrum& s, std::size_t u, double horizon = 500.0,
                                            double step = 1e-3, double threshold = 1e-3) {
  if (!(horizon > 0.0 && step > 0.0)) throw ParameterError("probe needs positive horizon and step");
  FalsificationProbe p;
  p.horizon = horizon;
  p.step = step;
  p.threshold = threshold;
  const auto count = static_cast<std::size_t>(std::ceil(horizon / step));
  bool dipped = false;
  for (std::size_t i = 1; i <= count; ++i) {
    const double t = std::min(horizon, static_cast<double>(i) * step);
    const double f = std::abs(transition_entry(s, t, u, u));
    if (!dipped) {
      dipped = f <= 1.0 - threshold;
      continue;
    }
    p.max_after_dip = std::max(p.max_after_dip, f);
    if (f > 1.0 - threshold && !p.return_time) p.return_time = t;
  }
  return p;
}

enum class PgstRoute { any_g, zero_in_support, none };

inline std::string_view route_criterion(PgstRoute r) {
  switch (r) {
    case PgstRoute::any_g: return criterion::pgst_any_g;
    case PgstRoute::zero_in_support: return criterion::pgst_zero_in_support;
    case PgstRoute::none: return criterion::none;
  }
  return criterion::none;
}

struct NamedCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PgstPreconditions {
  std::size_t u = 0;
  std::size_t v = 0;
  std::int64_t g = 0;
  PgstRoute route = PgstRoute::none;
  bool ok = false;
  bool zero_in_support = false;
  std::vector<double> support;
  std::uint64_t perron_radicand = 0;
  std::vector<NamedCheck> checks;

  std::string criterion() const { return std::string(route_criterion(route)); }
};

/// Support of u read from the diagonal projector entries.
inline std::vector<double> base_support(const BaseSpectralData& data, std::size_t u,
                                        double tol = kSupportTolerance) {
  std::vector<double> out;
  for (std::size_t j = 0; j < data.eigenvalues.size(); ++j) {
    if (std::abs(data.require_entry(j, u, u)) > tol) out.push_back(data.eigenvalues[j]);
  }
  return out;
}

/// |H_G(t)_{u,v}| from the base projector entries.
inline double base_fidelity(const BaseSpectralData& data, double t, std::size_t u, std::size_t v) {
  std::complex<double> z{0.0, 0.0};
  for (std::size_t j = 0; j < data.eigenvalues.size(); ++j) {
    z += std::polar(1.0, -t * data.eigenvalues[j]) * data.require_entry(j, u, v);
  }
  return std::abs(z);
}

/// Hypotheses of the two PGST constructions on G with K_1 satellites. PST
/// in G at pi/g is checked numerically from the projector entries unless
/// `assume_pst` is set. `zero_in_support` overrides the value read from the
/// diagonal entries.
inline PgstPreconditions pgst_preconditions(const BaseSpectralData& data, std::size_t u,
                                            std::size_t v, std::int64_t g,
                                            std::optional<bool> zero_in_support = {},
                                            bool assume_pst = false,
                                            double tol = kRecognizeTolerance) {
  PgstPreconditions pre;
  pre.u = u;
  pre.v = v;
  pre.g = g;
  auto add = [&](std::string name, bool passed, std::string detail) {
    pre.checks.push_back({std::move(name), passed, std::move(detail)});
    return passed;
  };
  if (!add("n >= 2", data.n >= 2, "n = " + std::to_string(data.n))) return pre;
  if (!add("distinct vertices", u != v && u < data.n && v < data.n,
           "u = " + std::to_string(u) + ", v = " + std::to_string(v))) {
    return pre;
  }
  if (!add("g >= 1", g >= 1, "g = " + std::to_string(g))) return pre;

  bool ok = true;
  pre.support = base_support(data, u);
  bool integral = true;
  for (double x : pre.support) integral = integral && recognize_integer(x, tol).has_value();
  ok &= add("integer support", integral, "supp(u) must be integral when PST holds");

  const double t = std::numbers::pi / static_cast<double>(g);
  if (assume_pst) {
    add("pst at pi/g", true, "asserted by caller");
  } else {
    const double f = base_fidelity(data, t, u, v);
    ok &= add("pst at pi/g", f > 1.0 - 1e-8, "|H_G(pi/g)_{u,v}| = " + detail::fmt_double(f));
  }

  bool zero = false;
  for (double x : pre.support) zero = zero || std::abs(x) < tol;
  if (zero_in_support) zero = *zero_in_support;
  pre.zero_in_support = zero;

  pre.perron_radicand = detail::radicand(data.r, 1, data.n - 1);
  const bool square = is_perfect_square(pre.perron_radicand);
  ok &= add("r^2 + 4(n-1)^2 not a square", !square,
            "r^2 + 4(n-1)^2 = " + std::to_string(pre.perron_radicand));

  if (!zero) {
    pre.route = PgstRoute::any_g;
    add("route", true, "0 not in supp(u)");
  } else if (g == 2) {
    pre.route = PgstRoute::zero_in_support;
    add("route", true, "0 in supp(u) with g = 2");
  } else {
    add("route", false, "0 in supp(u) needs g = 2; no applicable theorem");
    ok = false;
  }
  pre.ok = ok;
  return pre;
}

struct PgstTarget {
  std::vector<double> lambdas;  // the eigenvalues sharing this c
  std::vector<std::uint64_t> s;
  std::uint64_t c = 1;
  double alpha = 0.0;
};

struct PgstWitness {
  PgstPreconditions preconditions;
  bool found = false;
  double eps = 0.0;
  double phase_tolerance = 0.0;
  double kronecker_tolerance = 0.0;
  std::vector<PgstTarget> targets;
  std::optional<KroneckerWitness> kronecker;
  std::int64_t l = 0;
  double time = 0.0;
  std::complex<double> amplitude{0.0, 0.0};
  double achieved_fidelity = 0.0;
  std::int64_t scanned_up_to = 0;
  /// Best fidelity seen when nothing met the target.
  double best_fidelity = 0.0;
  double best_time = 0.0;
  std::string detail;

  std::string criterion() const { return preconditions.criterion(); }
};

struct PgstOptions {
  std::int64_t l_max = 100'000;
  /// l_max is doubled on failure until it exceeds this cap.
  std::int64_t l_cap = 10'000'000;
  std::optional<bool> zero_in_support;
  bool assume_pst = false;
};

namespace detail {

/// Corona radicand of a support eigenvalue with K_1 satellites.
inline std::uint64_t pgst_radicand(const BaseSpectralData& data, double lambda) {
  const auto li = *recognize_integer(lambda);
  return li == data.r ? radicand(data.r, 1, data.n - 1) : radicand(li, 1, 1);
}

}  // namespace detail

/// Constructive witness time on G with K_1 satellites: Kronecker targets
/// sqrt(c) per distinct square-free part, alpha = -sqrt(c)/(2g) with
/// T = (4l + 2/g) pi, or alpha = -sqrt(c)/4 + 1/(2s) with T = (4l + 1) pi
/// when 0 is in the support. Every radical is post-checked at T.
inline PgstWitness pgst_witness_time(const BaseSpectralData& data, std::size_t u, std::size_t v,
                                     std::int64_t g, double eps, const PgstOptions& opt = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  if (opt.l_max < 1) throw ParameterError("l_max must be positive");
  PgstWitness w;
  w.eps = eps;
  w.preconditions = pgst_preconditions(data, u, v, g, opt.zero_in_support, opt.assume_pst);
  if (!w.preconditions.ok) {
    w.detail = "preconditions failed";
    return w;
  }
  const bool half_pi = w.preconditions.route == PgstRoute::zero_in_support;
  const double gd = static_cast<double>(g);

  std::uint64_t s_max = 1;
  for (double lambda : w.preconditions.support) {
    if (half_pi && std::abs(lambda) < kRecognizeTolerance) continue;
    const auto sf = square_free_part(detail::pgst_radicand(data, lambda));
    s_max = std::max(s_max, sf.s);
    auto it = std::find_if(w.targets.begin(), w.targets.end(),
                           [&](const PgstTarget& t) { return t.c == sf.c; });
    if (it == w.targets.end()) {
      PgstTarget t;
      t.c = sf.c;
      const double rc = std::sqrt(static_cast<double>(sf.c));
      t.alpha = half_pi ? -rc / 4.0 + 1.0 / (2.0 * static_cast<double>(sf.s)) : -rc / (2.0 * gd);
      w.targets.push_back(t);
      it = std::prev(w.targets.end());
    }
    it->lambdas.push_back(lambda);
    it->s.push_back(sf.s);
  }

  // A phase error phi per radical costs at most phi + phi^2/2 in fidelity,
  // since sum |E_uv| <= 1.
  w.phase_tolerance = std::sqrt(1.0 + 2.0 * eps) - 1.0;
  w.kronecker_tolerance =
      w.phase_tolerance / (2.0 * std::numbers::pi * static_cast<double>(s_max));
  const double cos_floor = std::cos(w.phase_tolerance);
  const double expected = half_pi ? -1.0 : 1.0;

  std::vector<double> roots;
  std::vector<double> alphas;
  for (const auto& t : w.targets) {
    roots.push_back(std::sqrt(static_cast<double>(t.c)));
    alphas.push_back(t.alpha);
  }
  auto time_of = [&](std::int64_t l) {
    const double lf = static_cast<double>(l);
    return half_pi ? (4.0 * lf + 1.0) * std::numbers::pi : (4.0 * lf + 2.0 / gd) * std::numbers::pi;
  };
  auto phases_ok = [&](double t) {
    for (double lambda : w.preconditions.support) {
      const double big = std::sqrt(static_cast<double>(detail::pgst_radicand(data, lambda)));
      if (std::abs(std::cos(big * t / 2.0) - expected) > 1.0 - cos_floor + 1e-12) return false;
    }
    return true;
  };

  std::int64_t lo = 1;
  std::int64_t hi = opt.l_max;
  while (true) {
    while (lo <= hi) {
      auto kw = roots.empty() ? std::optional<KroneckerWitness>(KroneckerWitness{lo, {}, {}, 0.0})
                              : kronecker_witness(roots, alphas, w.kronecker_tolerance, hi, lo);
      if (!kw) break;
      const double t = time_of(kw->l);
      const auto z = corona_transfer_entry(data, 0, 1, t, u, v);
      if (std::abs(z) > w.best_fidelity) {
        w.best_fidelity = std::abs(z);
        w.best_time = t;
      }
      if (phases_ok(t)) {
        w.found = true;
        w.kronecker = std::move(kw);
        w.l = w.kronecker->l;
        w.time = t;
        w.amplitude = z;
        w.achieved_fidelity = std::abs(z);
        w.scanned_up_to = w.l;
        w.detail = "witness found";
        return w;
      }
      lo = kw->l + 1;
    }
    w.scanned_up_to = hi;
    if (hi >= opt.l_cap) break;
    lo = hi + 1;
    hi = std::min(opt.l_cap, 2 * hi);
  }
  if (!roots.empty()) {
    const auto closest = kronecker_closest(roots, alphas, std::min<std::int64_t>(w.scanned_up_to, 1'000'000));
    const double t = time_of(closest.l);
    const double f = std::abs(corona_transfer_entry(data, 0, 1, t, u, v));
    if (f > w.best_fidelity) {
      w.best_fidelity = f;
      w.best_time = t;
    }
  }
  w.detail = "no witness with l <= " + std::to_string(w.scanned_up_to);
  return w;
}

}  // namespace qwalk

#endif  // QWALK_TRANSFER_HPP
