#ifndef QWALK_CLOSED_FORM_HPP
#define QWALK_CLOSED_FORM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/corona.hpp"
#include "qwalk/error.hpp"
#include "qwalk/number_theory.hpp"
#include "qwalk/spectral.hpp"

namespace qwalk {

/// Spectral data of an r-regular connected base graph G on n vertices, with
/// projector entries e_u^T E_lambda(G) e_v for selected vertex pairs only.
/// This is enough to evaluate base-copy transition amplitudes of G's corona
/// without ever forming an n x n matrix.
struct BaseSpectralData {
  using VertexPair = std::pair<std::size_t, std::size_t>;

  std::int64_t r = 0;
  std::size_t n = 0;
  std::vector<double> eigenvalues;          // r = eigenvalues[0] > eigenvalues[1] > ...
  std::vector<std::size_t> multiplicities;  // empty when unknown
  /// Keyed by (min(u,v), max(u,v)); one slot per eigenvalue, empty when not supplied.
  std::map<VertexPair, std::vector<std::optional<double>>> projector_entries;

  static VertexPair key(std::size_t u, std::size_t v) { return {std::min(u, v), std::max(u, v)}; }

  bool has_pair(std::size_t u, std::size_t v) const {
    return projector_entries.count(key(u, v)) != 0;
  }

  std::optional<double> entry(std::size_t j, std::size_t u, std::size_t v) const {
    const auto it = projector_entries.find(key(u, v));
    if (it == projector_entries.end() || j >= it->second.size()) return std::nullopt;
    return it->second[j];
  }

  double require_entry(std::size_t j, std::size_t u, std::size_t v) const {
    if (const auto x = entry(j, u, v)) return *x;
    throw DataError("missing projector entry for eigenvalue " +
                    detail::fmt_double(eigenvalues.at(j)) + " at vertex pair (" +
                    std::to_string(u) + "," + std::to_string(v) + ")");
  }

  void set_entry(std::size_t j, std::size_t u, std::size_t v, double value) {
    auto& slots = projector_entries[key(u, v)];
    slots.resize(eigenvalues.size());
    slots.at(j) = value;
  }

  /// Checks the ordering, the Perron eigenvalue and, for every complete
  /// vertex pair, sum_j e_u^T E_j e_v = delta_{uv}.
  void validate(double tol = 1e-8) const {
    if (n < 2) throw PreconditionError("base graph needs n >= 2 vertices");
    if (eigenvalues.empty()) throw DataError("no base eigenvalues given");
    if (std::abs(eigenvalues.front() - static_cast<double>(r)) > tol) {
      throw DataError("largest eigenvalue " + detail::fmt_double(eigenvalues.front()) +
                      " differs from the degree r = " + std::to_string(r));
    }
    for (std::size_t j = 1; j < eigenvalues.size(); ++j) {
      if (!(eigenvalues[j] < eigenvalues[j - 1])) {
        throw DataError("eigenvalues must be strictly decreasing");
      }
    }
    if (!multiplicities.empty()) {
      if (multiplicities.size() != eigenvalues.size()) {
        throw DataError("eigenvalue and multiplicity lists differ in length");
      }
      if (multiplicities.front() != 1) {
        throw PreconditionError("Perron eigenvalue must be simple (connected base)");
      }
      std::size_t total = 0;
      for (auto s : multiplicities) total += s;
      if (total != n) {
        throw DataError("multiplicities sum to " + std::to_string(total) + ", expected n = " +
                        std::to_string(n));
      }
    }
    for (const auto& [pair, slots] : projector_entries) {
      if (pair.second >= n) throw DataError("projector entry vertex out of range");
      if (slots.size() != eigenvalues.size()) throw DataError("projector entry list has wrong length");
      if (!std::all_of(slots.begin(), slots.end(), [](const auto& x) { return x.has_value(); })) {
        continue;
      }
      double sum = 0.0;
      for (const auto& x : slots) sum += *x;
      const double expected = pair.first == pair.second ? 1.0 : 0.0;
      if (std::abs(sum - expected) > tol) {
        throw DataError("projector entries of (" + std::to_string(pair.first) + "," +
                        std::to_string(pair.second) + ") sum to " + detail::fmt_double(sum));
      }
    }
  }
};

/// Extracts BaseSpectralData from a full numerical spectrum of a regular
/// connected graph, keeping the requested vertex pairs (and their diagonals).
inline BaseSpectralData base_data_from_spectrum(
    const Spectrum& g, const std::vector<BaseSpectralData::VertexPair>& pairs) {
  BaseSpectralData data;
  data.n = g.dim();
  const auto r = recognize_integer(g.eigenvalues.front());
  if (!r) throw PreconditionError("largest eigenvalue is not an integer; base is not regular");
  data.r = *r;
  data.eigenvalues = g.eigenvalues;
  for (auto& x : data.eigenvalues) {
    if (const auto i = recognize_integer(x, 1e-9)) x = static_cast<double>(*i);
  }
  data.multiplicities = g.multiplicities;
  auto add = [&](std::size_t u, std::size_t v) {
    if (data.has_pair(u, v)) return;
    for (std::size_t j = 0; j < g.distinct(); ++j) data.set_entry(j, u, v, g.entry(j, u, v));
  };
  for (const auto& [u, v] : pairs) {
    if (u >= data.n || v >= data.n) throw ParameterError("vertex pair out of range");
    add(u, v);
    add(u, u);
    add(v, v);
  }
  data.validate();
  return data;
}

enum class CoronaBranch {
  satellite_degree,      // k, from disconnected satellites
  satellite_eigenvalue,  // mu != k from the satellites
  base_eigenvalue,       // lambda_+-, lambda != r
  perron,                // r_+-
};

inline const char* branch_tag(CoronaBranch b) {
  switch (b) {
    case CoronaBranch::satellite_degree: return "a";
    case CoronaBranch::satellite_eigenvalue: return "b";
    case CoronaBranch::base_eigenvalue: return "c";
    case CoronaBranch::perron: return "d";
  }
  return "?";
}

/// One eigenvalue of the corona with its multiplicity and origin.
struct CoronaEigenvalue {
  double value = 0.0;
  std::size_t multiplicity = 0;
  CoronaBranch branch = CoronaBranch::satellite_eigenvalue;
  double source = 0.0;  // the lambda of G or mu of H it came from
  int sign = 0;         // +1 / -1 for the two roots of a base eigenvalue, 0 otherwise
};

/// The two corona eigenvalues lambda_+- = (lambda + k +- Lambda) / 2 spawned by
/// one base eigenvalue, where Lambda = sqrt((lambda - k)^2 + 4m) for lambda != r
/// and sqrt((r - k)^2 + 4m(n-1)^2) for the Perron eigenvalue.
struct EigenvaluePair {
  double lambda = 0.0;
  std::size_t multiplicity = 0;
  double plus = 0.0;
  double minus = 0.0;
  double big_lambda = 0.0;
};

struct CoronaEigenvalueSet {
  std::int64_t r = 0;
  std::int64_t k = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<CoronaEigenvalue> mu_branch;
  std::vector<EigenvaluePair> lambda_pm;
  EigenvaluePair r_pm;

  std::vector<CoronaEigenvalue> all() const {
    std::vector<CoronaEigenvalue> out = mu_branch;
    for (const auto& p : lambda_pm) {
      out.push_back({p.plus, p.multiplicity, CoronaBranch::base_eigenvalue, p.lambda, +1});
      out.push_back({p.minus, p.multiplicity, CoronaBranch::base_eigenvalue, p.lambda, -1});
    }
    out.push_back({r_pm.plus, 1, CoronaBranch::perron, r_pm.lambda, +1});
    out.push_back({r_pm.minus, 1, CoronaBranch::perron, r_pm.lambda, -1});
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.value > b.value; });
    return out;
  }

  std::size_t total_multiplicity() const {
    std::size_t total = 2;
    for (const auto& e : mu_branch) total += e.multiplicity;
    for (const auto& p : lambda_pm) total += 2 * p.multiplicity;
    return total;
  }

  /// Every eigenvalue repeated by multiplicity, decreasing.
  std::vector<double> multiset() const {
    std::vector<double> out;
    for (const auto& e : all()) out.insert(out.end(), e.multiplicity, e.value);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }
};

namespace detail {

/// Spectrum of a k-regular graph on m vertices, validated from the
/// eigenvalues alone: the mean of lambda^2 is the average degree, which
/// equals the largest eigenvalue exactly when the graph is regular.
inline void require_regular_spectrum(const Spectrum& s, std::size_t m, std::int64_t k,
                                     const std::string& name, double tol = 1e-8) {
  if (s.dim() != m) {
    throw PreconditionError(name + " has " + std::to_string(s.dim()) + " vertices, expected " +
                            std::to_string(m));
  }
  double second_moment = 0.0;
  for (std::size_t j = 0; j < s.distinct(); ++j) {
    second_moment += static_cast<double>(s.multiplicities[j]) * s.eigenvalues[j] * s.eigenvalues[j];
  }
  const double avg_degree = second_moment / static_cast<double>(m);
  if (std::abs(s.eigenvalues.front() - static_cast<double>(k)) > tol ||
      std::abs(avg_degree - static_cast<double>(k)) > tol * std::max(1.0, avg_degree)) {
    throw PreconditionError(name + " is not " + std::to_string(k) + "-regular");
  }
}

struct BaseEigenView {
  std::int64_t r;
  std::size_t n;
  const std::vector<double>& eigenvalues;
  const std::vector<std::size_t>& multiplicities;
};

inline CoronaEigenvalueSet corona_eigenvalues_impl(const BaseEigenView& base,
                                                   const std::vector<Spectrum>& sats,
                                                   std::int64_t k, std::size_t m, double tol) {
  if (base.n < 2) throw PreconditionError("base graph needs n >= 2 vertices");
  if (m < 1) throw PreconditionError("satellites need m >= 1 vertices");
  if (k < 0) throw PreconditionError("satellite degree k must be nonnegative");
  if (base.multiplicities.size() != base.eigenvalues.size()) {
    throw DataError("base multiplicities are required");
  }
  if (std::abs(base.eigenvalues.front() - static_cast<double>(base.r)) > tol ||
      base.multiplicities.front() != 1) {
    throw PreconditionError("base must be r-regular and connected (simple Perron eigenvalue r)");
  }
  if (sats.size() != base.n) {
    throw SpecError("expected " + std::to_string(base.n) + " satellite spectra, got " +
                    std::to_string(sats.size()));
  }

  CoronaEigenvalueSet out;
  out.r = base.r;
  out.k = k;
  out.n = base.n;
  out.m = m;
  const double kd = static_cast<double>(k);
  const double md = static_cast<double>(m);

  std::size_t k_total = 0;
  std::vector<std::pair<double, std::size_t>> mus;
  for (std::size_t i = 0; i < sats.size(); ++i) {
    const auto& s = sats[i];
    require_regular_spectrum(s, m, k, "H_" + std::to_string(i));
    for (std::size_t j = 0; j < s.distinct(); ++j) {
      if (std::abs(s.eigenvalues[j] - kd) < tol) {
        k_total += s.multiplicities[j];
        continue;
      }
      auto it = std::find_if(mus.begin(), mus.end(),
                             [&](const auto& p) { return std::abs(p.first - s.eigenvalues[j]) < tol; });
      if (it == mus.end()) mus.emplace_back(s.eigenvalues[j], s.multiplicities[j]);
      else it->second += s.multiplicities[j];
    }
  }
  if (k_total < base.n) {
    throw std::logic_error("each regular satellite must contribute its degree k at least once");
  }
  if (k_total > base.n) {
    out.mu_branch.push_back({kd, k_total - base.n, CoronaBranch::satellite_degree, kd, 0});
  }
  for (const auto& [mu, mult] : mus) {
    out.mu_branch.push_back({mu, mult, CoronaBranch::satellite_eigenvalue, mu, 0});
  }

  for (std::size_t j = 1; j < base.eigenvalues.size(); ++j) {
    const double lambda = base.eigenvalues[j];
    const double big = std::sqrt((lambda - kd) * (lambda - kd) + 4.0 * md);
    out.lambda_pm.push_back({lambda, base.multiplicities[j], 0.5 * (lambda + kd + big),
                             0.5 * (lambda + kd - big), big});
  }
  const double rd = static_cast<double>(base.r);
  const double n1 = static_cast<double>(base.n - 1);
  const double big_r = std::sqrt((rd - kd) * (rd - kd) + 4.0 * md * n1 * n1);
  out.r_pm = {rd, 1, 0.5 * (rd + kd + big_r), 0.5 * (rd + kd - big_r), big_r};
  return out;
}

/// E (x) j_m^T  (n x nm) scaled by `scale`.
inline Eigen::MatrixXd kron_row_ones(const Eigen::MatrixXd& e, Eigen::Index m, double scale) {
  const auto n = e.rows();
  Eigen::MatrixXd out(n, e.cols() * m);
  for (Eigen::Index j = 0; j < e.cols(); ++j) {
    for (Eigen::Index w = 0; w < m; ++w) out.col(j * m + w) = scale * e.col(j);
  }
  return out;
}

/// E (x) J_m  (nm x nm) scaled by `scale`.
inline Eigen::MatrixXd kron_all_ones(const Eigen::MatrixXd& e, Eigen::Index m, double scale) {
  const auto n = e.rows();
  Eigen::MatrixXd out(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.block(i * m, j * m, m, m).setConstant(scale * e(i, j));
    }
  }
  return out;
}

/// Corona projector built from a base projector E:
///   c * [[E, o E (x) j^T], [o E^T (x) j, o^2 E (x) J_m]]
inline Eigen::MatrixXd lifted_projector(const Eigen::MatrixXd& e, Eigen::Index m, double coef,
                                        double off) {
  const auto n = e.rows();
  Eigen::MatrixXd p(n + n * m, n + n * m);
  p.topLeftCorner(n, n) = coef * e;
  p.topRightCorner(n, n * m) = kron_row_ones(e, m, coef * off);
  p.bottomLeftCorner(n * m, n) = p.topRightCorner(n, n * m).transpose();
  p.bottomRightCorner(n * m, n * m) = kron_all_ones(e, m, coef * off * off);
  return p;
}

}  // namespace detail

/// Corona eigenvalues from base spectral data and the satellite spectra.
inline CoronaEigenvalueSet corona_eigenvalues(const BaseSpectralData& base,
                                              const std::vector<Spectrum>& satellites,
                                              std::int64_t k, std::size_t m, double tol = 1e-8) {
  return detail::corona_eigenvalues_impl({base.r, base.n, base.eigenvalues, base.multiplicities},
                                         satellites, k, m, tol);
}

/// Corona eigenvalues from the full base spectrum.
inline CoronaEigenvalueSet corona_eigenvalues(const Spectrum& base,
                                              const std::vector<Spectrum>& satellites,
                                              std::int64_t k, std::size_t m, double tol = 1e-8) {
  const auto r = recognize_integer(base.eigenvalues.front());
  if (!r) throw PreconditionError("largest base eigenvalue is not an integer; base is not regular");
  detail::require_regular_spectrum(base, base.dim(), *r, "base graph");
  return detail::corona_eigenvalues_impl({*r, base.dim(), base.eigenvalues, base.multiplicities},
                                         satellites, k, m, tol);
}

/// Satellite spectra of a corona spec, computed numerically.
inline std::vector<Spectrum> satellite_spectra(const CoronaSpec& spec) {
  std::vector<Spectrum> out;
  out.reserve(spec.satellites.size());
  for (const auto& h : spec.satellites) out.push_back(eigendecompose(h.adjacency()));
  return out;
}

/// Convenience overload: validates the corona hypotheses on the graphs, then
/// applies the closed form to numerically computed factor spectra.
inline CoronaEigenvalueSet corona_eigenvalues(const CoronaSpec& spec) {
  const auto p = validate_regular_corona(spec, 2);
  return corona_eigenvalues(eigendecompose(spec.base.adjacency()), satellite_spectra(spec),
                            static_cast<std::int64_t>(p.k), p.m);
}

/// Eigenprojectors of the corona assembled block-wise from the base and
/// satellite projectors, in CoronaLayout flat order. Branches that land on
/// numerically equal eigenvalues are merged into one distinct eigenvalue.
inline Spectrum corona_eigenprojectors(const Spectrum& base, const std::vector<Spectrum>& satellites,
                                       std::int64_t k, std::size_t m,
                                       std::optional<double> group_tol = {}) {
  const auto set = corona_eigenvalues(base, satellites, k, m);
  const auto n = static_cast<Eigen::Index>(base.dim());
  const auto mi = static_cast<Eigen::Index>(m);
  const auto total = n + n * mi;
  const double kd = static_cast<double>(k);
  const double md = static_cast<double>(m);
  const double n1 = static_cast<double>(base.dim() - 1);
  const double norm_bound =
      std::max(static_cast<double>(set.r) + n1 * md, kd + n1);
  const double tol = group_tol.value_or(1e-9 * std::max(1.0, norm_bound));

  std::vector<std::pair<double, std::pair<std::size_t, Eigen::MatrixXd>>> pieces;

  // Satellite eigenvalues: block diagonal E_mu(H_l) - [mu = k] J_m / m.
  for (std::size_t l = 0; l < satellites.size(); ++l) {
    const auto& h = satellites[l];
    const auto offset = n + static_cast<Eigen::Index>(l) * mi;
    for (std::size_t j = 0; j < h.distinct(); ++j) {
      const bool is_degree = std::abs(h.eigenvalues[j] - kd) < 1e-8;
      const std::size_t mult = h.multiplicities[j] - (is_degree ? 1 : 0);
      if (mult == 0) continue;
      Eigen::MatrixXd p = Eigen::MatrixXd::Zero(total, total);
      p.block(offset, offset, mi, mi) = h.projectors[j];
      if (is_degree) p.block(offset, offset, mi, mi).array() -= 1.0 / md;
      pieces.push_back({is_degree ? kd : h.eigenvalues[j], {mult, std::move(p)}});
    }
  }

  // Base eigenvalues lambda != r.
  for (std::size_t j = 1; j < base.distinct(); ++j) {
    const auto& pair = set.lambda_pm[j - 1];
    for (double theta : {pair.plus, pair.minus}) {
      const double d = theta - kd;
      const double coef = d * d / (d * d + md);
      pieces.push_back({theta, {pair.multiplicity,
                                detail::lifted_projector(base.projectors[j], mi, coef, -1.0 / d)}});
    }
  }

  // Perron eigenvalue r.
  for (double theta : {set.r_pm.plus, set.r_pm.minus}) {
    const double d = theta - kd;
    const double coef = d * d / (d * d + md * n1 * n1);
    pieces.push_back({theta, {1, detail::lifted_projector(base.projectors[0], mi, coef, n1 / d)}});
  }

  return merge_spectral_pieces(std::move(pieces), tol);
}

inline Spectrum corona_eigenprojectors(const CoronaSpec& spec) {
  const auto p = validate_regular_corona(spec, 2);
  return corona_eigenprojectors(eigendecompose(spec.base.adjacency()), satellite_spectra(spec),
                                static_cast<std::int64_t>(p.k), p.m);
}

/// Transition amplitude between base copies (u,0) and (v,0) of the corona:
///   sum_{lambda != r} e^{-it(lambda+k)/2} (cos(L t/2) - i (lambda-k)/L sin(L t/2)) e_u^T E_lambda e_v
///   + the same term for r with L = Lambda_r,
/// evaluated from base spectral data only.
inline std::complex<double> corona_transfer_entry(const BaseSpectralData& base, std::int64_t k,
                                                  std::size_t m, double t, std::size_t u,
                                                  std::size_t v) {
  if (base.n < 2) throw PreconditionError("base graph needs n >= 2 vertices");
  if (m < 1) throw PreconditionError("satellites need m >= 1 vertices");
  if (u >= base.n || v >= base.n) throw ParameterError("base vertex out of range");
  const double kd = static_cast<double>(k);
  const double md = static_cast<double>(m);
  const double n1 = static_cast<double>(base.n - 1);
  std::complex<double> z{0.0, 0.0};
  for (std::size_t j = 0; j < base.eigenvalues.size(); ++j) {
    const double lambda = j == 0 ? static_cast<double>(base.r) : base.eigenvalues[j];
    const double shift = (lambda - kd) * (lambda - kd);
    const double big = std::sqrt(shift + 4.0 * md * (j == 0 ? n1 * n1 : 1.0));
    const double half = 0.5 * big * t;
    const std::complex<double> rotation{std::cos(half), -(lambda - kd) / big * std::sin(half)};
    z += std::polar(1.0, -0.5 * t * (lambda + kd)) * rotation * base.require_entry(j, u, v);
  }
  return z;
}

}  // namespace qwalk

#endif  // QWALK_CLOSED_FORM_HPP
