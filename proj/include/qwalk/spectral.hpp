#ifndef QWALK_SPECTRAL_HPP
#define QWALK_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/error.hpp"

namespace qwalk {

inline constexpr double kSupportTolerance = 1e-8;
inline constexpr double kCospectralTolerance = 1e-8;

/// Spectral decomposition A = sum_j lambda_j E_j over distinct eigenvalues.
struct Spectrum {
  std::vector<double> eigenvalues;  // strictly decreasing
  std::vector<std::size_t> multiplicities;
  std::vector<Eigen::MatrixXd> projectors;

  std::size_t dim() const {
    return projectors.empty() ? 0 : static_cast<std::size_t>(projectors.front().rows());
  }
  std::size_t distinct() const noexcept { return eigenvalues.size(); }

  /// (E_j)_{u,v}
  double entry(std::size_t j, std::size_t u, std::size_t v) const {
    return projectors[j](static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  }

  /// Index of the eigenvalue within `tol` of x, if any.
  std::optional<std::size_t> find(double x, double tol = 1e-8) const {
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
      if (std::abs(eigenvalues[j] - x) < tol) return j;
    }
    return std::nullopt;
  }
};

/// Upper bound for ||A||_2 of a symmetric matrix (max absolute row sum).
inline double norm_estimate(const Eigen::MatrixXd& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double default_group_tolerance(const Eigen::MatrixXd& a) {
  return 1e-9 * std::max(1.0, norm_estimate(a));
}

namespace detail {

inline void require_symmetric(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw ShapeError("matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     ", expected square");
  }
  if (a.rows() == 0) throw ShapeError("matrix is empty");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ShapeError("matrix is not symmetric");
  }
}

}  // namespace detail

/// Groups (value, projector) pieces into distinct eigenvalues. Pieces whose
/// values chain together with gaps below `group_tol` are summed into a
/// single projector; the reported eigenvalue is the multiplicity-weighted mean.
inline Spectrum merge_spectral_pieces(
    std::vector<std::pair<double, std::pair<std::size_t, Eigen::MatrixXd>>> pieces,
    double group_tol) {
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  Spectrum s;
  double weighted = 0.0;
  double last = 0.0;
  for (auto& [value, piece] : pieces) {
    auto& [mult, proj] = piece;
    if (mult == 0) continue;
    if (!s.eigenvalues.empty() && last - value < group_tol) {
      weighted += value * static_cast<double>(mult);
      s.multiplicities.back() += mult;
      s.projectors.back() += proj;
      s.eigenvalues.back() = weighted / static_cast<double>(s.multiplicities.back());
    } else {
      weighted = value * static_cast<double>(mult);
      s.eigenvalues.push_back(value);
      s.multiplicities.push_back(mult);
      s.projectors.push_back(std::move(proj));
    }
    last = value;
  }
  return s;
}

/// Eigendecomposition of a real symmetric matrix into distinct eigenvalues and
/// eigenprojectors E_j = sum x x^T over each cluster's orthonormal eigenvectors.
inline Spectrum eigendecompose(const Eigen::MatrixXd& a, std::optional<double> group_tol = {}) {
  detail::require_symmetric(a);
  const double tol = group_tol.value_or(default_group_tolerance(a));
  if (!(tol > 0.0)) throw ParameterError("group tolerance must be positive");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");

  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  std::vector<std::pair<double, std::pair<std::size_t, Eigen::MatrixXd>>> pieces;
  pieces.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const Eigen::VectorXd x = vectors.col(i);
    pieces.push_back({values(i), {1, x * x.transpose()}});
  }
  return merge_spectral_pieces(std::move(pieces), tol);
}

/// Worst violation of each spectral-decomposition identity.
struct SpectrumDeviation {
  double completeness = 0.0;    // || sum E - I ||
  double idempotence = 0.0;     // max || E^2 - E ||
  double orthogonality = 0.0;   // max || E_j E_h ||, j != h
  double trace = 0.0;           // max | tr E_j - s_j |
  double reconstruction = 0.0;  // || sum lambda E - A ||  (only when A is given)

  double max() const {
    return std::max({completeness, idempotence, orthogonality, trace, reconstruction});
  }
};

inline SpectrumDeviation spectrum_deviation(const Spectrum& s,
                                            const Eigen::MatrixXd* reference = nullptr) {
  SpectrumDeviation d;
  if (s.projectors.empty()) return d;
  const auto n = s.projectors.front().rows();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < s.distinct(); ++j) {
    const auto& e = s.projectors[j];
    sum += e;
    recon += s.eigenvalues[j] * e;
    d.idempotence = std::max(d.idempotence, (e * e - e).cwiseAbs().maxCoeff());
    d.trace = std::max(d.trace, std::abs(e.trace() - static_cast<double>(s.multiplicities[j])));
    for (std::size_t h = j + 1; h < s.distinct(); ++h) {
      d.orthogonality = std::max(d.orthogonality, (e * s.projectors[h]).cwiseAbs().maxCoeff());
    }
  }
  d.completeness = (sum - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (reference != nullptr) d.reconstruction = (recon - *reference).cwiseAbs().maxCoeff();
  return d;
}

namespace detail {

inline void require_vertex(const Spectrum& s, std::size_t u) {
  if (u >= s.dim()) {
    throw ParameterError("vertex " + std::to_string(u) + " out of range (dimension " +
                         std::to_string(s.dim()) + ")");
  }
}

}  // namespace detail

/// Indices j with ||E_j e_u|| > tol.
inline std::vector<std::size_t> eigenvalue_support(const Spectrum& s, std::size_t u,
                                                   double tol = kSupportTolerance) {
  detail::require_vertex(s, u);
  std::vector<std::size_t> supp;
  for (std::size_t j = 0; j < s.distinct(); ++j) {
    if (s.projectors[j].col(static_cast<Eigen::Index>(u)).norm() > tol) supp.push_back(j);
  }
  return supp;
}

inline std::vector<double> support_values(const Spectrum& s, std::size_t u,
                                          double tol = kSupportTolerance) {
  std::vector<double> out;
  for (auto j : eigenvalue_support(s, u, tol)) out.push_back(s.eigenvalues[j]);
  return out;
}

struct CospectralResult {
  bool strongly_cospectral = false;
  /// (eigenvalue index, sign) for every eigenvalue in either support, when
  /// strongly cospectral.
  std::vector<std::pair<std::size_t, int>> signs;
  /// First eigenvalue index where E e_u != +-E e_v.
  std::optional<std::size_t> failing;
};

/// Tests E_j e_u = +-E_j e_v for every eigenvalue in supp(u) or supp(v).
inline CospectralResult strongly_cospectral(const Spectrum& s, std::size_t u, std::size_t v,
                                            double tol = kCospectralTolerance) {
  detail::require_vertex(s, u);
  detail::require_vertex(s, v);
  if (u == v) throw ParameterError("strong cospectrality needs two distinct vertices");
  CospectralResult result;
  for (std::size_t j = 0; j < s.distinct(); ++j) {
    const Eigen::VectorXd cu = s.projectors[j].col(static_cast<Eigen::Index>(u));
    const Eigen::VectorXd cv = s.projectors[j].col(static_cast<Eigen::Index>(v));
    if (cu.norm() <= tol && cv.norm() <= tol) continue;
    if ((cu - cv).norm() < tol) {
      result.signs.emplace_back(j, +1);
    } else if ((cu + cv).norm() < tol) {
      result.signs.emplace_back(j, -1);
    } else {
      result.signs.clear();
      result.failing = j;
      return result;
    }
  }
  result.strongly_cospectral = true;
  return result;
}

/// H(t)_{u,v} = sum_j exp(-i t lambda_j) (E_j)_{u,v}.
inline std::complex<double> transition_entry(const Spectrum& s, double t, std::size_t u,
                                             std::size_t v) {
  detail::require_vertex(s, u);
  detail::require_vertex(s, v);
  std::complex<double> z{0.0, 0.0};
  for (std::size_t j = 0; j < s.distinct(); ++j) {
    z += std::polar(1.0, -t * s.eigenvalues[j]) * s.entry(j, u, v);
  }
  return z;
}

/// Full transition matrix H(t) = sum_j exp(-i t lambda_j) E_j.
inline Eigen::MatrixXcd transition_matrix(const Spectrum& s, double t) {
  const auto n = static_cast<Eigen::Index>(s.dim());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < s.distinct(); ++j) {
    h += std::polar(1.0, -t * s.eigenvalues[j]) * s.projectors[j].cast<std::complex<double>>();
  }
  return h;
}

struct AmplitudeCurve {
  std::vector<double> times;
  std::vector<std::complex<double>> amplitudes;
  std::vector<double> fidelities;
  double argmax_time = 0.0;
  double max_fidelity = 0.0;
};

/// Evaluates H(t)_{u,v} on `steps` uniform grid points of [t_min, t_max].
/// The maximum keeps the earliest time on ties.
inline AmplitudeCurve fidelity_scan(const Spectrum& s, std::size_t u, std::size_t v, double t_min,
                                    double t_max, std::size_t steps) {
  if (!(t_min < t_max)) throw ParameterError("fidelity scan needs t_min < t_max");
  if (steps < 2) throw ParameterError("fidelity scan needs at least 2 steps");
  detail::require_vertex(s, u);
  detail::require_vertex(s, v);
  AmplitudeCurve curve;
  curve.times.resize(steps);
  curve.amplitudes.resize(steps);
  curve.fidelities.resize(steps);
  const double h = (t_max - t_min) / static_cast<double>(steps - 1);
  curve.max_fidelity = -1.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = i + 1 == steps ? t_max : t_min + h * static_cast<double>(i);
    const auto z = transition_entry(s, t, u, v);
    curve.times[i] = t;
    curve.amplitudes[i] = z;
    curve.fidelities[i] = std::abs(z);
    if (curve.fidelities[i] > curve.max_fidelity) {
      curve.max_fidelity = curve.fidelities[i];
      curve.argmax_time = t;
    }
  }
  return curve;
}

}  // namespace qwalk

#endif  // QWALK_SPECTRAL_HPP
