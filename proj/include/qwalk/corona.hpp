#ifndef QWALK_CORONA_HPP
#define QWALK_CORONA_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/error.hpp"
#include "qwalk/graph.hpp"

namespace qwalk {

/// Base graph G on n vertices plus one satellite graph per base vertex.
struct CoronaSpec {
  Graph base;
  std::vector<Graph> satellites;
};

/// Structured vertex name in a vertex complemented corona.
///
/// `satellite_vertex == 0` is the base copy (v,0); otherwise it is the
/// 1-based position of the vertex inside satellite H_v.
struct CoronaLabel {
  std::size_t base_vertex = 0;
  std::size_t satellite_vertex = 0;

  bool is_base_copy() const noexcept { return satellite_vertex == 0; }

  friend auto operator<=>(const CoronaLabel&, const CoronaLabel&) = default;
};

inline std::string to_string(const CoronaLabel& label) {
  std::string s = "v:" + std::to_string(label.base_vertex);
  if (!label.is_base_copy()) s += "/w:" + std::to_string(label.satellite_vertex);
  return s;
}

/// Parses "v:3" or "v:3/w:2"; "v:3/w:0" is accepted as the base copy.
inline CoronaLabel parse_corona_label(std::string_view text) {
  auto read_number = [&](std::string_view part, std::string_view prefix) {
    if (part.substr(0, prefix.size()) != prefix) {
      throw ParseError("bad corona label '" + std::string(text) + "'");
    }
    part.remove_prefix(prefix.size());
    std::size_t value = 0;
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, value);
    if (part.empty() || ec != std::errc() || ptr != end) {
      throw ParseError("bad corona label '" + std::string(text) + "'");
    }
    return value;
  };
  const auto slash = text.find('/');
  CoronaLabel label;
  label.base_vertex = read_number(text.substr(0, slash), "v:");
  if (slash != std::string_view::npos) {
    label.satellite_vertex = read_number(text.substr(slash + 1), "w:");
  }
  return label;
}

/// Bijection between CoronaLabel and flat indices. All base copies come first
/// in base order, then H_0's vertices, then H_1's, and so on.
class CoronaLayout {
 public:
  CoronaLayout() = default;

  explicit CoronaLayout(const CoronaSpec& spec) : base_order_(spec.base.order()) {
    offsets_.reserve(spec.satellites.size() + 1);
    std::size_t offset = base_order_;
    for (const auto& h : spec.satellites) {
      offsets_.push_back(offset);
      offset += h.order();
    }
    offsets_.push_back(offset);
  }

  std::size_t base_order() const noexcept { return base_order_; }
  std::size_t order() const noexcept { return offsets_.empty() ? base_order_ : offsets_.back(); }
  std::size_t satellite_order(std::size_t v) const { return offsets_.at(v + 1) - offsets_.at(v); }
  /// Flat index of the first vertex of H_v.
  std::size_t satellite_offset(std::size_t v) const { return offsets_.at(v); }

  std::size_t flat_index(const CoronaLabel& label) const {
    if (label.base_vertex >= base_order_) {
      throw ParameterError("base vertex " + std::to_string(label.base_vertex) + " out of range");
    }
    if (label.is_base_copy()) return label.base_vertex;
    if (label.satellite_vertex > satellite_order(label.base_vertex)) {
      throw ParameterError("satellite vertex " + to_string(label) + " out of range");
    }
    return offsets_[label.base_vertex] + label.satellite_vertex - 1;
  }

  CoronaLabel label(std::size_t flat) const {
    if (flat >= order()) throw ParameterError("flat index " + std::to_string(flat) + " out of range");
    if (flat < base_order_) return {flat, 0};
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
    const auto v = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return {v, flat - offsets_[v] + 1};
  }

 private:
  std::size_t base_order_ = 0;
  std::vector<std::size_t> offsets_;
};

struct CoronaGraph {
  Graph graph;
  CoronaLayout layout;
};

/// Vertex complemented corona: disjoint union of G and the H_i, with every
/// vertex of H_i joined to every base vertex except v_i.
inline CoronaGraph build_corona(const CoronaSpec& spec) {
  const std::size_t n = spec.base.order();
  if (n == 0) throw SpecError("base graph must have at least one vertex");
  if (spec.satellites.size() != n) {
    throw SpecError("expected " + std::to_string(n) + " satellite graphs, got " +
                    std::to_string(spec.satellites.size()));
  }
  CoronaLayout layout(spec);
  std::vector<Edge> edges = spec.base.edges();
  for (std::size_t i = 0; i < n; ++i) {
    const auto offset = layout.satellite_offset(i);
    const auto& h = spec.satellites[i];
    for (const auto& e : h.edges()) edges.push_back({offset + e.u, offset + e.v});
    for (std::size_t w = 0; w < h.order(); ++w) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) edges.push_back({j, offset + w});
      }
    }
  }
  return {Graph(layout.order(), std::move(edges)), layout};
}

/// Parameters of a corona that meets the closed-form hypotheses: r-regular
/// connected base on n vertices, every satellite k-regular on m vertices.
struct RegularCoronaParams {
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t m = 0;
  std::size_t k = 0;
};

/// Throws PreconditionError naming every offending satellite.
inline RegularCoronaParams validate_regular_corona(const CoronaSpec& spec,
                                                   std::size_t min_base_order = 1) {
  const std::size_t n = spec.base.order();
  if (spec.satellites.size() != n) {
    throw SpecError("expected " + std::to_string(n) + " satellite graphs, got " +
                    std::to_string(spec.satellites.size()));
  }
  if (n < min_base_order) {
    throw PreconditionError("base graph needs at least " + std::to_string(min_base_order) +
                            " vertices");
  }
  const auto base_info = analyze_structure(spec.base);
  if (!base_info.is_regular) throw PreconditionError("base graph is not regular");
  if (!base_info.is_connected) throw PreconditionError("base graph is not connected");

  const auto& first = spec.satellites.front();
  const auto first_info = analyze_structure(first);
  RegularCoronaParams params{n, base_info.degree, first.order(), first_info.degree};
  std::string offenders;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& h = spec.satellites[i];
    const auto info = analyze_structure(h);
    std::string why;
    if (h.order() != params.m) why = "has " + std::to_string(h.order()) + " vertices";
    else if (!info.is_regular) why = "is not regular";
    else if (info.degree != params.k) why = "is " + std::to_string(info.degree) + "-regular";
    if (!why.empty()) {
      if (!offenders.empty()) offenders += "; ";
      offenders += "H_" + std::to_string(i) + " " + why;
    }
  }
  if (!offenders.empty()) {
    throw PreconditionError("satellites must all be " + std::to_string(params.k) + "-regular on " +
                            std::to_string(params.m) + " vertices: " + offenders);
  }
  return params;
}

/// Block form of the corona adjacency matrix,
///   [[A_G, M (x) j_m^T], [M^T (x) j_m, diag(A_{H_1}, ..., A_{H_n})]],  M = J_n - I_n,
/// assembled without going through the edge list.
inline Eigen::MatrixXd corona_adjacency_blocks(const CoronaSpec& spec) {
  const auto p = validate_regular_corona(spec);
  const auto n = static_cast<Eigen::Index>(p.n);
  const auto m = static_cast<Eigen::Index>(p.m);
  const Eigen::MatrixXd coupling =
      Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + n * m, n + n * m);
  a.topLeftCorner(n, n) = spec.base.adjacency();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a.block(i, n + j * m, 1, m).setConstant(coupling(i, j));
    }
  }
  a.bottomLeftCorner(n * m, n) = a.topRightCorner(n, n * m).transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    a.block(n + i * m, n + i * m, m, m) = spec.satellites[static_cast<std::size_t>(i)].adjacency();
  }
  return a;
}

/// The same satellite attached to every base vertex.
inline CoronaSpec uniform_corona(const Graph& base, const Graph& satellite) {
  return {base, std::vector<Graph>(base.order(), satellite)};
}

}  // namespace qwalk

#endif  // QWALK_CORONA_HPP
