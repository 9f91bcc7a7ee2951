#ifndef QWALK_GRAPH_HPP
#define QWALK_GRAPH_HPP

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/error.hpp"

namespace qwalk {

/// Undirected edge with `u < v` after normalisation.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on the dense vertex set 0..n-1.
///
/// Construction normalises every edge to (min, max), sorts the edge list and
/// collapses duplicates. Self-loops and out-of-range endpoints are rejected.
/// The value is immutable afterwards.
class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t order) : order_(order) {
    if (order == 0) throw ParameterError("graph must have at least one vertex");
  }

  Graph(std::size_t order, std::vector<Edge> edges) : Graph(order) {
    for (auto& e : edges) {
      if (e.u == e.v) {
        throw ParameterError("self-loop at vertex " + std::to_string(e.u));
      }
      if (e.u >= order || e.v >= order) {
        throw ParameterError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             "} out of range for " + std::to_string(order) + " vertices");
      }
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
  }

  std::size_t order() const noexcept { return order_; }
  std::size_t size() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_edge(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> deg(order_, 0);
    for (const auto& e : edges_) {
      ++deg[e.u];
      ++deg[e.v];
    }
    return deg;
  }

  std::vector<std::vector<std::size_t>> adjacency_lists() const {
    std::vector<std::vector<std::size_t>> adj(order_);
    for (const auto& e : edges_) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    return adj;
  }

  /// Dense symmetric 0/1 adjacency matrix with zero diagonal.
  Eigen::MatrixXd adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(order_),
                                              static_cast<Eigen::Index>(order_));
    for (const auto& e : edges_) {
      const auto i = static_cast<Eigen::Index>(e.u);
      const auto j = static_cast<Eigen::Index>(e.v);
      a(i, j) = 1.0;
      a(j, i) = 1.0;
    }
    return a;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t order_ = 0;
  std::vector<Edge> edges_;
};

enum class GraphFamily { path, cycle, complete, hypercube, circulant, empty, petersen };

inline std::string_view family_name(GraphFamily f) {
  switch (f) {
    case GraphFamily::path: return "path";
    case GraphFamily::cycle: return "cycle";
    case GraphFamily::complete: return "complete";
    case GraphFamily::hypercube: return "hypercube";
    case GraphFamily::circulant: return "circulant";
    case GraphFamily::empty: return "empty";
    case GraphFamily::petersen: return "petersen";
  }
  return "?";
}

inline GraphFamily parse_family(std::string_view name) {
  for (auto f : {GraphFamily::path, GraphFamily::cycle, GraphFamily::complete,
                 GraphFamily::hypercube, GraphFamily::circulant, GraphFamily::empty,
                 GraphFamily::petersen}) {
    if (family_name(f) == name) return f;
  }
  throw ParameterError("unknown graph family '" + std::string(name) + "'");
}

namespace detail {

inline void require_param_count(GraphFamily f, const std::vector<std::int64_t>& params,
                                std::size_t lo, std::size_t hi) {
  if (params.size() < lo || params.size() > hi) {
    throw ParameterError(std::string(family_name(f)) + ": expected " + std::to_string(lo) +
                         (lo == hi ? "" : ".." + std::to_string(hi)) + " parameter(s), got " +
                         std::to_string(params.size()));
  }
}

inline std::size_t require_at_least(GraphFamily f, std::int64_t value, std::int64_t lo,
                                    const char* what) {
  if (value < lo) {
    throw ParameterError(std::string(family_name(f)) + ": " + what + " must be >= " +
                         std::to_string(lo) + " (got " + std::to_string(value) + ")");
  }
  return static_cast<std::size_t>(value);
}

}  // namespace detail

/// Standard graph families.
///
/// Vertex numbering: path and cycle run 0..n-1 along the graph; hypercube
/// vertex i is the binary word of i, adjacent to words at Hamming distance 1;
/// circulant(n, s1, s2, ...) joins i to i +/- s mod n; petersen has the outer
/// 5-cycle on 0..4, spokes i -- i+5 and the inner pentagram on 5..9.
inline Graph build_named_graph(GraphFamily family, const std::vector<std::int64_t>& params) {
  using detail::require_at_least;
  using detail::require_param_count;
  std::vector<Edge> edges;
  switch (family) {
    case GraphFamily::path: {
      require_param_count(family, params, 1, 1);
      const auto n = require_at_least(family, params[0], 1, "n");
      for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
      return Graph(n, std::move(edges));
    }
    case GraphFamily::cycle: {
      require_param_count(family, params, 1, 1);
      const auto n = require_at_least(family, params[0], 3, "n");
      for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
      return Graph(n, std::move(edges));
    }
    case GraphFamily::complete: {
      require_param_count(family, params, 1, 1);
      const auto n = require_at_least(family, params[0], 1, "n");
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
      return Graph(n, std::move(edges));
    }
    case GraphFamily::empty: {
      require_param_count(family, params, 1, 1);
      return Graph(require_at_least(family, params[0], 1, "n"));
    }
    case GraphFamily::hypercube: {
      require_param_count(family, params, 1, 1);
      const auto d = require_at_least(family, params[0], 1, "d");
      if (d > 20) throw ParameterError("hypercube: d must be <= 20 (dense matrices)");
      const std::size_t n = std::size_t{1} << d;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t b = 0; b < d; ++b) {
          const std::size_t j = i ^ (std::size_t{1} << b);
          if (i < j) edges.push_back({i, j});
        }
      return Graph(n, std::move(edges));
    }
    case GraphFamily::circulant: {
      if (params.empty()) {
        throw ParameterError("circulant: expected n followed by the connection set");
      }
      const auto n = require_at_least(family, params[0], 2, "n");
      for (std::size_t p = 1; p < params.size(); ++p) {
        const auto s = params[p];
        if (s < 1 || s >= static_cast<std::int64_t>(n)) {
          throw ParameterError("circulant: connection element must lie in [1, n-1] (got " +
                               std::to_string(s) + ")");
        }
        for (std::size_t i = 0; i < n; ++i) {
          edges.push_back({i, (i + static_cast<std::size_t>(s)) % n});
        }
      }
      return Graph(n, std::move(edges));
    }
    case GraphFamily::petersen: {
      require_param_count(family, params, 0, 0);
      for (std::size_t i = 0; i < 5; ++i) {
        edges.push_back({i, (i + 1) % 5});
        edges.push_back({i, i + 5});
        edges.push_back({5 + i, 5 + (i + 2) % 5});
      }
      return Graph(10, std::move(edges));
    }
  }
  throw ParameterError("unknown graph family");
}

/// Disjoint union with b's vertices shifted past a's.
inline Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges = a.edges();
  for (const auto& e : b.edges()) edges.push_back({e.u + a.order(), e.v + a.order()});
  return Graph(a.order() + b.order(), std::move(edges));
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::int64_t parse_int(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("unparsable token '" + std::string(token) + "'", line);
  }
  return value;
}

}  // namespace detail

/// Parses the edge-list text format: optional first line "n <count>", then
/// one "i j" pair per line. Blank lines and '#' comments are ignored.
inline Graph parse_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  std::int64_t declared = -1;
  std::size_t declared_line = 0;
  std::size_t max_index = 0;
  bool seen_content = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto tokens = detail::split_ws(line);
    if (!seen_content && tokens.size() == 2 && tokens[0] == "n") {
      declared = detail::parse_int(tokens[1], line_no);
      if (declared < 1) throw ParseError("vertex count must be positive", line_no);
      declared_line = line_no;
      seen_content = true;
      continue;
    }
    seen_content = true;
    if (tokens.size() != 2) {
      throw ParseError("expected two vertex indices, got " + std::to_string(tokens.size()) +
                           " token(s)",
                       line_no);
    }
    const auto a = detail::parse_int(tokens[0], line_no);
    const auto b = detail::parse_int(tokens[1], line_no);
    if (a < 0 || b < 0) throw ParseError("negative vertex index", line_no);
    if (a == b) throw ParseError("self-loop at vertex " + std::to_string(a), line_no);
    edges.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b)});
    max_index = std::max({max_index, edges.back().u, edges.back().v});
  }
  if (declared < 0) {
    if (edges.empty()) throw ParseError("empty edge list without vertex count");
    return Graph(max_index + 1, std::move(edges));
  }
  if (!edges.empty() && max_index >= static_cast<std::size_t>(declared)) {
    throw ParseError("vertex index " + std::to_string(max_index) + " exceeds declared count " +
                         std::to_string(declared),
                     declared_line);
  }
  return Graph(static_cast<std::size_t>(declared), std::move(edges));
}

/// Inverse of parse_edge_list; always emits the "n" header so isolated
/// vertices survive a round trip.
inline std::string serialize_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "n " << g.order() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

struct RegularityInfo {
  bool is_regular = false;
  std::size_t degree = 0;  // meaningful only when is_regular
  bool is_connected = false;
};

inline RegularityInfo analyze_structure(const Graph& g) {
  RegularityInfo info;
  const auto deg = g.degrees();
  info.is_regular = std::all_of(deg.begin(), deg.end(), [&](auto d) { return d == deg[0]; });
  info.degree = info.is_regular ? deg[0] : 0;

  const auto adj = g.adjacency_lists();
  std::vector<bool> seen(g.order(), false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const auto x = frontier.front();
    frontier.pop();
    for (auto y : adj[x]) {
      if (!seen[y]) {
        seen[y] = true;
        ++reached;
        frontier.push(y);
      }
    }
  }
  info.is_connected = reached == g.order();
  return info;
}

}  // namespace qwalk

#endif  // QWALK_GRAPH_HPP
