// Copyright 2026 The permcount Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERMCOUNT_GRAPH_HPP
#define PERMCOUNT_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "permcount/rng.hpp"

namespace permcount {

struct Edge {
  int left = 0;
  int right = 0;
  auto operator<=>(const Edge&) const = default;
};

using DenseRows = std::vector<std::vector<int>>;

/// Balanced bipartite graph with n vertices per side. Immutable once built.
///
/// Edges are kept sorted by (left, right). Both adjacency directions are
/// stored in CSR form next to a dense 0/1 incidence matrix.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  BipartiteGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 0) {
      throw std::invalid_argument("graph size must be non-negative");
    }
    const auto nn = static_cast<std::size_t>(n);
    incidence_.assign(nn * nn, 0);
    for (const Edge& e : edges_) {
      if (e.left < 0 || e.left >= n || e.right < 0 || e.right >= n) {
        throw std::invalid_argument("edge index out of range");
      }
      auto& cell = incidence_[index(e.left, e.right)];
      if (cell != 0) {
        throw std::invalid_argument("duplicate edge (" + std::to_string(e.left) + ", " +
                                    std::to_string(e.right) + ")");
      }
      cell = 1;
    }
    std::sort(edges_.begin(), edges_.end());
    build_adjacency();
  }

  int size() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  bool has_edge(int left, int right) const { return incidence_[index(left, right)] != 0; }

  /// Right vertices adjacent to `left`, ascending.
  std::span<const int> right_neighbors(int left) const {
    return {right_adj_.data() + right_off_[left], right_adj_.data() + right_off_[left + 1]};
  }

  /// Left vertices adjacent to `right`, ascending.
  std::span<const int> left_neighbors(int right) const {
    return {left_adj_.data() + left_off_[right], left_adj_.data() + left_off_[right + 1]};
  }

  int left_degree(int left) const { return right_off_[left + 1] - right_off_[left]; }
  int right_degree(int right) const { return left_off_[right + 1] - left_off_[right]; }

  bool has_isolated_vertex() const {
    for (int v = 0; v < n_; ++v) {
      if (left_degree(v) == 0 || right_degree(v) == 0) {
        return true;
      }
    }
    return false;
  }

  DenseRows dense_rows() const {
    DenseRows rows(n_, std::vector<int>(n_, 0));
    for (const Edge& e : edges_) {
      rows[e.left][e.right] = 1;
    }
    return rows;
  }

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t index(int left, int right) const {
    return static_cast<std::size_t>(left) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(right);
  }

  void build_adjacency() {
    right_off_.assign(n_ + 1, 0);
    left_off_.assign(n_ + 1, 0);
    for (const Edge& e : edges_) {
      ++right_off_[e.left + 1];
      ++left_off_[e.right + 1];
    }
    for (int v = 0; v < n_; ++v) {
      right_off_[v + 1] += right_off_[v];
      left_off_[v + 1] += left_off_[v];
    }
    right_adj_.resize(edges_.size());
    left_adj_.resize(edges_.size());
    std::vector<int> fill_left(left_off_.begin(), left_off_.end() - (n_ > 0 ? 1 : 0));
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      right_adj_[i] = edges_[i].right;
      left_adj_[fill_left[edges_[i].right]++] = edges_[i].left;
    }
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> incidence_;
  std::vector<int> right_off_{0};
  std::vector<int> right_adj_;
  std::vector<int> left_off_{0};
  std::vector<int> left_adj_;
};

/// Whether construction accepts vertices of degree zero.
enum class IsolatedVertices { reject, allow };

inline void check_isolated(const BipartiteGraph& g, IsolatedVertices policy) {
  if (policy == IsolatedVertices::reject && g.has_isolated_vertex()) {
    throw std::invalid_argument("isolated vertex: graph has no perfect matching");
  }
}

/// Graph whose incidence matrix is `rows`.
inline BipartiteGraph from_dense_rows(const DenseRows& rows,
                                      IsolatedVertices policy = IsolatedVertices::reject) {
  const int n = static_cast<int>(rows.size());
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw std::invalid_argument("matrix is not square");
    }
    for (int j = 0; j < n; ++j) {
      if (rows[i][j] != 0 && rows[i][j] != 1) {
        throw std::invalid_argument("matrix entry is not 0/1");
      }
      if (rows[i][j] == 1) {
        edges.push_back({i, j});
      }
    }
  }
  BipartiteGraph g(n, std::move(edges));
  check_isolated(g, policy);
  return g;
}

// ---------------------------------------------------------------------------
// Generators

inline BipartiteGraph complete_graph(int n) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      edges.push_back({i, j});
    }
  }
  return {n, std::move(edges)};
}

/// G_n on n+1 vertices per side: x_i ~ y_i, and x_0, y_0 adjacent to the
/// whole opposite side. Exactly n+1 perfect matchings.
inline BipartiteGraph appendix_b_graph(int n) {
  if (n < 1) {
    throw std::invalid_argument("appendix-b graph needs n >= 1");
  }
  std::vector<Edge> edges;
  for (int j = 0; j <= n; ++j) {
    edges.push_back({0, j});
  }
  for (int i = 1; i <= n; ++i) {
    edges.push_back({i, 0});
    edges.push_back({i, i});
  }
  return {n + 1, std::move(edges)};
}

/// Tridiagonal pattern, edge iff |i - j| <= 1. Has F_{n+1} perfect matchings.
inline BipartiteGraph fibonacci_graph(int n) {
  if (n < 1) {
    throw std::invalid_argument("fibonacci graph needs n >= 1");
  }
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) {
      edges.push_back({i, j});
    }
  }
  return {n, std::move(edges)};
}

/// Minimum degree ceil((1/2 + lambda) n) required of a lambda-dense graph.
inline int dense_degree_threshold(int n, double lambda) {
  // Guard against 0.3 * 10 landing just above an integer.
  return static_cast<int>(std::ceil((0.5 + lambda) * n - 1e-9));
}

/// Random lambda-dense graph. Starts from K_{n,n} and visits the edges in a
/// seeded random order, deleting each one whose endpoints both stay at or
/// above the degree threshold, until a target edge count drawn uniformly
/// from [n * threshold, n^2] is reached.
inline BipartiteGraph dense_random_graph(int n, double lambda, std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("dense-random graph needs n >= 1");
  }
  if (!(lambda > 0.0 && lambda < 0.5)) {
    throw std::invalid_argument("lambda must lie in (0, 1/2)");
  }
  const int threshold = dense_degree_threshold(n, lambda);
  if (threshold > n) {
    throw std::invalid_argument("degree threshold exceeds n");
  }
  CounterRng rng(seed, 0);
  const std::uint64_t lo = static_cast<std::uint64_t>(n) * threshold;
  const std::uint64_t hi = static_cast<std::uint64_t>(n) * n;
  const std::uint64_t target = lo + uniform_below(rng, hi - lo + 1);

  const BipartiteGraph full = complete_graph(n);
  std::vector<Edge> order(full.edges().begin(), full.edges().end());
  shuffle(std::span<Edge>(order), rng);
  std::vector<int> left_deg(n, n);
  std::vector<int> right_deg(n, n);
  std::vector<std::uint8_t> kept(order.size(), 1);
  std::uint64_t count = hi;
  for (std::size_t i = 0; i < order.size() && count > target; ++i) {
    const Edge e = order[i];
    if (left_deg[e.left] > threshold && right_deg[e.right] > threshold) {
      kept[i] = 0;
      --left_deg[e.left];
      --right_deg[e.right];
      --count;
    }
  }
  std::vector<Edge> edges;
  edges.reserve(count);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (kept[i] != 0) {
      edges.push_back(order[i]);
    }
  }
  return {n, std::move(edges)};
}

/// Bipartite stochastic block model. Left vertex i in cluster c(i) and right
/// vertex j in cluster d(j) are joined with probability P[c(i)][d(j)],
/// independently. Clusters are consecutive index ranges.
inline BipartiteGraph sbm_graph(const std::vector<int>& left_sizes,
                                const std::vector<int>& right_sizes,
                                const std::vector<std::vector<double>>& probabilities,
                                std::uint64_t seed) {
  auto expand = [](const std::vector<int>& sizes) {
    std::vector<int> cluster;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      if (sizes[c] < 0) {
        throw std::invalid_argument("negative cluster size");
      }
      cluster.insert(cluster.end(), sizes[c], static_cast<int>(c));
    }
    return cluster;
  };
  const std::vector<int> left_cluster = expand(left_sizes);
  const std::vector<int> right_cluster = expand(right_sizes);
  if (left_cluster.size() != right_cluster.size()) {
    throw std::invalid_argument("cluster sizes must sum to the same n on both sides");
  }
  if (probabilities.size() != left_sizes.size()) {
    throw std::invalid_argument("probability matrix rows must match left clusters");
  }
  for (const auto& row : probabilities) {
    if (row.size() != right_sizes.size()) {
      throw std::invalid_argument("probability matrix columns must match right clusters");
    }
    for (double p : row) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("block probability outside [0, 1]");
      }
    }
  }
  const int n = static_cast<int>(left_cluster.size());
  CounterRng rng(seed, 0);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double p = probabilities[left_cluster[i]][right_cluster[j]];
      if (uniform01(rng) < p) {
        edges.push_back({i, j});
      }
    }
  }
  return {n, std::move(edges)};
}

/// Two clusters per side of sizes floor(n/2) and ceil(n/2), with
/// P11 = P12 = P21 = p and P22 = q.
inline BipartiteGraph sbm_two_cluster_graph(int n, double p, double q, std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("sbm graph needs n >= 1");
  }
  const std::vector<int> sizes{n / 2, n - n / 2};
  return sbm_graph(sizes, sizes, {{p, p}, {p, q}}, seed);
}

enum class GraphFamily { complete, dense_random, sbm, appendix_b, fibonacci };

struct GraphGenSpec {
  GraphFamily family = GraphFamily::complete;
  int n = 1;
  double lambda = 0.25;
  std::vector<int> left_sizes;
  std::vector<int> right_sizes;
  std::vector<std::vector<double>> probabilities;
  std::uint64_t seed = 0;
};

inline BipartiteGraph generate(const GraphGenSpec& spec) {
  switch (spec.family) {
    case GraphFamily::complete:
      if (spec.n < 1) {
        throw std::invalid_argument("complete graph needs n >= 1");
      }
      return complete_graph(spec.n);
    case GraphFamily::dense_random:
      return dense_random_graph(spec.n, spec.lambda, spec.seed);
    case GraphFamily::sbm:
      return sbm_graph(spec.left_sizes, spec.right_sizes, spec.probabilities, spec.seed);
    case GraphFamily::appendix_b:
      return appendix_b_graph(spec.n);
    case GraphFamily::fibonacci:
      return fibonacci_graph(spec.n);
  }
  throw std::invalid_argument("unknown graph family");
}

// ---------------------------------------------------------------------------
// Text formats
//
// Edge list:  "n m" then m lines "u v" (0-based).
// Dense:      "dense n" then n lines of n space-separated 0/1 entries.

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + ", line " + std::to_string(line)), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class GraphFormat { edge_list, dense };

namespace detail {

inline bool next_content_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") != std::string::npos) {
      return true;
    }
  }
  return false;
}

inline std::vector<long long> parse_ints(const std::string& line, int line_no) {
  std::istringstream ss(line);
  std::vector<long long> values;
  std::string token;
  while (ss >> token) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &used);
    } catch (const std::exception&) {
      throw ParseError("expected integer, got '" + token + "'", line_no);
    }
    if (used != token.size()) {
      throw ParseError("expected integer, got '" + token + "'", line_no);
    }
    values.push_back(v);
  }
  return values;
}

}  // namespace detail

inline BipartiteGraph parse_graph(std::istream& in,
                                  IsolatedVertices policy = IsolatedVertices::reject) {
  std::string line;
  int line_no = 0;
  if (!detail::next_content_line(in, line, line_no)) {
    throw ParseError("empty graph file", line_no + 1);
  }
  const int header_line = line_no;
  std::istringstream header(line);
  std::string first;
  header >> first;
  std::vector<Edge> edges;
  int n = 0;
  if (first == "dense") {
    std::string rest;
    std::getline(header, rest);
    const auto dims = detail::parse_ints(rest, header_line);
    if (dims.size() != 1 || dims[0] < 0) {
      throw ParseError("dense header must be 'dense n'", header_line);
    }
    n = static_cast<int>(dims[0]);
    for (int i = 0; i < n; ++i) {
      if (!detail::next_content_line(in, line, line_no)) {
        throw ParseError("missing matrix row " + std::to_string(i), line_no + 1);
      }
      const auto row = detail::parse_ints(line, line_no);
      if (static_cast<int>(row.size()) != n) {
        throw ParseError("row has " + std::to_string(row.size()) + " entries, expected " +
                             std::to_string(n),
                         line_no);
      }
      for (int j = 0; j < n; ++j) {
        if (row[j] != 0 && row[j] != 1) {
          throw ParseError("matrix entry is not 0/1", line_no);
        }
        if (row[j] == 1) {
          edges.push_back({i, j});
        }
      }
    }
  } else {
    const auto dims = detail::parse_ints(line, header_line);
    if (dims.size() != 2 || dims[0] < 0 || dims[1] < 0) {
      throw ParseError("edge-list header must be 'n m'", header_line);
    }
    n = static_cast<int>(dims[0]);
    const long long m = dims[1];
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n) * n, 0);
    for (long long k = 0; k < m; ++k) {
      if (!detail::next_content_line(in, line, line_no)) {
        throw ParseError("missing edge " + std::to_string(k), line_no + 1);
      }
      const auto uv = detail::parse_ints(line, line_no);
      if (uv.size() != 2) {
        throw ParseError("edge line must be 'u v'", line_no);
      }
      if (uv[0] < 0 || uv[0] >= n || uv[1] < 0 || uv[1] >= n) {
        throw ParseError("index out of range", line_no);
      }
      auto& cell = seen[static_cast<std::size_t>(uv[0]) * n + static_cast<std::size_t>(uv[1])];
      if (cell != 0) {
        throw ParseError("duplicate edge", line_no);
      }
      cell = 1;
      edges.push_back({static_cast<int>(uv[0]), static_cast<int>(uv[1])});
    }
  }
  if (detail::next_content_line(in, line, line_no)) {
    throw ParseError("trailing content", line_no);
  }
  BipartiteGraph g(n, std::move(edges));
  check_isolated(g, policy);
  return g;
}

inline BipartiteGraph parse_graph(const std::string& text,
                                  IsolatedVertices policy = IsolatedVertices::reject) {
  std::istringstream in(text);
  return parse_graph(in, policy);
}

inline BipartiteGraph read_graph(const std::string& path,
                                 IsolatedVertices policy = IsolatedVertices::reject) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open graph file '" + path + "'");
  }
  return parse_graph(in, policy);
}

inline void write_graph(const BipartiteGraph& g, std::ostream& out,
                        GraphFormat format = GraphFormat::edge_list) {
  if (format == GraphFormat::dense) {
    out << "dense " << g.size() << '\n';
    for (int i = 0; i < g.size(); ++i) {
      for (int j = 0; j < g.size(); ++j) {
        out << (j == 0 ? "" : " ") << (g.has_edge(i, j) ? 1 : 0);
      }
      out << '\n';
    }
    return;
  }
  out << g.size() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.left << ' ' << e.right << '\n';
  }
}

inline std::string format_graph(const BipartiteGraph& g,
                                GraphFormat format = GraphFormat::edge_list) {
  std::ostringstream out;
  write_graph(g, out, format);
  return out.str();
}

inline void write_graph(const BipartiteGraph& g, const std::string& path,
                        GraphFormat format = GraphFormat::edge_list) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write graph file '" + path + "'");
  }
  write_graph(g, out, format);
}

}  // namespace permcount

#endif  // PERMCOUNT_GRAPH_HPP
