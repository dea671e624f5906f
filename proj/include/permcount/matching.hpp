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

#ifndef PERMCOUNT_MATCHING_HPP
#define PERMCOUNT_MATCHING_HPP

#include <algorithm>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "permcount/graph.hpp"

namespace permcount {

/// left vertex -> matched right vertex, or -1.
using Matching = std::vector<int>;

struct MaximumMatching {
  Matching left_to_right;
  int size = 0;
};

/// Hopcroft-Karp maximum matching, O(m sqrt(n)).
inline MaximumMatching hopcroft_karp(const BipartiteGraph& g) {
  const int n = g.size();
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> match_l(n, -1);
  std::vector<int> match_r(n, -1);
  std::vector<int> dist(n);
  std::vector<int> queue;
  queue.reserve(n);
  std::vector<std::size_t> cursor(n);
  std::vector<int> path;

  // Greedy warm start.
  int size = 0;
  for (int x = 0; x < n; ++x) {
    for (int y : g.right_neighbors(x)) {
      if (match_r[y] < 0) {
        match_l[x] = y;
        match_r[y] = x;
        ++size;
        break;
      }
    }
  }

  while (true) {
    queue.clear();
    for (int x = 0; x < n; ++x) {
      if (match_l[x] < 0) {
        dist[x] = 0;
        queue.push_back(x);
      } else {
        dist[x] = kInf;
      }
    }
    bool found = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int x = queue[head];
      for (int y : g.right_neighbors(x)) {
        const int next = match_r[y];
        if (next < 0) {
          found = true;
        } else if (dist[next] == kInf) {
          dist[next] = dist[x] + 1;
          queue.push_back(next);
        }
      }
    }
    if (!found) {
      break;
    }

    // Layered DFS with an explicit stack; path holds left vertices.
    std::fill(cursor.begin(), cursor.end(), 0);
    for (int root = 0; root < n; ++root) {
      if (match_l[root] >= 0) {
        continue;
      }
      path.assign(1, root);
      while (!path.empty()) {
        const int x = path.back();
        const auto nbrs = g.right_neighbors(x);
        if (cursor[x] == nbrs.size()) {
          dist[x] = kInf;  // dead end for this phase
          path.pop_back();
          continue;
        }
        const int y = nbrs[cursor[x]++];
        const int next = match_r[y];
        if (next < 0) {
          // Augment along path, ending at free y.
          int free_right = y;
          for (auto it = path.rbegin(); it != path.rend(); ++it) {
            const int prev = match_l[*it];
            match_l[*it] = free_right;
            match_r[free_right] = *it;
            free_right = prev;
          }
          ++size;
          break;
        }
        if (dist[next] == dist[x] + 1) {
          path.push_back(next);
        }
      }
    }
  }
  return {std::move(match_l), size};
}

/// A perfect matching of g, if one exists.
inline std::optional<Matching> find_perfect_matching(const BipartiteGraph& g) {
  auto result = hopcroft_karp(g);
  if (result.size != g.size()) {
    return std::nullopt;
  }
  return std::move(result.left_to_right);
}

inline bool is_perfect_matching(const BipartiteGraph& g, std::span<const int> matching) {
  const int n = g.size();
  if (static_cast<int>(matching.size()) != n) {
    return false;
  }
  std::vector<char> used(n, 0);
  for (int x = 0; x < n; ++x) {
    const int y = matching[x];
    if (y < 0 || y >= n || used[y] != 0 || !g.has_edge(x, y)) {
      return false;
    }
    used[y] = 1;
  }
  return true;
}

/// Directed match-graph D_G for a graph and a perfect matching: graph edges
/// run right -> left, matching edges additionally run left -> right. An edge
/// lies on some perfect matching (extending the committed partial matching)
/// iff its endpoints share a strongly connected component.
///
/// Each matched pair (x, M(x)) is a 2-cycle, so components are computed on
/// the contracted graph whose nodes are live left vertices, with an arc
/// x -> x' whenever x' is adjacent to M(x). Right vertices inherit the label
/// of their partner.
///
/// Committed vertices are flagged dead rather than removed, so indices stay
/// stable. One instance per sampling worker.
class DirectedMatchGraph {
 public:
  DirectedMatchGraph(std::shared_ptr<const BipartiteGraph> graph, Matching perfect_matching)
      : graph_(std::move(graph)), match_l_(std::move(perfect_matching)) {
    const int n = graph_->size();
    if (!is_perfect_matching(*graph_, match_l_)) {
      throw std::invalid_argument("not a perfect matching of the graph");
    }
    match_r_.assign(n, -1);
    for (int x = 0; x < n; ++x) {
      match_r_[match_l_[x]] = x;
    }
    live_l_.assign(n, 1);
    live_r_.assign(n, 1);
    scc_.assign(n, -1);
    live_count_ = n;
    recompute_components();
  }

  const BipartiteGraph& graph() const { return *graph_; }
  int size() const { return graph_->size(); }
  int live_count() const { return live_count_; }
  bool left_live(int x) const { return live_l_[x] != 0; }
  bool right_live(int y) const { return live_r_[y] != 0; }

  /// Carried matching. Restricted to live vertices it is a perfect matching
  /// of the residual graph; dead left vertices hold their committed partner.
  const Matching& matching() const { return match_l_; }

  int left_component(int x) const { return scc_[x]; }
  int right_component(int y) const { return scc_[match_r_[y]]; }
  int component_count() const { return component_count_; }

  bool extendable(int x, int y) const {
    return live_l_[x] != 0 && live_r_[y] != 0 && graph_->has_edge(x, y) &&
           scc_[match_r_[y]] == scc_[x];
  }

  /// Live right neighbours of x sharing its component, ascending.
  void extendable_neighbors(int x, std::vector<int>& out) const {
    if (live_l_[x] == 0) {
      throw std::invalid_argument("vertex is not live");
    }
    out.clear();
    const int comp = scc_[x];
    for (int y : graph_->right_neighbors(x)) {
      if (live_r_[y] != 0 && scc_[match_r_[y]] == comp) {
        out.push_back(y);
      }
    }
  }

  std::vector<int> extendable_neighbors(int x) const {
    std::vector<int> out;
    extendable_neighbors(x, out);
    return out;
  }

  /// Add (x, y) to the committed partial matching. If y is not x's current
  /// partner, the alternating cycle through the edge is reversed first so
  /// the carried matching contains it. Both endpoints then die and the
  /// components of the residual graph are recomputed.
  void commit(int x, int y) {
    if (!extendable(x, y)) {
      throw std::logic_error("commit of a non-extendable edge");
    }
    if (match_l_[x] != y) {
      reverse_cycle(x, y);
    }
    live_l_[x] = 0;
    live_r_[y] = 0;
    --live_count_;
    recompute_components();
  }

 private:
  // Path x = p0 -> p1 -> ... -> pk = match_r(y) in the contracted graph;
  // arc p -> p' means p' is adjacent to M(p). Shifting partners along the
  // path and giving y to x rotates the alternating cycle.
  void reverse_cycle(int x, int y) {
    const int target = match_r_[y];
    const int comp = scc_[x];
    const int n = size();
    parent_.assign(n, -1);
    parent_[x] = x;
    bfs_.clear();
    bfs_.push_back(x);
    for (std::size_t head = 0; head < bfs_.size() && parent_[target] < 0; ++head) {
      const int v = bfs_[head];
      for (int w : graph_->left_neighbors(match_l_[v])) {
        if (live_l_[w] != 0 && parent_[w] < 0 && scc_[w] == comp) {
          parent_[w] = v;
          bfs_.push_back(w);
        }
      }
    }
    if (parent_[target] < 0) {
      throw std::logic_error("no alternating cycle through extendable edge");
    }
    // Walk back from target; each node takes its predecessor's old partner.
    int v = target;
    while (v != x) {
      const int p = parent_[v];
      const int partner = match_l_[p];
      match_l_[v] = partner;
      match_r_[partner] = v;
      v = p;
    }
    match_l_[x] = y;
    match_r_[y] = x;
  }

  // Iterative Tarjan over live left vertices.
  void recompute_components() {
    const int n = size();
    index_.assign(n, -1);
    low_.assign(n, 0);
    on_stack_.assign(n, 0);
    stack_.clear();
    call_.clear();
    int counter = 0;
    component_count_ = 0;
    for (int root = 0; root < n; ++root) {
      if (live_l_[root] == 0 || index_[root] >= 0) {
        continue;
      }
      open(root, counter);
      while (!call_.empty()) {
        const int v = call_.back().vertex;
        const auto nbrs = graph_->left_neighbors(match_l_[v]);
        std::size_t& pos = call_.back().next;
        if (pos < nbrs.size()) {
          const int w = nbrs[pos++];
          if (live_l_[w] == 0 || w == v) {
            continue;
          }
          if (index_[w] < 0) {
            open(w, counter);
          } else if (on_stack_[w] != 0) {
            low_[v] = std::min(low_[v], index_[w]);
          }
          continue;
        }
        if (low_[v] == index_[v]) {
          int w = -1;
          do {
            w = stack_.back();
            stack_.pop_back();
            on_stack_[w] = 0;
            scc_[w] = component_count_;
          } while (w != v);
          ++component_count_;
        }
        call_.pop_back();
        if (!call_.empty()) {
          const int parent = call_.back().vertex;
          low_[parent] = std::min(low_[parent], low_[v]);
        }
      }
    }
  }

  void open(int v, int& counter) {
    index_[v] = low_[v] = counter++;
    stack_.push_back(v);
    on_stack_[v] = 1;
    call_.push_back({v, 0});
  }

  struct Frame {
    int vertex;
    std::size_t next;
  };

  std::shared_ptr<const BipartiteGraph> graph_;
  Matching match_l_;
  std::vector<int> match_r_;
  std::vector<char> live_l_;
  std::vector<char> live_r_;
  std::vector<int> scc_;
  int component_count_ = 0;
  int live_count_ = 0;

  // Scratch, kept to avoid reallocation across commits.
  std::vector<int> index_;
  std::vector<int> low_;
  std::vector<char> on_stack_;
  std::vector<int> stack_;
  std::vector<Frame> call_;
  std::vector<int> parent_;
  std::vector<int> bfs_;
};

/// Edges lying on at least one perfect matching, given one perfect matching.
inline std::vector<Edge> extendable_edges(const BipartiteGraph& g, const Matching& perfect_matching) {
  // Non-owning handle; the state does not outlive this call.
  DirectedMatchGraph state(std::shared_ptr<const BipartiteGraph>(&g, [](const BipartiteGraph*) {}),
                           perfect_matching);
  std::vector<Edge> out;
  for (const Edge& e : g.edges()) {
    if (state.left_component(e.left) == state.right_component(e.right)) {
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace permcount

#endif  // PERMCOUNT_MATCHING_HPP
