#pragma once

// Point sets, edges and spanning trees over point indices.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dilatree/errors.hpp"
#include "dilatree/geometry.hpp"

namespace dilatree {

using Index = int;

/// Undirected edge stored with u < v.
struct Edge {
  Index u = 0;
  Index v = 0;

  Edge() = default;
  Edge(Index a, Index b) : u(std::min(a, b)), v(std::max(a, b)) {}

  bool touches(Index w) const { return u == w || v == w; }
  bool shares_endpoint(const Edge& o) const { return touches(o.u) || touches(o.v); }

  friend bool operator==(const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }
  friend bool operator!=(const Edge& a, const Edge& b) { return !(a == b); }
  friend bool operator<(const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; }
};

using EdgeList = std::vector<Edge>;

inline EdgeList sorted_edges(EdgeList edges) {
  std::sort(edges.begin(), edges.end());
  return edges;
}

class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> points, std::vector<std::string> labels = {})
      : points_(std::move(points)), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != points_.size()) {
      throw InvalidInput("label count does not match point count");
    }
    std::vector<std::size_t> order(points_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) { return points_[a] < points_[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (points_[order[i]] == points_[order[i - 1]]) {
        throw InvalidInput("duplicate points at indices " + std::to_string(order[i - 1]) + " and " +
                           std::to_string(order[i]));
      }
    }
  }

  std::size_t size() const noexcept { return points_.size(); }
  const Point& operator[](Index i) const { return points_.at(static_cast<std::size_t>(i)); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool has_labels() const noexcept { return !labels_.empty(); }

  std::string label(Index i) const {
    if (has_labels()) return labels_.at(static_cast<std::size_t>(i));
    return std::to_string(i);
  }

  std::optional<Index> find_label(const std::string& name) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == name) return static_cast<Index>(i);
    }
    return std::nullopt;
  }

  Segment segment(const Edge& e) const { return Segment((*this)[e.u], (*this)[e.v]); }

 private:
  std::vector<Point> points_;
  std::vector<std::string> labels_;
};

/// Adjacency lists of an edge list over n vertices.
inline std::vector<std::vector<Index>> adjacency(std::size_t n, const EdgeList& edges) {
  std::vector<std::vector<Index>> adj(n);
  for (const Edge& e : edges) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  return adj;
}

/// Spanning tree on vertices 0..n-1; validated on construction.
class Tree {
 public:
  Tree() = default;
  Tree(std::size_t n, EdgeList edges) : n_(n), edges_(std::move(edges)) {
    if (n_ == 0) throw InvalidInput("tree over zero vertices");
    if (edges_.size() != n_ - 1) {
      throw InvalidInput("tree on " + std::to_string(n_) + " vertices needs " + std::to_string(n_ - 1) +
                         " edges, got " + std::to_string(edges_.size()));
    }
    std::set<Edge> seen;
    for (const Edge& e : edges_) {
      if (e.u < 0 || static_cast<std::size_t>(e.v) >= n_ || e.u == e.v) {
        throw InvalidInput("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
      }
      if (!seen.insert(e).second) throw InvalidInput("repeated edge");
    }
    adj_ = adjacency(n_, edges_);
    std::vector<bool> seen_v(n_, false);
    std::vector<Index> stack{0};
    seen_v[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      Index x = stack.back();
      stack.pop_back();
      for (Index y : adj_[static_cast<std::size_t>(x)]) {
        if (!seen_v[static_cast<std::size_t>(y)]) {
          seen_v[static_cast<std::size_t>(y)] = true;
          ++count;
          stack.push_back(y);
        }
      }
    }
    if (count != n_) throw InvalidInput("edge list is not connected");
  }

  std::size_t size() const noexcept { return n_; }
  const EdgeList& edges() const noexcept { return edges_; }
  const std::vector<Index>& neighbours(Index v) const { return adj_.at(static_cast<std::size_t>(v)); }
  bool has_edge(Index a, Index b) const {
    const auto& nb = neighbours(a);
    return std::find(nb.begin(), nb.end(), b) != nb.end();
  }

  /// Parent pointers of the tree rooted at `root` (parent[root] == -1).
  std::vector<Index> parents_from(Index root) const {
    std::vector<Index> parent(n_, -2);
    parent[static_cast<std::size_t>(root)] = -1;
    std::vector<Index> stack{root};
    while (!stack.empty()) {
      Index x = stack.back();
      stack.pop_back();
      for (Index y : adj_[static_cast<std::size_t>(x)]) {
        if (parent[static_cast<std::size_t>(y)] == -2) {
          parent[static_cast<std::size_t>(y)] = x;
          stack.push_back(y);
        }
      }
    }
    return parent;
  }

  /// Edges of the unique u-v path, in order from u.
  EdgeList path(Index u, Index v) const {
    std::vector<Index> parent = parents_from(v);
    EdgeList out;
    for (Index x = u; x != v; x = parent[static_cast<std::size_t>(x)]) {
      out.emplace_back(x, parent[static_cast<std::size_t>(x)]);
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  EdgeList edges_;
  std::vector<std::vector<Index>> adj_;
};

}  // namespace dilatree
