#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace locinf {

using Node = int;

/// Unordered edge stored with u < v.
struct Edge {
  Node u = 0;
  Node v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on nodes 0..n-1.
///
/// Edges are kept sorted lexicographically and are addressed by their index
/// in that order. Neighbor lists are sorted ascending; this order is the
/// canonical neighbor ordering used everywhere a walk or a search needs one.
class Graph {
 public:
  Graph() = default;
  /// Throws InvalidInput on self-loops, duplicate edges or bad node ids.
  Graph(int n, std::vector<Edge> edges);

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

  std::span<const Node> neighbors(Node v) const;
  /// Edge ids incident to v, aligned with neighbors(v).
  std::span<const int> incident_edges(Node v) const;
  int degree(Node v) const { return static_cast<int>(neighbors(v).size()); }
  int max_degree() const;

  /// Index of edge {u, v} or std::nullopt.
  std::optional<int> edge_index(Node u, Node v) const;
  bool has_edge(Node u, Node v) const { return edge_index(u, v).has_value(); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;  // CSR offsets, size n+1
  std::vector<Node> adj_;
  std::vector<int> adj_edge_;
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Hop distances from `source`; kUnreachable for other components.
std::vector<int> bfs_distances(const Graph& g, Node source);

/// All-pairs shortest-path distances, computed once at construction.
class MetricView {
 public:
  explicit MetricView(const Graph& g);
  int distance(Node a, Node b) const {
    return dist_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)];
  }
  int num_nodes() const { return static_cast<int>(n_); }
  /// Largest finite distance between two nodes.
  int diameter() const;

 private:
  std::size_t n_;
  std::vector<int> dist_;
};

/// {u : d(u, v) < r}, sorted ascending. The inequality is strict.
std::vector<Node> shortest_path_ball(const Graph& g, Node v, double r);

/// Connected components, each sorted ascending, ordered by smallest member.
std::vector<std::vector<Node>> connected_components(const Graph& g);

/// Components of (V, E \ removed). `removed_edge` is indexed by edge id.
std::vector<std::vector<Node>> components_without_edges(
    const Graph& g, const std::vector<bool>& removed_edge);

/// Components of the subgraph induced on V \ removed. Removed nodes are not
/// part of any component.
std::vector<std::vector<Node>> components_without_nodes(
    const Graph& g, const std::vector<bool>& removed_node);

/// Subgraph induced by `nodes` (sorted), relabelled 0..|nodes|-1 in order.
Graph induced_subgraph(const Graph& g, std::span<const Node> nodes);

inline constexpr int kDefaultDoublingCap = 12;

/// Doubling dimension by exhaustive covering: log2 of the largest, over
/// centers v and radii r, minimum number of radius-r/2 balls whose union
/// contains B(v, r). Radii range over the half-integers up to diameter+1.
/// Throws CapExceeded when the graph has more than `max_nodes` nodes.
double doubling_dimension_exact(const Graph& g, int max_nodes = kDefaultDoublingCap);

}  // namespace locinf
