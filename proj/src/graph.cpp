#include "locinf/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <string>

#include "locinf/error.hpp"

namespace locinf {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw InvalidInput("graph: negative node count");
  for (Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw InvalidInput("graph: edge endpoint out of range");
    if (e.u == e.v)
      throw InvalidInput("graph: self-loop at node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw InvalidInput("graph: duplicate edge");
  edges_ = std::move(edges);

  std::vector<std::size_t> deg(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges_) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 0; v < n; ++v)
    offsets_[static_cast<std::size_t>(v) + 1] = offsets_[static_cast<std::size_t>(v)] + deg[static_cast<std::size_t>(v)];
  adj_.resize(offsets_.back());
  adj_edge_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (int id = 0; id < num_edges(); ++id) {
    const Edge& e = edges_[static_cast<std::size_t>(id)];
    auto& fu = fill[static_cast<std::size_t>(e.u)];
    adj_[fu] = e.v;
    adj_edge_[fu++] = id;
    auto& fv = fill[static_cast<std::size_t>(e.v)];
    adj_[fv] = e.u;
    adj_edge_[fv++] = id;
  }
  // Sort each neighbor list, carrying the edge ids along.
  for (int v = 0; v < n; ++v) {
    const auto b = offsets_[static_cast<std::size_t>(v)];
    const auto len = offsets_[static_cast<std::size_t>(v) + 1] - b;
    std::vector<std::size_t> order(len);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t c) { return adj_[b + a] < adj_[b + c]; });
    std::vector<Node> nb(len);
    std::vector<int> ne(len);
    for (std::size_t i = 0; i < len; ++i) {
      nb[i] = adj_[b + order[i]];
      ne[i] = adj_edge_[b + order[i]];
    }
    std::copy(nb.begin(), nb.end(), adj_.begin() + static_cast<std::ptrdiff_t>(b));
    std::copy(ne.begin(), ne.end(), adj_edge_.begin() + static_cast<std::ptrdiff_t>(b));
  }
}

std::span<const Node> Graph::neighbors(Node v) const {
  const auto b = offsets_[static_cast<std::size_t>(v)];
  const auto e = offsets_[static_cast<std::size_t>(v) + 1];
  return {adj_.data() + b, e - b};
}

std::span<const int> Graph::incident_edges(Node v) const {
  const auto b = offsets_[static_cast<std::size_t>(v)];
  const auto e = offsets_[static_cast<std::size_t>(v) + 1];
  return {adj_edge_.data() + b, e - b};
}

int Graph::max_degree() const {
  int d = 0;
  for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
  return d;
}

std::optional<int> Graph::edge_index(Node u, Node v) const {
  if (u > v) std::swap(u, v);
  const Edge key{u, v};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<int>(it - edges_.begin());
}

std::vector<int> bfs_distances(const Graph& g, Node source) {
  std::vector<int> dist(static_cast<std::size_t>(g.num_nodes()), kUnreachable);
  std::deque<Node> queue{source};
  dist[static_cast<std::size_t>(source)] = 0;
  while (!queue.empty()) {
    const Node u = queue.front();
    queue.pop_front();
    for (Node w : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(w)] != kUnreachable) continue;
      dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

MetricView::MetricView(const Graph& g) : n_(static_cast<std::size_t>(g.num_nodes())) {
  dist_.reserve(n_ * n_);
  for (Node v = 0; v < g.num_nodes(); ++v) {
    auto row = bfs_distances(g, v);
    dist_.insert(dist_.end(), row.begin(), row.end());
  }
}

int MetricView::diameter() const {
  int d = 0;
  for (int x : dist_)
    if (x != kUnreachable) d = std::max(d, x);
  return d;
}

std::vector<Node> shortest_path_ball(const Graph& g, Node v, double r) {
  const auto dist = bfs_distances(g, v);
  std::vector<Node> ball;
  for (Node u = 0; u < g.num_nodes(); ++u) {
    const int d = dist[static_cast<std::size_t>(u)];
    if (d != kUnreachable && static_cast<double>(d) < r) ball.push_back(u);
  }
  return ball;
}

namespace {

// Components of the graph restricted to kept nodes and kept edges.
template <typename KeepNode, typename KeepEdge>
std::vector<std::vector<Node>> components_filtered(const Graph& g, KeepNode keep_node,
                                                   KeepEdge keep_edge) {
  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<char> seen(n, 0);
  std::vector<std::vector<Node>> out;
  std::vector<Node> stack;
  for (Node s = 0; s < g.num_nodes(); ++s) {
    if (seen[static_cast<std::size_t>(s)] || !keep_node(s)) continue;
    std::vector<Node> comp;
    stack.assign(1, s);
    seen[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      const Node u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      const auto nb = g.neighbors(u);
      const auto ie = g.incident_edges(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        const Node w = nb[i];
        if (seen[static_cast<std::size_t>(w)] || !keep_node(w) || !keep_edge(ie[i])) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace

std::vector<std::vector<Node>> connected_components(const Graph& g) {
  return components_filtered(g, [](Node) { return true; }, [](int) { return true; });
}

std::vector<std::vector<Node>> components_without_edges(const Graph& g,
                                                        const std::vector<bool>& removed_edge) {
  return components_filtered(
      g, [](Node) { return true; },
      [&](int e) { return !removed_edge[static_cast<std::size_t>(e)]; });
}

std::vector<std::vector<Node>> components_without_nodes(const Graph& g,
                                                        const std::vector<bool>& removed_node) {
  return components_filtered(
      g, [&](Node v) { return !removed_node[static_cast<std::size_t>(v)]; },
      [](int) { return true; });
}

Graph induced_subgraph(const Graph& g, std::span<const Node> nodes) {
  std::vector<int> local(static_cast<std::size_t>(g.num_nodes()), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) local[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    const int a = local[static_cast<std::size_t>(e.u)];
    const int b = local[static_cast<std::size_t>(e.v)];
    if (a >= 0 && b >= 0) edges.push_back({a, b});
  }
  return Graph(static_cast<int>(nodes.size()), std::move(edges));
}

namespace {

using Mask = std::uint64_t;

// Smallest number of sets from `balls` covering `target`; gives up (returns
// limit+1) once `limit` sets would be exceeded.
int min_cover(Mask target, const std::vector<Mask>& balls, int limit) {
  if (target == 0) return 0;
  if (limit == 0) return 1;
  const int x = std::countr_zero(target);
  int best = limit + 1;
  for (Mask b : balls) {
    if (!((b >> x) & 1U)) continue;
    const int sub = min_cover(target & ~b, balls, std::min(limit, best - 1) - 1);
    best = std::min(best, sub + 1);
    if (best == 1) break;
  }
  return best;
}

}  // namespace

double doubling_dimension_exact(const Graph& g, int max_nodes) {
  const int n = g.num_nodes();
  if (n > max_nodes || n > 64)
    throw CapExceeded("doubling_dimension_exact: exponential operation refused for " +
                      std::to_string(n) + " nodes (cap " + std::to_string(std::min(max_nodes, 64)) +
                      ")");
  if (n <= 1) return 0.0;
  const MetricView metric(g);
  const int diam = metric.diameter();

  auto ball_mask = [&](Node c, double r) {
    Mask m = 0;
    for (Node u = 0; u < n; ++u) {
      const int d = metric.distance(c, u);
      if (d != kUnreachable && static_cast<double>(d) < r) m |= Mask{1} << u;
    }
    return m;
  };

  int worst = 1;
  // r in {0.5, 1.0, ..., diam + 1}; ball contents only change at integers,
  // the half-integers matter for r/2.
  for (int twice_r = 1; twice_r <= 2 * (diam + 1); ++twice_r) {
    const double r = twice_r / 2.0;
    std::vector<Mask> half_balls;
    for (Node c = 0; c < n; ++c) half_balls.push_back(ball_mask(c, r / 2.0));
    std::sort(half_balls.begin(), half_balls.end());
    half_balls.erase(std::unique(half_balls.begin(), half_balls.end()), half_balls.end());
    // Drop balls strictly contained in another one; they never help a cover.
    std::vector<Mask> maximal;
    for (Mask b : half_balls) {
      bool dominated = false;
      for (Mask o : half_balls)
        if (o != b && (o & b) == b) dominated = true;
      if (!dominated) maximal.push_back(b);
    }
    for (Node v = 0; v < n; ++v) {
      const Mask target = ball_mask(v, r);
      const int k = min_cover(target, maximal, std::popcount(target));
      worst = std::max(worst, k);
    }
  }
  return std::log2(static_cast<double>(worst));
}

}  // namespace locinf
