#include "locinf/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "locinf/error.hpp"
#include "locinf/grid.hpp"

namespace locinf {

std::string to_string(DecompAlgorithm alg) {
  switch (alg) {
    case DecompAlgorithm::kNone: return "none";
    case DecompAlgorithm::kDbDim: return "dbdim";
    case DecompAlgorithm::kMinor: return "minor";
    case DecompAlgorithm::kGrid: return "grid";
  }
  return "?";
}

DecompAlgorithm parse_decomp_algorithm(const std::string& name) {
  if (name == "none") return DecompAlgorithm::kNone;
  if (name == "dbdim") return DecompAlgorithm::kDbDim;
  if (name == "minor" || name == "minore" || name == "minorv") return DecompAlgorithm::kMinor;
  if (name == "grid") return DecompAlgorithm::kGrid;
  throw InvalidInput("unknown decomposition algorithm '" + name + "'");
}

int max_component_size(const std::vector<std::vector<Node>>& components) {
  std::size_t m = 0;
  for (const auto& c : components) m = std::max(m, c.size());
  return static_cast<int>(m);
}

EdgeDecomposition no_decomposition(const Graph& g) {
  EdgeDecomposition d;
  d.components = connected_components(g);
  d.certificate = {0.0, max_component_size(d.components)};
  return d;
}

RadiusLaw::RadiusLaw(double eps, int K) : eps_(eps), K_(K) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("radius law: eps must lie in (0,1)");
  if (K < 1) throw InvalidInput("radius law: K must be >= 1");
  pmf_.resize(static_cast<std::size_t>(K));
  double rest = 1.0;
  double p = eps;
  for (int i = 1; i < K; ++i) {
    pmf_[static_cast<std::size_t>(i - 1)] = p;
    rest -= p;
    p *= 1.0 - eps;
  }
  pmf_.back() = K == 1 ? 1.0 : std::max(0.0, rest);
  cdf_.resize(pmf_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf_.size(); ++i) cdf_[i] = (acc += pmf_[i]);
  cdf_.back() = 1.0;
}

int RadiusLaw::sample(Rng& rng) const {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(), K_ - 1)) + 1;
}

int sample_radius(const RadiusLaw& law, Rng& rng) { return law.sample(rng); }

int k_param(double eps, double rho) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("k_param: eps must lie in (0,1)");
  if (!(rho >= 1.0)) throw InvalidInput("k_param: rho must be >= 1");
  const double k = (12.0 * rho / eps) * std::log(24.0 * rho / eps);
  return std::max(3, static_cast<int>(std::ceil(k)));
}

double dbdim_eps_for_target(double target_eps, double rho, int offset) {
  return target_eps * std::exp2(-rho - offset);
}

int minor_lambda_for_target(double target_eps, int rounds, int max_degree) {
  if (!(target_eps > 0.0)) throw InvalidInput("minor_lambda_for_target: eps must be > 0");
  return static_cast<int>(std::ceil(rounds * (max_degree + 1) / target_eps));
}

VertexDecomposition db_dim_vertex(const Graph& g, double eps, int K, std::uint64_t seed) {
  const RadiusLaw law(eps, K);
  Rng rng(derive_seed(seed, {0xdbd1ULL}));
  const int n = g.num_nodes();

  enum : char { kWhite, kRed, kBlue };
  std::vector<char> color(static_cast<std::size_t>(n), kWhite);
  // White nodes in a swap-remove array so a uniform pick is O(1).
  std::vector<Node> white(static_cast<std::size_t>(n));
  std::vector<int> pos(static_cast<std::size_t>(n));
  for (Node v = 0; v < n; ++v) white[static_cast<std::size_t>(v)] = pos[static_cast<std::size_t>(v)] = v;
  auto retire = [&](Node v) {
    const int p = pos[static_cast<std::size_t>(v)];
    const Node last = white.back();
    white[static_cast<std::size_t>(p)] = last;
    pos[static_cast<std::size_t>(last)] = p;
    white.pop_back();
  };

  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::vector<Node> touched;
  std::deque<Node> queue;
  while (!white.empty()) {
    const Node u = white[static_cast<std::size_t>(rng.uniform_below(white.size()))];
    const int q = law.sample(rng);
    // Distances in G (not in the white subgraph), explored up to q.
    touched.assign(1, u);
    dist[static_cast<std::size_t>(u)] = 0;
    queue.assign(1, u);
    while (!queue.empty()) {
      const Node x = queue.front();
      queue.pop_front();
      const int dx = dist[static_cast<std::size_t>(x)];
      if (dx == q) continue;
      for (Node w : g.neighbors(x)) {
        if (dist[static_cast<std::size_t>(w)] >= 0) continue;
        dist[static_cast<std::size_t>(w)] = dx + 1;
        touched.push_back(w);
        queue.push_back(w);
      }
    }
    for (Node x : touched) {
      if (color[static_cast<std::size_t>(x)] == kWhite) {
        color[static_cast<std::size_t>(x)] = dist[static_cast<std::size_t>(x)] == q ? kBlue : kRed;
        retire(x);
      }
      dist[static_cast<std::size_t>(x)] = -1;
    }
  }

  VertexDecomposition d;
  std::vector<bool> removed(static_cast<std::size_t>(n), false);
  for (Node v = 0; v < n; ++v) {
    if (color[static_cast<std::size_t>(v)] == kBlue) {
      d.removed_nodes.push_back(v);
      removed[static_cast<std::size_t>(v)] = true;
    }
  }
  d.components = components_without_nodes(g, removed);
  d.params.algorithm = DecompAlgorithm::kDbDim;
  d.params.eps = eps;
  d.params.K = K;
  d.params.seed = seed;
  return d;
}

Graph line_graph(const Graph& g) {
  std::vector<Edge> edges;
  for (Node v = 0; v < g.num_nodes(); ++v) {
    const auto inc = g.incident_edges(v);
    for (std::size_t i = 0; i < inc.size(); ++i)
      for (std::size_t j = i + 1; j < inc.size(); ++j) edges.push_back({inc[i], inc[j]});
  }
  // Two edges share at most one endpoint in a simple graph, so no duplicates.
  return Graph(g.num_edges(), std::move(edges));
}

namespace {

EdgeDecomposition finish_edge_decomposition(const Graph& g, std::vector<bool> removed,
                                            DecompParams params, double target_eps) {
  EdgeDecomposition d;
  for (int e = 0; e < g.num_edges(); ++e)
    if (removed[static_cast<std::size_t>(e)]) d.removed_edges.push_back(e);
  d.components = components_without_edges(g, removed);
  d.params = params;
  d.certificate = {target_eps, max_component_size(d.components)};
  return d;
}

// BFS depths from `root` over the nodes/edges accepted by the filters.
template <typename KeepNode, typename KeepEdge>
void bfs_depths(const Graph& g, Node root, KeepNode keep_node, KeepEdge keep_edge,
                std::vector<int>& depth) {
  std::deque<Node> queue{root};
  depth[static_cast<std::size_t>(root)] = 0;
  while (!queue.empty()) {
    const Node x = queue.front();
    queue.pop_front();
    const auto nb = g.neighbors(x);
    const auto ie = g.incident_edges(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const Node w = nb[i];
      if (depth[static_cast<std::size_t>(w)] >= 0 || !keep_node(w) || !keep_edge(ie[i])) continue;
      depth[static_cast<std::size_t>(w)] = depth[static_cast<std::size_t>(x)] + 1;
      queue.push_back(w);
    }
  }
}

void check_minor_params(int rounds, int lambda) {
  if (rounds < 1) throw InvalidInput("minor decomposition: rounds must be >= 1");
  if (lambda < 1) throw InvalidInput("minor decomposition: lambda must be >= 1");
}

int checked_level(const LevelSource& levels, int round, int comp, int lambda) {
  const int L = levels(round, comp);
  if (L < 0 || L >= lambda) throw InvalidInput("minor decomposition: level out of range");
  return L;
}

}  // namespace

EdgeDecomposition db_dim_edge(const Graph& g, double eps, int K, std::uint64_t seed) {
  const Graph lg = line_graph(g);
  const VertexDecomposition vd = db_dim_vertex(lg, eps, K, seed);
  std::vector<bool> removed(static_cast<std::size_t>(g.num_edges()), false);
  for (Node e : vd.removed_nodes) removed[static_cast<std::size_t>(e)] = true;
  return finish_edge_decomposition(g, std::move(removed), vd.params, std::min(1.0, 2.0 * eps));
}

LevelSource seeded_levels(std::uint64_t seed, int lambda) {
  return [seed, lambda](int round, int comp) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(comp)}));
    return static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(lambda)));
  };
}

VertexDecomposition minor_v(const Graph& g, int rounds, int lambda, std::uint64_t seed) {
  VertexDecomposition d = minor_v(g, rounds, lambda, seeded_levels(seed, lambda));
  d.params.seed = seed;
  return d;
}

VertexDecomposition minor_v(const Graph& g, int rounds, int lambda, const LevelSource& levels) {
  check_minor_params(rounds, lambda);
  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<bool> removed(n, false);
  std::vector<int> depth(n, -1);
  auto keep_node = [&](Node v) { return !removed[static_cast<std::size_t>(v)]; };
  auto keep_edge = [](int) { return true; };
  for (int round = 0; round < rounds; ++round) {
    const auto comps = components_without_nodes(g, removed);
    std::vector<Node> cut;
    for (std::size_t j = 0; j < comps.size(); ++j) {
      const auto& comp = comps[j];
      bfs_depths(g, comp.front(), keep_node, keep_edge, depth);
      const int L = checked_level(levels, round, static_cast<int>(j), lambda);
      for (Node v : comp) {
        if (depth[static_cast<std::size_t>(v)] % lambda == L) cut.push_back(v);
        depth[static_cast<std::size_t>(v)] = -1;
      }
    }
    for (Node v : cut) removed[static_cast<std::size_t>(v)] = true;
  }
  VertexDecomposition d;
  for (Node v = 0; v < g.num_nodes(); ++v)
    if (removed[static_cast<std::size_t>(v)]) d.removed_nodes.push_back(v);
  d.components = components_without_nodes(g, removed);
  d.params.algorithm = DecompAlgorithm::kMinor;
  d.params.rounds = rounds;
  d.params.lambda = lambda;
  return d;
}

EdgeDecomposition minor_e(const Graph& g, int rounds, int lambda, std::uint64_t seed) {
  EdgeDecomposition d = minor_e(g, rounds, lambda, seeded_levels(seed, lambda));
  d.params.seed = seed;
  return d;
}

EdgeDecomposition minor_e(const Graph& g, int rounds, int lambda, const LevelSource& levels) {
  check_minor_params(rounds, lambda);
  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<bool> removed(static_cast<std::size_t>(g.num_edges()), false);
  std::vector<int> depth(n, -1);
  auto keep_node = [](Node) { return true; };
  auto keep_edge = [&](int e) { return !removed[static_cast<std::size_t>(e)]; };
  for (int round = 0; round < rounds; ++round) {
    const auto comps = components_without_edges(g, removed);
    std::vector<int> cut;
    for (std::size_t j = 0; j < comps.size(); ++j) {
      const auto& comp = comps[j];
      bfs_depths(g, comp.front(), keep_node, keep_edge, depth);
      const int L = checked_level(levels, round, static_cast<int>(j), lambda);
      for (Node v : comp) {
        const auto nb = g.neighbors(v);
        const auto ie = g.incident_edges(v);
        for (std::size_t i = 0; i < nb.size(); ++i) {
          // Visit each surviving edge once, from its lower-id endpoint.
          if (nb[i] < v || removed[static_cast<std::size_t>(ie[i])]) continue;
          const int shallow = std::min(depth[static_cast<std::size_t>(v)], depth[static_cast<std::size_t>(nb[i])]);
          if (shallow % lambda == L) cut.push_back(ie[i]);
        }
      }
      for (Node v : comp) depth[static_cast<std::size_t>(v)] = -1;
    }
    for (int e : cut) removed[static_cast<std::size_t>(e)] = true;
  }
  DecompParams p;
  p.algorithm = DecompAlgorithm::kMinor;
  p.rounds = rounds;
  p.lambda = lambda;
  return finish_edge_decomposition(g, std::move(removed), p,
                                   std::min(1.0, static_cast<double>(rounds) / lambda));
}

EdgeDecomposition grid_decomp(int n, int k, int l1, int l2) {
  if (k < 1 || k > n) throw InvalidInput("grid_decomp: need 1 <= k <= n");
  if (l1 < 0 || l1 >= k || l2 < 0 || l2 >= k) throw InvalidInput("grid_decomp: need 0 <= l1, l2 < k");
  const GridShape shape{n, n, false};
  const Graph g = make_lattice(shape);
  std::vector<bool> removed(static_cast<std::size_t>(g.num_edges()), false);
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const bool horizontal = shape.row_of(ed.u) == shape.row_of(ed.v);
    if (horizontal ? shape.col_of(ed.u) % k == l1 : shape.row_of(ed.u) % k == l2)
      removed[static_cast<std::size_t>(e)] = true;
  }
  DecompParams p;
  p.algorithm = DecompAlgorithm::kGrid;
  p.k = k;
  p.l1 = l1;
  p.l2 = l2;
  return finish_edge_decomposition(g, std::move(removed), p, 1.0 / k);
}

EdgeDecomposition lift_decomposition(const Graph& sub, const EdgeDecomposition& d,
                                     const Graph& super) {
  if (sub.num_nodes() != super.num_nodes())
    throw InvalidInput("lift_decomposition: node sets differ");
  std::vector<int> comp_of(static_cast<std::size_t>(sub.num_nodes()), -1);
  for (std::size_t j = 0; j < d.components.size(); ++j)
    for (Node v : d.components[j]) comp_of[static_cast<std::size_t>(v)] = static_cast<int>(j);
  std::vector<bool> removed(static_cast<std::size_t>(super.num_edges()), false);
  for (int e : d.removed_edges) {
    const Edge& ed = sub.edge(e);
    const auto se = super.edge_index(ed.u, ed.v);
    if (!se) throw InvalidInput("lift_decomposition: edge missing from supergraph");
    removed[static_cast<std::size_t>(*se)] = true;
  }
  for (int e = 0; e < super.num_edges(); ++e) {
    const Edge& ed = super.edge(e);
    if (comp_of[static_cast<std::size_t>(ed.u)] != comp_of[static_cast<std::size_t>(ed.v)])
      removed[static_cast<std::size_t>(e)] = true;
  }
  return finish_edge_decomposition(super, std::move(removed), d.params, d.certificate.target_eps);
}

namespace {

void format_components(std::ostringstream& os, const std::vector<std::vector<Node>>& comps) {
  os << "components " << comps.size() << '\n';
  for (const auto& c : comps) {
    os << c.size() << ':';
    for (Node v : c) os << ' ' << v;
    os << '\n';
  }
}

}  // namespace

std::string format_decomposition(const Graph& g, const EdgeDecomposition& d) {
  std::ostringstream os;
  os << "decomposition " << to_string(d.params.algorithm) << " edges\n";
  os << "removed " << d.removed_edges.size() << '\n';
  for (int e : d.removed_edges) os << g.edge(e).u << ' ' << g.edge(e).v << '\n';
  format_components(os, d.components);
  os << "certificate eps " << d.certificate.target_eps << " delta " << d.certificate.max_component
     << '\n';
  return os.str();
}

std::string format_decomposition(const Graph&, const VertexDecomposition& d) {
  std::ostringstream os;
  os << "decomposition " << to_string(d.params.algorithm) << " nodes\n";
  os << "removed " << d.removed_nodes.size() << '\n';
  for (Node v : d.removed_nodes) os << v << '\n';
  format_components(os, d.components);
  os << "certificate delta " << max_component_size(d.components) << '\n';
  return os.str();
}

}  // namespace locinf
