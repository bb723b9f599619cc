#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "locinf/graph.hpp"
#include "locinf/rng.hpp"

namespace locinf {

enum class DecompAlgorithm { kNone, kDbDim, kMinor, kGrid };

std::string to_string(DecompAlgorithm alg);
/// Accepts "none", "dbdim", "minorv"/"minore"/"minor", "grid".
DecompAlgorithm parse_decomp_algorithm(const std::string& name);

/// Parameters a decomposition was produced with. Unused fields stay zero.
struct DecompParams {
  DecompAlgorithm algorithm = DecompAlgorithm::kNone;
  double eps = 0.0;
  int K = 0;
  int rounds = 0;
  int lambda = 0;
  int k = 0;
  int l1 = 0;
  int l2 = 0;
  std::uint64_t seed = 0;
};

/// Removed node set B and the components of G minus B.
struct VertexDecomposition {
  std::vector<Node> removed_nodes;  // sorted
  std::vector<std::vector<Node>> components;
  DecompParams params;
};

/// Target removal probability and the largest component actually produced.
struct DecompCertificate {
  double target_eps = 0.0;
  int max_component = 0;
};

/// Removed edge set B (edge ids, sorted) and the components of (V, E \ B).
struct EdgeDecomposition {
  std::vector<int> removed_edges;
  std::vector<std::vector<Node>> components;
  DecompParams params;
  DecompCertificate certificate;
};

/// The trivial decomposition: nothing removed, components of G.
EdgeDecomposition no_decomposition(const Graph& g);

/// Radius distribution on {1..K}: Pr[Q=i] = eps (1-eps)^(i-1) for i < K and
/// the remaining mass (1-eps)^(K-1) at K.
class RadiusLaw {
 public:
  RadiusLaw(double eps, int K);

  double eps() const { return eps_; }
  int K() const { return K_; }
  double pmf(int i) const { return pmf_[static_cast<std::size_t>(i - 1)]; }
  /// Draws Q by inversion of the cumulative distribution.
  int sample(Rng& rng) const;

 private:
  double eps_;
  int K_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

int sample_radius(const RadiusLaw& law, Rng& rng);

/// Truncation level ceil((12 rho / eps) ln(24 rho / eps)), at least 3.
int k_param(double eps, double rho);

/// Db-dim input eps that yields the target final eps on a graph of doubling
/// dimension rho: eps * 2^-(rho + offset). The default offset 3 is the value
/// stated with the log-partition guarantee; its proof only needs 2.
double dbdim_eps_for_target(double target_eps, double rho, int offset = 3);

/// Minor-e level period for a target eps: ceil(r (d* + 1) / eps).
int minor_lambda_for_target(double target_eps, int rounds, int max_degree);

/// Ball-carving vertex decomposition for graphs of low doubling dimension.
VertexDecomposition db_dim_vertex(const Graph& g, double eps, int K, std::uint64_t seed);

/// Graph whose nodes are the edges of g (in edge-id order), adjacent when the
/// edges share an endpoint.
Graph line_graph(const Graph& g);

/// Ball carving on the line graph, mapped back to removed edges.
EdgeDecomposition db_dim_edge(const Graph& g, double eps, int K, std::uint64_t seed);

/// Picks the BFS level offset L in [0, lambda) for (round, component index).
using LevelSource = std::function<int(int round, int component_index)>;

/// Level source drawing uniformly from a stream derived from
/// (seed, round, component index).
LevelSource seeded_levels(std::uint64_t seed, int lambda);

/// BFS-layer vertex cutting for minor-excluded graphs: `rounds` rounds, each
/// removing the nodes at depth = L (mod lambda) of a BFS tree rooted at the
/// lowest id of every current component.
VertexDecomposition minor_v(const Graph& g, int rounds, int lambda, std::uint64_t seed);
VertexDecomposition minor_v(const Graph& g, int rounds, int lambda, const LevelSource& levels);

/// Edge version: removes every edge whose shallower endpoint has depth = L
/// (mod lambda), tree and non-tree edges alike.
EdgeDecomposition minor_e(const Graph& g, int rounds, int lambda, std::uint64_t seed);
EdgeDecomposition minor_e(const Graph& g, int rounds, int lambda, const LevelSource& levels);

/// Slab decomposition of the n x n grid (layout of make_lattice): horizontal
/// edges whose left end has X = l1 (mod k) and vertical edges whose bottom
/// end has Y = l2 (mod k).
EdgeDecomposition grid_decomp(int n, int k, int l1, int l2);

/// Extends a decomposition of `sub` (same node set, subset of the edges of
/// `super`) to `super`: every extra edge joining two different components is
/// removed as well, so the components are unchanged.
EdgeDecomposition lift_decomposition(const Graph& sub, const EdgeDecomposition& d,
                                     const Graph& super);

/// Largest component size.
int max_component_size(const std::vector<std::vector<Node>>& components);

/// Text block listing B and the components; used by the CLI.
std::string format_decomposition(const Graph& g, const EdgeDecomposition& d);
std::string format_decomposition(const Graph& g, const VertexDecomposition& d);

}  // namespace locinf
