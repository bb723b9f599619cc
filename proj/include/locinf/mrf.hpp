#pragma once

#include <span>
#include <vector>

#include "locinf/graph.hpp"

namespace locinf {

/// Per-node state, each entry in 0..alphabet_size-1.
using Assignment = std::vector<int>;

/// Potential tables as read from a file or produced by a generator, before
/// they are checked for non-negativity.
///
/// node_tables holds n rows of `alphabet_size` entries. edge_tables holds one
/// row of alphabet_size^2 entries per edge (in graph edge order), row-major in
/// (x_u, x_v) with u < v.
struct MrfTables {
  Graph graph;
  int alphabet_size = 2;
  std::vector<double> node_tables;
  std::vector<double> edge_tables;
};

/// Pairwise Markov random field with non-negative potentials,
/// Pr[x] proportional to exp(sum_v phi_v(x_v) + sum_uv psi_uv(x_u, x_v)).
class PairwiseMrf {
 public:
  /// Throws InvalidInput unless every entry is finite and >= 0 and the table
  /// sizes match the graph.
  explicit PairwiseMrf(MrfTables tables);

  const Graph& graph() const { return t_.graph; }
  int num_nodes() const { return t_.graph.num_nodes(); }
  int alphabet_size() const { return t_.alphabet_size; }
  const MrfTables& tables() const { return t_; }

  std::span<const double> node_table(Node v) const;
  std::span<const double> edge_table(int e) const;

  double phi(Node v, int s) const {
    return t_.node_tables[static_cast<std::size_t>(v) * sigma() + static_cast<std::size_t>(s)];
  }
  /// psi of edge e with arguments in canonical (min id, max id) order.
  double psi(int e, int x_low, int x_high) const {
    return t_.edge_tables[static_cast<std::size_t>(e) * sigma() * sigma() +
                          static_cast<std::size_t>(x_low) * sigma() + static_cast<std::size_t>(x_high)];
  }
  /// psi between a and b evaluated at (x_a, x_b); transposes as needed.
  double pair(int e, Node a, int x_a, int x_b) const {
    return a == graph().edge(e).u ? psi(e, x_a, x_b) : psi(e, x_b, x_a);
  }

  double psi_upper(int e) const { return psi_upper_[static_cast<std::size_t>(e)]; }
  double psi_lower(int e) const { return psi_lower_[static_cast<std::size_t>(e)]; }

 private:
  std::size_t sigma() const { return static_cast<std::size_t>(t_.alphabet_size); }

  MrfTables t_;
  std::vector<double> psi_upper_;
  std::vector<double> psi_lower_;
};

struct ShiftedMrf {
  PairwiseMrf mrf;
  /// Sum of the per-table constants added; H_shifted(x) = H_raw(x) + total_shift.
  double total_shift;
};

/// Adds max(0, -min T) to every table T so all entries become >= 0. The
/// distribution is unchanged. Throws InvalidInput on non-finite entries.
ShiftedMrf affine_shift(MrfTables raw);

/// H(x) = sum_v phi_v(x_v) + sum_e psi_e(x_u, x_v), nodes first then edges in
/// edge order.
double energy(const PairwiseMrf& mrf, std::span<const int> x);

/// Throws InvalidInput unless x has one valid state per node.
void validate_assignment(const PairwiseMrf& mrf, std::span<const int> x);

/// Sub-model on `nodes` (sorted ascending): member node potentials and the
/// potentials of edges with both ends inside. Local node i is nodes[i].
PairwiseMrf induced_mrf(const PairwiseMrf& mrf, std::span<const Node> nodes);

/// Same nodes, with the listed edge ids (and their potentials) dropped.
PairwiseMrf without_edges(const PairwiseMrf& mrf, std::span<const int> edges);

}  // namespace locinf
