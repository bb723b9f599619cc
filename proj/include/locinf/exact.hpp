#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "locinf/grid.hpp"
#include "locinf/mrf.hpp"

namespace locinf {

/// Budget for exhaustive enumeration: |Sigma|^n must not exceed it.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// Budget for the elimination solver: the largest intermediate table.
inline constexpr std::uint64_t kDefaultTableCap = std::uint64_t{1} << 22;

/// Budget for the transfer-matrix sweep: number of states per line.
inline constexpr std::uint64_t kDefaultTransferStates = std::uint64_t{1} << 12;

/// Per-node clamp: -1 leaves the node free, otherwise the state it is fixed to.
using Evidence = std::vector<int>;

struct MapResult {
  Assignment assignment;
  double energy = 0.0;
};

/// log Z, a MAP assignment and its energy for one (sub-)model.
struct ExactResult {
  double log_z = 0.0;
  Assignment map_assignment;
  double map_energy = 0.0;
};

/// Max-marginals in energy form for a binary model:
/// at[s] = max { H(x) : x_v = s }, -infinity when no assignment qualifies.
struct MaxMarginal {
  double at0 = 0.0;
  double at1 = 0.0;
};

/// log sum_x exp(H(x)) by full enumeration.
double brute_log_z(const PairwiseMrf& mrf, std::uint64_t cap = kDefaultEnumerationCap);

/// Lexicographically smallest maximizer of H, by full enumeration.
MapResult brute_map(const PairwiseMrf& mrf, std::uint64_t cap = kDefaultEnumerationCap);

/// Binary models only. Assignments violating `evidence` (if given) are skipped.
MaxMarginal brute_max_marginal(const PairwiseMrf& mrf, Node v, const Evidence& evidence = {},
                               std::uint64_t cap = kDefaultEnumerationCap);

/// Exact log Z and lexicographically smallest MAP by variable elimination,
/// eliminating the highest node id first.
ExactResult solve_exact(const PairwiseMrf& mrf, std::uint64_t table_cap = kDefaultTableCap);

/// Exact solution of the sub-model induced by `nodes` (sorted ascending).
/// map_assignment[i] is the state of nodes[i]; map_energy is the energy of the
/// induced sub-model. Throws CapExceeded when an elimination table would
/// exceed `table_cap` entries.
ExactResult component_solve(const PairwiseMrf& mrf, std::span<const Node> nodes,
                            std::uint64_t table_cap = kDefaultTableCap);

/// Column-sweep transfer matrix on a lattice or cris-cross layout. The sweep
/// runs along the longer side with states over the shorter one. Throws
/// UnsupportedTopology when the graph is not exactly make_lattice(shape).
double grid_transfer_log_z(const PairwiseMrf& mrf, const GridShape& shape,
                           std::uint64_t max_states = kDefaultTransferStates);

/// Max-product variant with back-pointers. Ties go to the smaller line state.
MapResult grid_transfer_map(const PairwiseMrf& mrf, const GridShape& shape,
                            std::uint64_t max_states = kDefaultTransferStates);

/// Numerically stable log(exp(a) + exp(b)) with -infinity handled.
double log_add_exp(double a, double b);

}  // namespace locinf
