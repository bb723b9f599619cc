#pragma once

#include <cstdint>
#include <vector>

#include "locinf/decomp.hpp"
#include "locinf/exact.hpp"
#include "locinf/mrf.hpp"

namespace locinf {

struct ComponentLogZ {
  std::vector<Node> nodes;
  double log_z = 0.0;
};

/// Certified bracket on log Z from one edge decomposition.
struct InferenceBounds {
  double log_z_lb = 0.0;
  double log_z_ub = 0.0;
  /// Sum over removed edges of (psi^U - psi^L); equals ub - lb.
  double gap = 0.0;
  std::vector<int> removed_edges;
  std::vector<ComponentLogZ> component_log_z;
};

/// Stitched assignment with its guaranteed distance to the optimum:
/// H(x*) - guarantee_gap <= energy <= H(x*).
struct MapEstimate {
  Assignment assignment;
  double energy = 0.0;
  double guarantee_gap = 0.0;
  std::vector<int> removed_edges;
};

/// Solves every component exactly and brackets log Z:
/// lb = sum_j log Z_j + sum_B psi^L, ub = sum_j log Z_j + sum_B psi^U.
InferenceBounds log_partition_bounds(const PairwiseMrf& mrf, const EdgeDecomposition& decomp,
                                     std::uint64_t table_cap = kDefaultTableCap);

/// Per-component exact MAP, stitched into one global assignment.
MapEstimate mode_estimate(const PairwiseMrf& mrf, const EdgeDecomposition& decomp,
                          std::uint64_t table_cap = kDefaultTableCap);

/// sum over removed edges of (psi^U - psi^L), accumulated in edge-id order.
double removed_edge_range(const PairwiseMrf& mrf, const std::vector<int>& removed_edges);

struct RelativeErrorBound {
  /// gap / lb when lb is positive, otherwise the absolute gap.
  double certified = 0.0;
  /// True when the denominator was unavailable (lb <= 0).
  bool absolute_only = false;
  /// A-priori expected relative gap eps (d* + 1) for the decomposition's
  /// target eps.
  double a_priori = 0.0;
};

RelativeErrorBound relative_error_bound(const PairwiseMrf& mrf, const InferenceBounds& bounds,
                                        const EdgeDecomposition& decomp);
RelativeErrorBound relative_error_bound(const PairwiseMrf& mrf, const EdgeDecomposition& decomp);

}  // namespace locinf
