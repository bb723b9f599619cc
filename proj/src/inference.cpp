#include "locinf/inference.hpp"

#include <string>

#include "locinf/error.hpp"

namespace locinf {

namespace {

void check_decomposition(const PairwiseMrf& mrf, const EdgeDecomposition& d) {
  std::size_t covered = 0;
  for (const auto& c : d.components) covered += c.size();
  if (covered != static_cast<std::size_t>(mrf.num_nodes()))
    throw InvalidInput("decomposition does not partition the model's nodes");
  for (int e : d.removed_edges)
    if (e < 0 || e >= mrf.graph().num_edges()) throw InvalidInput("decomposition: bad edge id");
}

// Components are solved on (V, E \ B): a removed edge whose ends stay in one
// component is accounted for only through psi^L / psi^U.
PairwiseMrf residual(const PairwiseMrf& mrf, const EdgeDecomposition& d) {
  return without_edges(mrf, d.removed_edges);
}

}  // namespace

double removed_edge_range(const PairwiseMrf& mrf, const std::vector<int>& removed_edges) {
  double gap = 0.0;
  for (int e : removed_edges) gap += mrf.psi_upper(e) - mrf.psi_lower(e);
  return gap;
}

InferenceBounds log_partition_bounds(const PairwiseMrf& mrf, const EdgeDecomposition& decomp,
                                     std::uint64_t table_cap) {
  check_decomposition(mrf, decomp);
  InferenceBounds b;
  const PairwiseMrf rest = residual(mrf, decomp);
  double sum_log_z = 0.0;
  for (const auto& comp : decomp.components) {
    const ExactResult r = component_solve(rest, comp, table_cap);
    b.component_log_z.push_back({comp, r.log_z});
    sum_log_z += r.log_z;
  }
  double lower = 0.0;
  double upper = 0.0;
  for (int e : decomp.removed_edges) {
    lower += mrf.psi_lower(e);
    upper += mrf.psi_upper(e);
  }
  b.log_z_lb = sum_log_z + lower;
  b.log_z_ub = sum_log_z + upper;
  b.gap = removed_edge_range(mrf, decomp.removed_edges);
  b.removed_edges = decomp.removed_edges;
  return b;
}

MapEstimate mode_estimate(const PairwiseMrf& mrf, const EdgeDecomposition& decomp,
                          std::uint64_t table_cap) {
  check_decomposition(mrf, decomp);
  MapEstimate m;
  m.assignment.assign(static_cast<std::size_t>(mrf.num_nodes()), 0);
  const PairwiseMrf rest = residual(mrf, decomp);
  for (const auto& comp : decomp.components) {
    const ExactResult r = component_solve(rest, comp, table_cap);
    for (std::size_t i = 0; i < comp.size(); ++i)
      m.assignment[static_cast<std::size_t>(comp[i])] = r.map_assignment[i];
  }
  m.energy = energy(mrf, m.assignment);
  m.guarantee_gap = removed_edge_range(mrf, decomp.removed_edges);
  m.removed_edges = decomp.removed_edges;
  return m;
}

RelativeErrorBound relative_error_bound(const PairwiseMrf& mrf, const InferenceBounds& bounds,
                                        const EdgeDecomposition& decomp) {
  RelativeErrorBound r;
  if (bounds.gap == 0.0) {
    r.certified = 0.0;
  } else if (bounds.log_z_lb > 0.0) {
    r.certified = bounds.gap / bounds.log_z_lb;
  } else {
    r.certified = bounds.gap;
    r.absolute_only = true;
  }
  r.a_priori = decomp.certificate.target_eps * (mrf.graph().max_degree() + 1);
  return r;
}

RelativeErrorBound relative_error_bound(const PairwiseMrf& mrf, const EdgeDecomposition& decomp) {
  return relative_error_bound(mrf, log_partition_bounds(mrf, decomp), decomp);
}

}  // namespace locinf
