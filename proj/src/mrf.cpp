#include "locinf/mrf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "locinf/error.hpp"

namespace locinf {

namespace {

void check_sizes(const MrfTables& t) {
  if (t.alphabet_size < 2) throw InvalidInput("mrf: alphabet size must be >= 2");
  const auto s = static_cast<std::size_t>(t.alphabet_size);
  if (t.node_tables.size() != static_cast<std::size_t>(t.graph.num_nodes()) * s)
    throw InvalidInput("mrf: node table size does not match graph");
  if (t.edge_tables.size() != static_cast<std::size_t>(t.graph.num_edges()) * s * s)
    throw InvalidInput("mrf: edge table size does not match graph");
}

void check_finite(const std::vector<double>& values) {
  for (double x : values)
    if (!std::isfinite(x)) throw InvalidInput("mrf: non-finite potential entry");
}

}  // namespace

PairwiseMrf::PairwiseMrf(MrfTables tables) : t_(std::move(tables)) {
  check_sizes(t_);
  check_finite(t_.node_tables);
  check_finite(t_.edge_tables);
  auto negative = [](double x) { return x < 0.0; };
  if (std::any_of(t_.node_tables.begin(), t_.node_tables.end(), negative) ||
      std::any_of(t_.edge_tables.begin(), t_.edge_tables.end(), negative))
    throw InvalidInput("mrf: negative potential entry (apply affine_shift first)");

  const int m = t_.graph.num_edges();
  psi_upper_.resize(static_cast<std::size_t>(m));
  psi_lower_.resize(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) {
    const auto row = edge_table(e);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    psi_lower_[static_cast<std::size_t>(e)] = *lo;
    psi_upper_[static_cast<std::size_t>(e)] = *hi;
  }
}

std::span<const double> PairwiseMrf::node_table(Node v) const {
  return {t_.node_tables.data() + static_cast<std::size_t>(v) * sigma(), sigma()};
}

std::span<const double> PairwiseMrf::edge_table(int e) const {
  const auto w = sigma() * sigma();
  return {t_.edge_tables.data() + static_cast<std::size_t>(e) * w, w};
}

ShiftedMrf affine_shift(MrfTables raw) {
  check_sizes(raw);
  check_finite(raw.node_tables);
  check_finite(raw.edge_tables);
  double total = 0.0;
  auto shift_rows = [&](std::vector<double>& values, std::size_t width) {
    for (std::size_t b = 0; b < values.size(); b += width) {
      const double lo = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(b),
                                          values.begin() + static_cast<std::ptrdiff_t>(b + width));
      const double c = std::max(0.0, -lo);
      if (c == 0.0) continue;
      for (std::size_t i = b; i < b + width; ++i) values[i] = std::max(0.0, values[i] + c);
      total += c;
    }
  };
  const auto s = static_cast<std::size_t>(raw.alphabet_size);
  shift_rows(raw.node_tables, s);
  shift_rows(raw.edge_tables, s * s);
  return ShiftedMrf{PairwiseMrf(std::move(raw)), total};
}

double energy(const PairwiseMrf& mrf, std::span<const int> x) {
  double h = 0.0;
  for (Node v = 0; v < mrf.num_nodes(); ++v) h += mrf.phi(v, x[static_cast<std::size_t>(v)]);
  const auto& edges = mrf.graph().edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const Edge& ed = edges[static_cast<std::size_t>(e)];
    h += mrf.psi(e, x[static_cast<std::size_t>(ed.u)], x[static_cast<std::size_t>(ed.v)]);
  }
  return h;
}

void validate_assignment(const PairwiseMrf& mrf, std::span<const int> x) {
  if (x.size() != static_cast<std::size_t>(mrf.num_nodes()))
    throw InvalidInput("assignment: length " + std::to_string(x.size()) + " != node count " +
                       std::to_string(mrf.num_nodes()));
  for (int s : x)
    if (s < 0 || s >= mrf.alphabet_size()) throw InvalidInput("assignment: state out of range");
}

PairwiseMrf induced_mrf(const PairwiseMrf& mrf, std::span<const Node> nodes) {
  MrfTables t;
  t.alphabet_size = mrf.alphabet_size();
  t.graph = induced_subgraph(mrf.graph(), nodes);
  for (Node v : nodes) {
    const auto row = mrf.node_table(v);
    t.node_tables.insert(t.node_tables.end(), row.begin(), row.end());
  }
  // Local ids preserve order, so local edge order matches global edge order
  // restricted to induced edges and the (low, high) argument order is kept.
  for (const Edge& le : t.graph.edges()) {
    const int e = *mrf.graph().edge_index(nodes[static_cast<std::size_t>(le.u)],
                                          nodes[static_cast<std::size_t>(le.v)]);
    const auto row = mrf.edge_table(e);
    t.edge_tables.insert(t.edge_tables.end(), row.begin(), row.end());
  }
  return PairwiseMrf(std::move(t));
}

PairwiseMrf without_edges(const PairwiseMrf& mrf, std::span<const int> edges) {
  const Graph& g = mrf.graph();
  std::vector<bool> drop(static_cast<std::size_t>(g.num_edges()), false);
  for (int e : edges) {
    if (e < 0 || e >= g.num_edges()) throw InvalidInput("without_edges: bad edge id " + std::to_string(e));
    drop[static_cast<std::size_t>(e)] = true;
  }
  MrfTables t;
  t.alphabet_size = mrf.alphabet_size();
  t.node_tables = mrf.tables().node_tables;
  std::vector<Edge> kept;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (drop[static_cast<std::size_t>(e)]) continue;
    kept.push_back(g.edge(e));
    const auto row = mrf.edge_table(e);
    t.edge_tables.insert(t.edge_tables.end(), row.begin(), row.end());
  }
  t.graph = Graph(g.num_nodes(), std::move(kept));
  return PairwiseMrf(std::move(t));
}

}  // namespace locinf
