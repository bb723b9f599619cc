#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "locinf/error.hpp"
#include "locinf/exact.hpp"

namespace locinf {

namespace {

// Log-domain table over a sorted scope, row-major with the last (highest id)
// variable varying fastest.
struct Factor {
  std::vector<int> scope;
  std::vector<double> table;
};

enum class Reduce { kSum, kMax };

struct Bucket {
  std::vector<int> scope;     // includes the eliminated variable, last
  std::vector<double> table;  // product of the bucket's factors
};

std::vector<Factor> initial_factors(const PairwiseMrf& mrf) {
  std::vector<Factor> fs;
  for (Node v = 0; v < mrf.num_nodes(); ++v) {
    const auto row = mrf.node_table(v);
    fs.push_back({{v}, {row.begin(), row.end()}});
  }
  for (int e = 0; e < mrf.graph().num_edges(); ++e) {
    const Edge& ed = mrf.graph().edge(e);
    const auto row = mrf.edge_table(e);
    fs.push_back({{ed.u, ed.v}, {row.begin(), row.end()}});
  }
  return fs;
}

// Eliminates variables n-1, ..., 0. Returns the constant left over; fills
// `buckets[v]` when requested (for decoding).
double eliminate(const PairwiseMrf& mrf, Reduce mode, std::uint64_t cap,
                 std::vector<Bucket>* buckets) {
  const int n = mrf.num_nodes();
  const auto s = static_cast<std::size_t>(mrf.alphabet_size());
  std::vector<Factor> pool = initial_factors(mrf);
  if (buckets) buckets->assign(static_cast<std::size_t>(n), {});

  for (int v = n - 1; v >= 0; --v) {
    std::vector<Factor> mine;
    std::vector<Factor> rest;
    for (Factor& f : pool) {
      if (std::binary_search(f.scope.begin(), f.scope.end(), v))
        mine.push_back(std::move(f));
      else
        rest.push_back(std::move(f));
    }
    pool = std::move(rest);

    std::vector<int> scope;
    for (const Factor& f : mine) scope.insert(scope.end(), f.scope.begin(), f.scope.end());
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    // v is the largest remaining id, so it is last in the scope.

    long double size_ld = 1.0L;
    for (std::size_t i = 0; i < scope.size(); ++i) size_ld *= static_cast<long double>(s);
    if (size_ld > static_cast<long double>(cap))
      throw CapExceeded("elimination table of " + std::to_string(scope.size()) +
                        " variables exceeds cap " + std::to_string(cap));
    const auto size = static_cast<std::size_t>(size_ld);

    // Strides of each factor's variables inside the bucket scope.
    std::vector<std::vector<std::size_t>> fstride(mine.size());
    for (std::size_t k = 0; k < mine.size(); ++k) {
      fstride[k].assign(scope.size(), 0);
      std::size_t stride = 1;
      for (std::size_t j = mine[k].scope.size(); j-- > 0;) {
        const auto pos = static_cast<std::size_t>(
            std::lower_bound(scope.begin(), scope.end(), mine[k].scope[j]) - scope.begin());
        fstride[k][pos] = stride;
        stride *= s;
      }
    }

    std::vector<double> product(size, 0.0);
    std::vector<std::size_t> digit(scope.size(), 0);
    std::vector<std::size_t> fidx(mine.size(), 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
      double acc = 0.0;
      for (std::size_t k = 0; k < mine.size(); ++k) acc += mine[k].table[fidx[k]];
      product[idx] = acc;
      // Odometer increment, last digit fastest.
      for (std::size_t j = scope.size(); j-- > 0;) {
        for (std::size_t k = 0; k < mine.size(); ++k) fidx[k] += fstride[k][j];
        if (++digit[j] < s) break;
        for (std::size_t k = 0; k < mine.size(); ++k) fidx[k] -= fstride[k][j] * s;
        digit[j] = 0;
      }
    }

    Factor out;
    out.scope.assign(scope.begin(), scope.end() - 1);
    out.table.resize(size / s);
    for (std::size_t i = 0; i < out.table.size(); ++i) {
      const double* row = product.data() + i * s;
      if (mode == Reduce::kMax) {
        out.table[i] = *std::max_element(row, row + s);
      } else {
        const double m = *std::max_element(row, row + s);
        double acc = 0.0;
        for (std::size_t t = 0; t < s; ++t) acc += std::exp(row[t] - m);
        out.table[i] = m + std::log(acc);
      }
    }
    if (buckets) (*buckets)[static_cast<std::size_t>(v)] = {std::move(scope), std::move(product)};
    pool.push_back(std::move(out));
  }

  double total = 0.0;
  for (const Factor& f : pool) total += f.table.front();
  return total;
}

}  // namespace

ExactResult solve_exact(const PairwiseMrf& mrf, std::uint64_t table_cap) {
  ExactResult r;
  r.log_z = eliminate(mrf, Reduce::kSum, table_cap, nullptr);

  std::vector<Bucket> buckets;
  eliminate(mrf, Reduce::kMax, table_cap, &buckets);
  const auto s = static_cast<std::size_t>(mrf.alphabet_size());
  r.map_assignment.assign(static_cast<std::size_t>(mrf.num_nodes()), 0);
  for (int v = 0; v < mrf.num_nodes(); ++v) {
    const Bucket& b = buckets[static_cast<std::size_t>(v)];
    std::size_t base = 0;
    for (std::size_t j = 0; j + 1 < b.scope.size(); ++j)
      base = base * s + static_cast<std::size_t>(r.map_assignment[static_cast<std::size_t>(b.scope[j])]);
    base *= s;
    // Smallest state attaining the maximum.
    std::size_t best = 0;
    for (std::size_t t = 1; t < s; ++t)
      if (b.table[base + t] > b.table[base + best]) best = t;
    r.map_assignment[static_cast<std::size_t>(v)] = static_cast<int>(best);
  }
  r.map_energy = energy(mrf, r.map_assignment);
  return r;
}

ExactResult component_solve(const PairwiseMrf& mrf, std::span<const Node> nodes,
                            std::uint64_t table_cap) {
  if (!std::is_sorted(nodes.begin(), nodes.end()))
    throw InvalidInput("component_solve: node list must be sorted");
  return solve_exact(induced_mrf(mrf, nodes), table_cap);
}

}  // namespace locinf
