#include <cmath>
#include <limits>
#include <string>

#include "locinf/error.hpp"
#include "locinf/exact.hpp"

namespace locinf {

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

namespace {

void check_enumeration_cap(const PairwiseMrf& mrf, std::uint64_t cap) {
  long double states = 1.0L;
  for (int i = 0; i < mrf.num_nodes(); ++i) states *= mrf.alphabet_size();
  if (states > static_cast<long double>(cap))
    throw CapExceeded("enumeration of " + std::to_string(mrf.alphabet_size()) + "^" +
                      std::to_string(mrf.num_nodes()) + " assignments exceeds cap " +
                      std::to_string(cap));
}

// Depth-first enumeration in lexicographic order (node 0 most significant).
// prefix[i] is the energy of the terms among nodes < i; leaf(x, h) sees
// every full assignment.
template <typename Leaf>
void enumerate(const PairwiseMrf& mrf, const Evidence& evidence, Leaf&& leaf) {
  const int n = mrf.num_nodes();
  const int s = mrf.alphabet_size();
  const Graph& g = mrf.graph();
  Assignment x(static_cast<std::size_t>(n), 0);
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  if (n == 0) {
    leaf(x, 0.0);
    return;
  }
  auto allowed = [&](int i, int state) {
    return evidence.empty() || evidence[static_cast<std::size_t>(i)] < 0 ||
           evidence[static_cast<std::size_t>(i)] == state;
  };
  // Iterative DFS: x[i] == -1 means "not yet set" on the way down.
  int i = 0;
  x[0] = -1;
  while (i >= 0) {
    int& xi = x[static_cast<std::size_t>(i)];
    do {
      ++xi;
    } while (xi < s && !allowed(i, xi));
    if (xi >= s) {
      --i;
      continue;
    }
    double h = prefix[static_cast<std::size_t>(i)] + mrf.phi(i, xi);
    const auto nb = g.neighbors(i);
    const auto ie = g.incident_edges(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] >= i) break;
      h += mrf.psi(ie[k], x[static_cast<std::size_t>(nb[k])], xi);
    }
    prefix[static_cast<std::size_t>(i) + 1] = h;
    if (i + 1 == n) {
      leaf(x, h);
    } else {
      ++i;
      x[static_cast<std::size_t>(i)] = -1;
    }
  }
}

}  // namespace

double brute_log_z(const PairwiseMrf& mrf, std::uint64_t cap) {
  check_enumeration_cap(mrf, cap);
  // Streaming log-sum-exp with a running maximum.
  double m = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  enumerate(mrf, {}, [&](const Assignment&, double h) {
    if (h > m) {
      acc = acc * std::exp(m - h) + 1.0;
      m = h;
    } else {
      acc += std::exp(h - m);
    }
  });
  return m + std::log(acc);
}

MapResult brute_map(const PairwiseMrf& mrf, std::uint64_t cap) {
  check_enumeration_cap(mrf, cap);
  MapResult best;
  double best_h = -std::numeric_limits<double>::infinity();
  enumerate(mrf, {}, [&](const Assignment& x, double h) {
    if (h > best_h) {
      best_h = h;
      best.assignment = x;
    }
  });
  best.energy = energy(mrf, best.assignment);
  return best;
}

MaxMarginal brute_max_marginal(const PairwiseMrf& mrf, Node v, const Evidence& evidence,
                               std::uint64_t cap) {
  if (mrf.alphabet_size() != 2) throw InvalidInput("brute_max_marginal: binary alphabet required");
  if (v < 0 || v >= mrf.num_nodes()) throw InvalidInput("brute_max_marginal: node out of range");
  if (!evidence.empty() && evidence.size() != static_cast<std::size_t>(mrf.num_nodes()))
    throw InvalidInput("brute_max_marginal: evidence length mismatch");
  check_enumeration_cap(mrf, cap);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double best[2] = {kNegInf, kNegInf};
  enumerate(mrf, evidence, [&](const Assignment& x, double h) {
    double& b = best[x[static_cast<std::size_t>(v)]];
    if (h > b) b = h;
  });
  return {best[0], best[1]};
}

}  // namespace locinf
