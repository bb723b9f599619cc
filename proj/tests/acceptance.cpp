// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "locinf/bench.hpp"
#include "locinf/decomp.hpp"
#include "locinf/exact.hpp"
#include "locinf/grid.hpp"
#include "locinf/inference.hpp"
#include "locinf/reduce.hpp"
#include "locinf/saw.hpp"
#include "oracles.hpp"

using namespace locinf;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " violation(s), first: " + first_};
  }

 private:
  int failures_ = 0;
  std::string first_;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

bool rel_le(double a, double b, double tol) { return a <= b + tol * std::max({1.0, std::abs(a), std::abs(b)}); }

double edge_range(const PairwiseMrf& m, int e) {
  const auto t = m.edge_table(e);
  const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  return *hi - *lo;
}

struct Sample {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

Sample sample_stats(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

// ---------------------------------------------------------------------------
// 1-3: brackets, gap identity, MAP sandwich on shared instances.

struct BracketInstance {
  PairwiseMrf mrf;
  EdgeDecomposition decomp;
};

std::vector<BracketInstance> bracket_instances() {
  Rng rng(1001);
  std::vector<BracketInstance> out;
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t seed = derive_seed(1001, {static_cast<std::uint64_t>(i)});
    switch (i % 3) {
      case 0: {
        const int n = 2 + static_cast<int>(rng.uniform_below(11));
        const Graph g = oracle::random_connected_graph(rng, n, static_cast<int>(rng.uniform_below(2 * n)));
        const double eps = rng.uniform(0.05, 0.5);
        const int K = 2 + static_cast<int>(rng.uniform_below(4));
        out.push_back({oracle::random_mrf(rng, g, 2, rng.uniform(0.5, 3.0)), db_dim_edge(g, eps, K, seed)});
        break;
      }
      case 1: {
        const int n = 2 + static_cast<int>(rng.uniform_below(11));
        const Graph g = oracle::random_graph(rng, n, rng.uniform(0.2, 0.6));
        const int r = 1 + static_cast<int>(rng.uniform_below(3));
        const int lambda = 2 + static_cast<int>(rng.uniform_below(4));
        out.push_back({oracle::random_mrf(rng, g, 2, rng.uniform(0.5, 3.0)), minor_e(g, r, lambda, seed)});
        break;
      }
      default: {
        const int n = 2 + static_cast<int>(rng.uniform_below(2));  // 2x2 or 3x3 layouts
        const bool cc = rng.uniform_below(2) == 1;
        const int k = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
        const int l1 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(k)));
        const int l2 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(k)));
        const Graph g = make_lattice({n, n, cc});
        EdgeDecomposition d = grid_decomp(n, k, l1, l2);
        if (cc) d = lift_decomposition(make_lattice({n, n, false}), d, g);
        out.push_back({oracle::random_mrf(rng, g, 2, rng.uniform(0.5, 3.0)), d});
      }
    }
  }
  return out;
}

Outcome criterion_1(const std::vector<BracketInstance>& insts) {
  Check c;
  double worst_slack = 1e300;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const auto& [m, d] = insts[i];
    const InferenceBounds b = log_partition_bounds(m, d);
    const double truth = oracle::brute(m).log_z;
    c.expect(rel_le(b.log_z_lb, truth, 1e-9) && rel_le(truth, b.log_z_ub, 1e-9),
             "instance " + std::to_string(i) + ": " + fmt(b.log_z_lb, 17) + " <= " + fmt(truth, 17) +
                 " <= " + fmt(b.log_z_ub, 17));
    worst_slack = std::min({worst_slack, truth - b.log_z_lb, b.log_z_ub - truth});
  }
  return c.done(std::to_string(insts.size()) + " instances, smallest slack " + fmt(worst_slack));
}

Outcome criterion_2(const std::vector<BracketInstance>& insts) {
  Check c;
  double worst = 0.0;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const auto& [m, d] = insts[i];
    const InferenceBounds b = log_partition_bounds(m, d);
    double sum = 0.0;
    for (int e : d.removed_edges) sum += edge_range(m, e);
    const double err = std::abs((b.log_z_ub - b.log_z_lb) - sum) / std::max(1.0, std::abs(b.log_z_ub));
    worst = std::max(worst, err);
    c.expect(err <= 1e-12, "instance " + std::to_string(i) + ": relative mismatch " + fmt(err));
  }
  return c.done("largest relative mismatch " + fmt(worst));
}

Outcome criterion_3(const std::vector<BracketInstance>& insts) {
  Check c;
  int tight = 0;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const auto& [m, d] = insts[i];
    const MapEstimate e = mode_estimate(m, d);
    const oracle::Brute b = oracle::brute(m);
    double gap = 0.0;
    for (int edge : d.removed_edges) gap += edge_range(m, edge);
    const double h = oracle::energy(m, e.assignment);
    c.expect(rel_le(b.map_energy - gap, h, 1e-12) && rel_le(h, b.map_energy, 1e-12),
             "instance " + std::to_string(i) + ": " + fmt(b.map_energy - gap, 17) + " <= " + fmt(h, 17) +
                 " <= " + fmt(b.map_energy, 17));
    tight += std::abs(h - b.map_energy) <= 1e-12 * std::max(1.0, b.map_energy);
  }
  return c.done(std::to_string(tight) + "/" + std::to_string(insts.size()) + " estimates optimal");
}

// ---------------------------------------------------------------------------
// 4-6: decomposition certificates.

Outcome criterion_4() {
  Check c;
  const double eps = 0.25;
  const double rho = 2.0;  // doubling dimension used for the planar grid
  const int K = k_param(eps, rho);
  const Graph g = make_lattice({6, 6, false});
  const int seeds = 10000;
  const double hard = std::pow(static_cast<double>(K), 2 * rho);
  std::vector<int> hits(36, 0);
  int largest = 0;
  for (int s = 0; s < seeds; ++s) {
    const VertexDecomposition d = db_dim_vertex(g, eps, K, static_cast<std::uint64_t>(s));
    for (Node v : d.removed_nodes) ++hits[static_cast<std::size_t>(v)];
    const int mc = max_component_size(d.components);
    largest = std::max(largest, mc);
    c.expect(mc <= hard, "seed " + std::to_string(s) + ": component of " + std::to_string(mc));
  }
  const double p = 2 * eps;
  const double limit = p + 3 * std::sqrt(p * (1 - p) / seeds);
  double worst = 0.0;
  for (Node v = 0; v < 36; ++v) {
    const double f = hits[static_cast<std::size_t>(v)] / static_cast<double>(seeds);
    worst = std::max(worst, f);
    c.expect(f <= limit, "node " + std::to_string(v) + " removed with frequency " + fmt(f));
  }
  return c.done("K=" + std::to_string(K) + ", max component " + std::to_string(largest) +
                ", highest removal frequency " + fmt(worst) + " <= " + fmt(limit));
}

Outcome criterion_5() {
  Check c;
  const Graph g = make_lattice({7, 7, false});
  const int r = 3;
  const int seeds = 10000;
  std::string summary;
  for (int lambda : {3, 4, 5}) {
    std::vector<int> hits(static_cast<std::size_t>(g.num_edges()), 0);
    long long comp_total = 0;
    int comp_max = 0;
    for (int s = 0; s < seeds; ++s) {
      const EdgeDecomposition d = minor_e(g, r, lambda, static_cast<std::uint64_t>(s));
      for (int e : d.removed_edges) ++hits[static_cast<std::size_t>(e)];
      const int mc = max_component_size(d.components);
      c.expect(mc >= 1 && mc <= g.num_nodes(), "bad component size");
      comp_total += mc;
      comp_max = std::max(comp_max, mc);
    }
    const double p = std::min(1.0, static_cast<double>(r) / lambda);
    const double limit = p + 3 * std::sqrt(p * (1 - p) / seeds);
    double worst = 0.0;
    for (int e = 0; e < g.num_edges(); ++e) {
      const double f = hits[static_cast<std::size_t>(e)] / static_cast<double>(seeds);
      worst = std::max(worst, f);
      c.expect(f <= limit, "lambda " + std::to_string(lambda) + " edge " + std::to_string(e) + " frequency " + fmt(f));
    }
    summary += "L=" + std::to_string(lambda) + ": max freq " + fmt(worst, 3) + " (limit " + fmt(limit, 3) +
               "), mean/max component " + fmt(static_cast<double>(comp_total) / seeds, 3) + "/" +
               std::to_string(comp_max) + "; ";
  }
  summary.resize(summary.size() - 2);
  return c.done(summary);
}

Outcome criterion_6() {
  Check c;
  int cases = 0;
  for (int n = 1; n <= 10; ++n) {
    const Graph g = make_lattice({n, n, false});
    for (int k = 1; k <= std::min(4, n); ++k) {
      std::vector<int> count(static_cast<std::size_t>(g.num_edges()), 0);
      for (int l1 = 0; l1 < k; ++l1)
        for (int l2 = 0; l2 < k; ++l2) {
          const EdgeDecomposition d = grid_decomp(n, k, l1, l2);
          for (int e : d.removed_edges) ++count[static_cast<std::size_t>(e)];
          // Components must be the true components of G minus B.
          std::vector<bool> skip(static_cast<std::size_t>(g.num_edges()), false);
          for (int e : d.removed_edges) skip[static_cast<std::size_t>(e)] = true;
          c.expect(d.components == oracle::components(n * n, g.edges(), skip), "components disagree");
          c.expect(max_component_size(d.components) <= k * k,
                   "n=" + std::to_string(n) + " k=" + std::to_string(k) + ": component above k^2");
          ++cases;
        }
      // Fraction count / k^2 <= 1/k, in integers.
      for (int x : count)
        c.expect(x * k <= k * k, "n=" + std::to_string(n) + " k=" + std::to_string(k) + ": edge removed " +
                                     std::to_string(x) + "/" + std::to_string(k * k));
    }
  }
  return c.done(std::to_string(cases) + " (n, k, l1, l2) cases");
}

// ---------------------------------------------------------------------------
// 7-9: SAW trees and the message schedule.

struct SawInstance {
  PairwiseMrf mrf;
  Evidence evidence;
  int extra_edges = 0;
};

std::vector<SawInstance> saw_instances() {
  Rng rng(2002);
  std::vector<SawInstance> out;
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform_below(8));
    const Graph g = oracle::random_connected_graph(rng, n, static_cast<int>(rng.uniform_below(5)));
    SawInstance s{oracle::random_mrf(rng, g, 2, rng.uniform(0.5, 3.0)), {}, g.num_edges() - (n - 1)};
    if (i % 3 == 0) {
      // Forced potentials: clamp one or two nodes.
      s.evidence.assign(static_cast<std::size_t>(n), -1);
      const int clamps = 1 + static_cast<int>(rng.uniform_below(2));
      for (int j = 0; j < clamps; ++j)
        s.evidence[rng.uniform_below(static_cast<std::uint64_t>(n))] = static_cast<int>(rng.uniform_below(2));
    }
    out.push_back(std::move(s));
  }
  return out;
}

// Log-ratio agreement; the infinite cases must match exactly.
bool ratio_agrees(double num, double den, double b1, double b0, double tol) {
  const bool inf_a = std::isinf(num) || std::isinf(den);
  const bool inf_b = std::isinf(b1) || std::isinf(b0);
  if (inf_a || inf_b) return std::isinf(num) == std::isinf(b1) && std::isinf(den) == std::isinf(b0);
  return std::abs((num - den) - (b1 - b0)) <= tol;
}

Outcome criterion_7(const std::vector<SawInstance>& insts) {
  Check c;
  int roots = 0;
  int extreme = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const auto& s = insts[i];
    for (Node v = 0; v < s.mrf.num_nodes(); ++v) {
      const RatioPair q = saw_ratio(s.mrf, v, s.evidence);
      const oracle::Brute b = oracle::brute(s.mrf, v, s.evidence);
      c.expect(ratio_agrees(q.log_num, q.log_den, b.max1, b.max0, 1e-9),
               "instance " + std::to_string(i) + " root " + std::to_string(v));
      if (std::isinf(b.max1) || std::isinf(b.max0)) ++extreme;
      else worst = std::max(worst, std::abs((q.log_num - q.log_den) - (b.max1 - b.max0)));
      ++roots;
    }
  }
  return c.done(std::to_string(roots) + " roots (" + std::to_string(extreme) + " with ratio 0 or infinity), largest log-ratio error " + fmt(worst));
}

Outcome criterion_8() {
  Check c;
  Rng rng(3003);
  int graphs = 0;
  std::uint64_t closest_num = 0;
  std::uint64_t closest_den = 1;
  while (graphs < 200) {
    const int n = 2 + static_cast<int>(rng.uniform_below(9));
    const int max_k = std::min(4, n * (n - 1) / 2 - (n - 1));
    const int k = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_k + 1)));
    const Graph g = oracle::random_connected_graph(rng, n, k);
    const PairwiseMrf m({g, 2, std::vector<double>(static_cast<std::size_t>(2 * n), 0.0),
                         std::vector<double>(static_cast<std::size_t>(4 * g.num_edges()), 0.0)});
    const std::uint64_t bound = saw_size_upper(n, k);
    for (Node v = 0; v < n; ++v) {
      const std::uint64_t size = build_saw_tree(m, v).num_edges();
      c.expect(size <= bound, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " root " +
                                  std::to_string(v) + ": " + std::to_string(size) + " > " + std::to_string(bound));
      if (size * closest_den > closest_num * bound) {
        closest_num = size;
        closest_den = bound;
      }
    }
    ++graphs;
  }
  int family = 0;
  for (int n = 3; n <= 12; ++n)
    for (int k = 1; 2 * k < n; ++k) {
      const Graph g = saw_lower_bound_family(n, k);
      c.expect(g.num_edges() == n - 1 + k, "lower-bound family edge count");
      const PairwiseMrf m({g, 2, std::vector<double>(static_cast<std::size_t>(2 * n), 0.0),
                           std::vector<double>(static_cast<std::size_t>(4 * g.num_edges()), 0.0)});
      for (Node v = 0; v < n; ++v) {
        const double size = static_cast<double>(build_saw_tree(m, v).num_edges());
        c.expect(size >= n * std::pow(2.0, k - 2),
                 "family n=" + std::to_string(n) + " k=" + std::to_string(k) + " root " + std::to_string(v));
      }
      ++family;
    }
  return c.done("200 graphs, largest size/bound " + std::to_string(closest_num) + "/" + std::to_string(closest_den) +
                "; " + std::to_string(family) + " lower-bound family members");
}

Outcome criterion_9(const std::vector<SawInstance>& insts) {
  Check c;
  std::uint64_t sequences = 0;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const auto& s = insts[i];
    MsgPassOptions o;
    o.evidence = s.evidence;
    const MsgPassResult r = msg_pass_mode(s.mrf, o);
    const int n = s.mrf.num_nodes();
    for (Node v = 0; v < n; ++v) {
      const RatioPair t = saw_max_ratio(s.mrf, build_saw_tree(s.mrf, v, s.evidence), s.evidence);
      const RatioPair& p = r.ratios[static_cast<std::size_t>(v)];
      c.expect(t.log_num == p.log_num && t.log_den == p.log_den,
               "instance " + std::to_string(i) + " node " + std::to_string(v) + " differs");
      const std::uint64_t cs = r.computation_sequences[static_cast<std::size_t>(v)];
      c.expect(cs <= saw_size_upper(n, s.extra_edges),
               "instance " + std::to_string(i) + " node " + std::to_string(v) + ": " + std::to_string(cs) +
                   " computation sequences");
      sequences += cs;
    }
  }
  return c.done(std::to_string(insts.size()) + " instances, " + std::to_string(sequences) +
                " computation sequences, all ratios bit-identical");
}

// ---------------------------------------------------------------------------
// 10: factor model to MWIS.

locinf::FactorModel random_factor_model(Rng& rng) {
  while (true) {
    locinf::FactorModel m;
    const int nv = 1 + static_cast<int>(rng.uniform_below(3));
    for (int i = 0; i < nv; ++i) m.domains.push_back(2 + static_cast<int>(rng.uniform_below(2)));
    const int nf = 1 + static_cast<int>(rng.uniform_below(4));
    for (int a = 0; a < nf; ++a) {
      locinf::Factor f;
      std::uint64_t mask = 0;
      while (mask == 0) mask = rng.uniform_below(std::uint64_t{1} << nv);
      std::size_t size = 1;
      for (int v = 0; v < nv; ++v)
        if (mask >> v & 1U) {
          f.vars.push_back(v);
          size *= static_cast<std::size_t>(m.domains[static_cast<std::size_t>(v)]);
        }
      // Small integers make ties, and so several optima, common.
      for (std::size_t j = 0; j < size; ++j)
        f.table.push_back(rng.uniform_below(2) ? static_cast<double>(rng.uniform_int(-3, 3)) : rng.uniform(-3, 3));
      m.factors.push_back(f);
    }
    std::vector<bool> covered(static_cast<std::size_t>(nv), false);
    for (const auto& f : m.factors)
      for (int v : f.vars) covered[static_cast<std::size_t>(v)] = true;
    if (std::all_of(covered.begin(), covered.end(), [](bool b) { return b; })) return m;
  }
}

// Exact MWIS when the nodes split into given cliques: at most one per clique.
oracle::MwisResult clique_mwis(const Graph& g, const std::vector<double>& w, const std::vector<std::vector<Node>>& cliques) {
  oracle::MwisResult best;
  best.weight = oracle::kNegInf;
  std::vector<Node> pick;
  std::function<void(std::size_t, double)> go = [&](std::size_t a, double total) {
    if (a == cliques.size()) {
      if (total > best.weight + 1e-9) {
        best.weight = total;
        best.optima.clear();
      }
      if (std::abs(total - best.weight) <= 1e-9) {
        std::vector<Node> s = pick;
        std::sort(s.begin(), s.end());
        best.optima.push_back(s);
      }
      return;
    }
    go(a + 1, total);
    for (Node u : cliques[a]) {
      bool free = true;
      for (Node x : pick) free = free && !g.has_edge(u, x);
      if (!free) continue;
      pick.push_back(u);
      go(a + 1, total + w[static_cast<std::size_t>(u)]);
      pick.pop_back();
    }
  };
  go(0, 0.0);
  return best;
}

Outcome criterion_10() {
  Check c;
  Rng rng(4004);
  int optima = 0;
  for (int i = 0; i < 200; ++i) {
    const locinf::FactorModel m = random_factor_model(rng);
    const locinf::MwisInstance inst = factor_to_mwis(m);
    std::vector<std::vector<Node>> groups(m.factors.size());
    for (Node u = 0; u < inst.graph.num_nodes(); ++u)
      groups[static_cast<std::size_t>(inst.labels[static_cast<std::size_t>(u)].factor)].push_back(u);
    for (const auto& grp : groups)
      for (std::size_t x = 0; x < grp.size(); ++x)
        for (std::size_t y = x + 1; y < grp.size(); ++y)
          c.expect(inst.graph.has_edge(grp[x], grp[y]), "factor nodes not mutually exclusive");
    const oracle::MwisResult mw = clique_mwis(inst.graph, inst.weights, groups);
    const oracle::FactorMap fm = oracle::brute_factor_map(m);
    const std::string tag = "model " + std::to_string(i);

    // Every MWIS decodes to a MAP assignment.
    std::vector<std::vector<int>> decoded;
    for (const auto& set : mw.optima) {
      const std::vector<int> y = mwis_to_assignment(inst, set);
      c.expect(std::find(fm.optima.begin(), fm.optima.end(), y) != fm.optima.end(), tag + ": MWIS is not a MAP");
      decoded.push_back(y);
    }
    // Every MAP assignment encodes to an MWIS.
    for (const auto& y : fm.optima) {
      std::vector<Node> set;
      for (Node u = 0; u < inst.graph.num_nodes(); ++u) {
        const auto& l = inst.labels[static_cast<std::size_t>(u)];
        const auto& scope = inst.scopes[static_cast<std::size_t>(l.factor)];
        bool match = true;
        for (std::size_t j = 0; j < scope.size(); ++j) match = match && y[static_cast<std::size_t>(scope[j])] == l.values[j];
        if (match) set.push_back(u);
      }
      c.expect(std::find(mw.optima.begin(), mw.optima.end(), set) != mw.optima.end(), tag + ": MAP is not an MWIS");
    }
    c.expect(decoded.size() == fm.optima.size(), tag + ": optimum counts differ");
    c.expect(std::abs(mw.weight - (fm.value + inst.c * static_cast<double>(m.factors.size()))) <= 1e-9,
             tag + ": weight offset");
    optima += static_cast<int>(fm.optima.size());
  }
  return c.done("200 models, " + std::to_string(optima) + " optima matched in both directions");
}

// ---------------------------------------------------------------------------
// 11-14: oracles, expectation bounds, harness, free energy.

Outcome criterion_11() {
  Check c;
  Rng rng(5005);
  double worst = 0.0;
  int cases = 0;
  for (int r = 2; r <= 4; ++r)
    for (int cols = 2; cols <= 4; ++cols)
      for (bool cc : {false, true})
        for (int t = 0; t < 5; ++t) {
          const GridShape s{r, cols, cc};
          const PairwiseMrf m = oracle::random_mrf(rng, make_lattice(s), 2, rng.uniform(0.5, 4.0));
          const oracle::Brute b = oracle::brute(m);
          const double z = grid_transfer_log_z(m, s);
          const double h = grid_transfer_map(m, s).energy;
          const double ez = std::abs(z - b.log_z) / std::max(1.0, std::abs(b.log_z));
          const double eh = std::abs(h - b.map_energy) / std::max(1.0, std::abs(b.map_energy));
          worst = std::max({worst, ez, eh});
          c.expect(ez <= 1e-10 && eh <= 1e-10, std::to_string(r) + "x" + std::to_string(cols) + (cc ? " cris-cross" : " grid"));
          ++cases;
        }
  return c.done(std::to_string(cases) + " layouts, largest relative error " + fmt(worst));
}

Outcome criterion_12() {
  Check c;
  const GridShape shape{6, 6, false};
  Rng rng(6006);
  const PairwiseMrf m = oracle::random_mrf(rng, make_lattice(shape));
  const double log_z = grid_transfer_log_z(m, shape);
  const double h_star = grid_transfer_map(m, shape).energy;
  const double d1 = m.graph().max_degree() + 1;
  const int seeds = 1000;
  std::string summary;

  struct Scheme {
    std::string name;
    double eps;
    std::function<EdgeDecomposition(std::uint64_t)> run;
  };
  const int K = k_param(0.05, 2.0);
  const std::vector<Scheme> schemes{
      {"minore r=1 L=6", 1.0 / 6, [&](std::uint64_t s) { return minor_e(m.graph(), 1, 6, s); }},
      {"minore r=2 L=12", 2.0 / 12, [&](std::uint64_t s) { return minor_e(m.graph(), 2, 12, s); }},
      // Line-graph ball carving removes an edge with probability at most 2 eps.
      {"dbdim eps=0.05", 0.1, [&](std::uint64_t s) { return db_dim_edge(m.graph(), 0.05, K, s); }},
  };
  for (const Scheme& sc : schemes) {
    std::vector<double> gaps;
    std::vector<double> map_loss;
    for (int s = 0; s < seeds; ++s) {
      const EdgeDecomposition d = sc.run(static_cast<std::uint64_t>(s));
      gaps.push_back(log_partition_bounds(m, d).gap);
      map_loss.push_back(h_star - mode_estimate(m, d).energy);
    }
    const Sample g = sample_stats(gaps);
    const Sample l = sample_stats(map_loss);
    const double bz = sc.eps * d1 * log_z;
    const double bh = sc.eps * d1 * h_star;
    c.expect(g.mean <= bz + 3 * g.se, sc.name + ": mean gap " + fmt(g.mean) + " > " + fmt(bz));
    c.expect(l.mean <= bh + 3 * l.se, sc.name + ": mean MAP loss " + fmt(l.mean) + " > " + fmt(bh));
    summary += sc.name + ": gap " + fmt(g.mean, 3) + " <= " + fmt(bz, 3) + ", MAP loss " + fmt(l.mean, 3) +
               " <= " + fmt(bh, 3) + "; ";
  }
  summary.resize(summary.size() - 2);
  return c.done(summary);
}

Outcome criterion_13() {
  Check c;
  ExperimentSpec spec;
  spec.topology = Topology::kGrid;
  spec.n = 7;
  spec.mode = PotentialMode::kVaryingInteraction;
  spec.alphas = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
  spec.algorithm = DecompAlgorithm::kMinor;
  spec.rounds = 3;
  spec.params = {3, 4, 5};
  spec.trials = 40;
  spec.seed = 7;
  spec.exact = true;
  const std::vector<TrialRecord> recs = run_experiment(spec);
  c.expect(recs.size() == 10 * 3 * 40, "record count");
  for (const TrialRecord& r : recs) {
    c.expect(r.ok, "alpha " + fmt(r.alpha) + " L=" + fmt(r.param) + " trial " + std::to_string(r.trial) + ": " + r.note);
    c.expect(r.exact.has_value() && r.h_star.has_value(), "oracle missing");
  }
  // Mean error per (alpha, lambda).
  std::map<std::pair<double, double>, std::vector<double>> err_z, err_map;
  for (const TrialRecord& r : recs) {
    err_z[{r.alpha, r.param}].push_back(r.error_logz.value_or(0.0));
    err_map[{r.alpha, r.param}].push_back(r.error_map.value_or(0.0));
  }
  std::string summary = "mean error_logz at L=3/4/5:";
  for (double a : spec.alphas) {
    double prev_z = 1e300;
    double prev_m = 1e300;
    for (double lambda : spec.params) {
      const double ez = sample_stats(err_z[{a, lambda}]).mean;
      const double em = sample_stats(err_map[{a, lambda}]).mean;
      c.expect(ez <= prev_z, "alpha " + fmt(a) + ": log Z error rises at L=" + fmt(lambda));
      c.expect(em <= prev_m, "alpha " + fmt(a) + ": MAP error rises at L=" + fmt(lambda));
      prev_z = ez;
      prev_m = em;
    }
    if (a == 0.2 || a == 1.0 || a == 2.0) {
      summary += " a=" + fmt(a, 2) + " ";
      for (double lambda : spec.params) summary += fmt(sample_stats(err_z[{a, lambda}]).mean, 3) + (lambda < 5 ? "/" : "");
    }
  }
  return c.done(std::to_string(recs.size()) + " trials; " + summary);
}

Outcome criterion_14() {
  Check c;
  const std::vector<double> phi{0.0, 0.2};
  const std::vector<double> psi{0.4, 0.0, 0.0, 0.4};
  std::vector<int> ns;
  for (int n = 3; n <= 10; ++n) ns.push_back(n);
  const std::vector<FreeEnergyRow> rows = free_energy_sequence(phi, psi, ns);
  const double alpha = std::log(2.0) + 0.2 + 4 * 0.4;
  for (const FreeEnergyRow& r : rows) {
    const double nn = static_cast<double>(r.n) * r.n;
    c.expect(nn * std::log(2.0) <= r.log_z, "n=" + std::to_string(r.n) + ": below n^2 ln 2");
    c.expect(r.log_z <= nn * alpha, "n=" + std::to_string(r.n) + ": above n^2 alpha");
  }
  std::string diffs;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double d = std::abs(rows[i].a_n - rows[i - 1].a_n);
    diffs += (i > 1 ? " " : "") + fmt(d, 3);
    if (i >= 2)
      c.expect(d < std::abs(rows[i - 1].a_n - rows[i - 2].a_n), "difference grows at n=" + std::to_string(rows[i].n));
  }
  return c.done("a_3=" + fmt(rows.front().a_n, 6) + " a_10=" + fmt(rows.back().a_n, 6) + ", |a_{n+1}-a_n|: " + diffs);
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  struct Entry {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
  };

  std::vector<BracketInstance> brackets;
  std::vector<SawInstance> saws;
  const std::vector<Entry> entries{
      {1, "bracket soundness", 120, [&] {
         brackets = bracket_instances();
         return criterion_1(brackets);
       }},
      {2, "gap identity", 120, [&] { return criterion_2(brackets); }},
      {3, "MAP sandwich", 120, [&] { return criterion_3(brackets); }},
      {4, "ball-carving certificate", 300, criterion_4},
      {5, "BFS-layer edge certificate", 300, criterion_5},
      {6, "grid slab decomposition", 10, criterion_6},
      {7, "SAW max-marginal equivalence", 180, [&] {
         saws = saw_instances();
         return criterion_7(saws);
       }},
      {8, "SAW size bounds", 60, criterion_8},
      {9, "message schedule fidelity", 180, [&] { return criterion_9(saws); }},
      {10, "MWIS transform", 60, criterion_10},
      {11, "transfer-matrix oracle", 60, criterion_11},
      {12, "expectation bounds", 180, criterion_12},
      {13, "experiment harness", 600, criterion_13},
      {14, "free-energy sequence", 60, criterion_14},
  };

  int failed = 0;
  for (const Entry& e : entries) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (o.pass && secs > e.budget_s) o = {false, "took " + fmt(secs) + " s, budget " + fmt(e.budget_s) + " s"};
    failed += !o.pass;
    std::printf("[%s] criterion %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", e.id, e.name.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failed, entries.size());
  return failed == 0 ? 0 : 1;
}
