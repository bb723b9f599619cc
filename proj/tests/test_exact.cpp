#include <doctest.h>

#include <cmath>

#include "locinf/error.hpp"
#include "locinf/exact.hpp"
#include "locinf/grid.hpp"
#include "oracles.hpp"

using namespace locinf;

namespace {

PairwiseMrf one_node(double a, double b) { return PairwiseMrf({Graph(1, {}), 2, {a, b}, {}}); }

PairwiseMrf one_edge(double p11) {
  return PairwiseMrf({Graph(2, {{0, 1}}), 2, {0, 0, 0, 0}, {0, 0, 0, p11}});
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("brute log Z") {
  CHECK(brute_log_z(one_node(0, 0)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(brute_log_z(one_node(0, 1)) == doctest::Approx(std::log(1 + std::exp(1.0))).epsilon(1e-15));
  CHECK(brute_log_z(one_edge(1)) == doctest::Approx(std::log(3 + std::exp(1.0))).epsilon(1e-15));
  Rng rng(1);
  const PairwiseMrf big = oracle::random_mrf(rng, make_lattice({5, 5, false}));
  CHECK_THROWS_AS(brute_log_z(big, 1 << 20), CapExceeded);
}

TEST_CASE("brute MAP") {
  const MapResult a = brute_map(one_node(0, 2));
  CHECK(a.assignment == Assignment{1});
  CHECK(a.energy == 2.0);
  const PairwiseMrf flat({make_lattice({2, 2, false}), 2, std::vector<double>(8, 0.0), std::vector<double>(16, 0.0)});
  const MapResult z = brute_map(flat);
  CHECK(z.assignment == Assignment{0, 0, 0, 0});
  CHECK(z.energy == 0.0);

  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const PairwiseMrf m = oracle::random_mrf(rng, make_lattice({3, 3, false}));
    const MapResult r = brute_map(m);
    const oracle::Brute b = oracle::brute(m);
    CHECK(r.assignment == b.map);
    CHECK(r.energy == doctest::Approx(b.map_energy).epsilon(1e-14));
    CHECK(brute_log_z(m) == doctest::Approx(b.log_z).epsilon(1e-13));
  }
}

TEST_CASE("lexicographic tie-breaking with integer tables") {
  // x = (1, 0) and (0, 1) both reach 1; the smaller one wins.
  const PairwiseMrf tie({Graph(2, {{0, 1}}), 2, {0, 0, 0, 0}, {0, 1, 1, 0}});
  CHECK(brute_map(tie).assignment == Assignment{0, 1});
  CHECK(solve_exact(tie).map_assignment == Assignment{0, 1});
  const std::vector<Node> both{0, 1};
  CHECK(component_solve(tie, both).map_assignment == Assignment{0, 1});
}

TEST_CASE("brute max-marginals") {
  const MaxMarginal eq = brute_max_marginal(one_node(0, 0), 0);
  CHECK(eq.at0 == eq.at1);
  const MaxMarginal e = brute_max_marginal(one_edge(2), 0);
  CHECK(e.at0 == 0.0);
  CHECK(e.at1 == 2.0);

  Rng rng(3);
  const Graph tri(3, {{0, 1}, {0, 2}, {1, 2}});
  for (int t = 0; t < 10; ++t) {
    const PairwiseMrf m = oracle::random_mrf(rng, tri);
    const double h = brute_map(m).energy;
    for (Node v = 0; v < 3; ++v) {
      const MaxMarginal mm = brute_max_marginal(m, v);
      CHECK(std::max(mm.at0, mm.at1) == doctest::Approx(h).epsilon(1e-14));
    }
  }
  const MaxMarginal clamped = brute_max_marginal(one_edge(2), 0, Evidence{-1, 0});
  CHECK(clamped.at1 == 0.0);
  const MaxMarginal impossible = brute_max_marginal(one_edge(2), 0, Evidence{0, -1});
  CHECK(std::isinf(impossible.at1));
  CHECK_THROWS_AS(brute_max_marginal(oracle::random_mrf(rng, tri, 3), 0), InvalidInput);
}

TEST_CASE("elimination solver matches enumeration") {
  Rng rng(4);
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + t % 9;
    const int sigma = 2 + t % 2;
    const PairwiseMrf m = oracle::random_mrf(rng, oracle::random_graph(rng, n, 0.4), sigma);
    const ExactResult r = solve_exact(m);
    const oracle::Brute b = oracle::brute(m);
    CHECK(rel_close(r.log_z, b.log_z, 1e-12));
    CHECK(rel_close(r.map_energy, b.map_energy, 1e-12));
    CHECK(r.map_energy == energy(m, r.map_assignment));
    CHECK(r.log_z >= r.map_energy);
  }
}

TEST_CASE("component solve") {
  Rng rng(5);
  const PairwiseMrf m = oracle::random_mrf(rng, make_lattice({3, 3, false}));
  const std::vector<Node> single{4};
  const ExactResult s = component_solve(m, single);
  CHECK(s.log_z == doctest::Approx(std::log(std::exp(m.phi(4, 0)) + std::exp(m.phi(4, 1)))).epsilon(1e-14));
  CHECK(s.map_assignment == Assignment{m.phi(4, 1) > m.phi(4, 0) ? 1 : 0});

  const std::vector<Node> pair{1, 4};
  const ExactResult p = component_solve(m, pair);
  const oracle::Brute b = oracle::brute(induced_mrf(m, pair));
  CHECK(rel_close(p.log_z, b.log_z, 1e-13));
  CHECK(p.map_assignment == b.map);

  const std::vector<Node> unsorted{4, 1};
  CHECK_THROWS_AS(component_solve(m, unsorted), InvalidInput);
  CHECK_THROWS_AS(solve_exact(oracle::random_mrf(rng, make_lattice({6, 6, false})), 16), CapExceeded);
}

TEST_CASE("transfer matrix") {
  Rng rng(6);
  SUBCASE("2x2 grid") {
    const PairwiseMrf m = oracle::random_mrf(rng, make_lattice({2, 2, false}));
    CHECK(rel_close(grid_transfer_log_z(m, {2, 2, false}), brute_log_z(m), 1e-10));
  }
  SUBCASE("4x4 grid with no couplings") {
    MrfTables t;
    t.graph = make_lattice({4, 4, false});
    for (int i = 0; i < 32; ++i) t.node_tables.push_back(rng.uniform01());
    t.edge_tables.assign(static_cast<std::size_t>(4 * t.graph.num_edges()), 0.0);
    const PairwiseMrf m(t);
    double expect = 0.0;
    for (Node v = 0; v < 16; ++v) expect += std::log(std::exp(m.phi(v, 0)) + std::exp(m.phi(v, 1)));
    CHECK(rel_close(grid_transfer_log_z(m, {4, 4, false}), expect, 1e-12));
  }
  SUBCASE("rectangles and cris-cross against enumeration") {
    for (int r = 1; r <= 4; ++r)
      for (int c = 1; c <= 4; ++c)
        for (bool cc : {false, true}) {
          const GridShape s{r, c, cc};
          const PairwiseMrf m = oracle::random_mrf(rng, make_lattice(s), r * c <= 8 ? 3 : 2);
          CHECK(rel_close(grid_transfer_log_z(m, s), brute_log_z(m), 1e-10));
          const MapResult tm = grid_transfer_map(m, s);
          const MapResult bm = brute_map(m);
          CHECK(rel_close(tm.energy, bm.energy, 1e-12));
        }
  }
  SUBCASE("topology and cap errors") {
    const PairwiseMrf m = oracle::random_mrf(rng, make_lattice({3, 3, true}));
    CHECK_THROWS_AS(grid_transfer_log_z(m, {3, 3, false}), UnsupportedTopology);
    CHECK_THROWS_AS(grid_transfer_log_z(m, {3, 3, true}, 4), CapExceeded);
  }
}

TEST_CASE("degree lower bounds on log Z and H(x*)") {
  Rng rng(7);
  for (int t = 0; t < 40; ++t) {
    const PairwiseMrf m = oracle::random_mrf(rng, oracle::random_graph(rng, 7, 0.4), 2, 3.0);
    const double d1 = m.graph().max_degree() + 1;
    double range = 0.0;
    double upper = 0.0;
    for (int e = 0; e < m.graph().num_edges(); ++e) {
      range += m.psi_upper(e) - m.psi_lower(e);
      upper += m.psi_upper(e);
    }
    const ExactResult r = solve_exact(m);
    CHECK(r.log_z >= range / d1 - 1e-12);
    CHECK(r.map_energy >= upper / d1 - 1e-12);
  }
}

TEST_CASE("log_add_exp") {
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_add_exp(ninf, ninf) == ninf);
  CHECK(log_add_exp(ninf, 1.5) == 1.5);
  CHECK(log_add_exp(0.0, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(log_add_exp(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
}
