// Command-line front end: one subcommand per library entry point.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "locinf/bench.hpp"
#include "locinf/decomp.hpp"
#include "locinf/error.hpp"
#include "locinf/exact.hpp"
#include "locinf/inference.hpp"
#include "locinf/mrf_io.hpp"
#include "locinf/reduce.hpp"
#include "locinf/saw.hpp"

using namespace locinf;

namespace {

// Writes to the file if a path was given, to stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidInput("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct DecompOptions {
  std::string alg = "none";
  double eps = 0.25;
  int K = 0;
  int rounds = 3;
  int lambda = 4;
  int k = 2;
  int l1 = 0;
  int l2 = 0;
};

void add_decomp_options(CLI::App* app, DecompOptions& o, bool with_offsets) {
  app->add_option("--eps", o.eps, "dbdim removal parameter")->capture_default_str();
  app->add_option("--K", o.K, "dbdim radius truncation (0: derived from eps, rho = 2)")->capture_default_str();
  app->add_option("--r,--rounds", o.rounds, "minor rounds")->capture_default_str();
  app->add_option("--lambda", o.lambda, "minor level period")->capture_default_str();
  app->add_option("--k", o.k, "grid slab width")->capture_default_str();
  if (with_offsets) {
    app->add_option("--l1", o.l1, "grid column offset")->capture_default_str();
    app->add_option("--l2", o.l2, "grid row offset")->capture_default_str();
  }
}

// Edge decomposition of any supported kind; grid and cris-cross lattices
// are cut through their grid sub-graph.
EdgeDecomposition edge_decomposition(const Graph& g, const DecompOptions& o, std::uint64_t seed,
                                     std::optional<std::pair<int, int>> offsets) {
  const DecompAlgorithm alg = parse_decomp_algorithm(o.alg);
  const auto shape = infer_lattice_shape(g);
  const bool lift = shape && shape->criscross && alg != DecompAlgorithm::kNone;
  const Graph base = lift ? make_lattice(without_diagonals(*shape)) : g;
  EdgeDecomposition d;
  switch (alg) {
    case DecompAlgorithm::kNone:
      d = no_decomposition(g);
      break;
    case DecompAlgorithm::kDbDim:
      d = db_dim_edge(base, o.eps, o.K > 0 ? o.K : k_param(o.eps, 2.0), seed);
      break;
    case DecompAlgorithm::kMinor:
      d = minor_e(base, o.rounds, o.lambda, seed);
      break;
    case DecompAlgorithm::kGrid: {
      if (!shape || shape->rows != shape->cols)
        throw UnsupportedTopology("grid decomposition needs a square grid or cris-cross graph");
      int l1 = 0;
      int l2 = 0;
      if (offsets) {
        std::tie(l1, l2) = *offsets;
      } else {
        Rng rng(seed);
        l1 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(o.k)));
        l2 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(o.k)));
      }
      d = grid_decomp(shape->rows, o.k, l1, l2);
      break;
    }
  }
  return lift ? lift_decomposition(base, d, g) : d;
}

struct Oracle {
  std::optional<double> log_z;
  std::optional<double> h_star;
};

Oracle run_oracle(const PairwiseMrf& mrf) {
  Oracle o;
  try {
    if (const auto shape = infer_lattice_shape(mrf.graph())) {
      o.log_z = grid_transfer_log_z(mrf, *shape);
      o.h_star = grid_transfer_map(mrf, *shape).energy;
    } else {
      const ExactResult r = solve_exact(mrf);
      o.log_z = r.log_z;
      o.h_star = r.map_energy;
    }
  } catch (const CapExceeded&) {
  }
  return o;
}

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw InvalidInput("bad number '" + item + "'");
  }
  return out;
}

void print_assignment(std::ostream& os, const Assignment& x) {
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? " " : "") << x[i];
  os << '\n';
}

void print_ratio(std::ostream& os, Node v, const RatioPair& r) {
  os << v << ' ' << format_double(r.log_num) << ' ' << format_double(r.log_den) << ' '
     << format_double(r.log_ratio()) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local inference on pairwise Markov random fields"};
  app.require_subcommand(1);

  // decompose
  auto* dec = app.add_subcommand("decompose", "Randomized graph decomposition");
  std::string dec_graph;
  std::string dec_out;
  DecompOptions dec_opt;
  std::uint64_t dec_seed = 1;
  bool dec_vertex = false;
  dec->add_option("--graph", dec_graph, "MRF text file (only the graph is used)")->required();
  dec->add_option("--alg", dec_opt.alg, "dbdim | minorv | minore | grid | none")->required();
  add_decomp_options(dec, dec_opt, true);
  dec->add_option("--seed", dec_seed)->capture_default_str();
  dec->add_flag("--vertex", dec_vertex, "dbdim: remove nodes instead of edges");
  dec->add_option("--out", dec_out, "output file (default stdout)");

  // exact
  auto* ex = app.add_subcommand("exact", "Exact log Z and MAP");
  std::string ex_graph;
  std::string ex_mode = "both";
  bool ex_transfer = false;
  std::uint64_t ex_cap = kDefaultTableCap;
  ex->add_option("--graph", ex_graph, "MRF text file")->required();
  ex->add_option("--mode", ex_mode, "logz | map | both")
      ->check(CLI::IsMember({"logz", "map", "both"}))
      ->capture_default_str();
  ex->add_flag("--transfer", ex_transfer, "use the transfer matrix (lattice inputs)");
  ex->add_option("--cap", ex_cap, "largest elimination table")->capture_default_str();

  // logz / map
  struct InferArgs {
    std::string graph;
    DecompOptions decomp;
    std::uint64_t seed = 1;
    int trials = 1;
    std::string csv;
  };
  InferArgs lz_args;
  InferArgs mp_args;
  auto add_infer = [](CLI::App* sub, InferArgs& a) {
    sub->add_option("--graph", a.graph, "MRF text file")->required();
    sub->add_option("--decomp", a.decomp.alg, "dbdim | minore | grid | none")
        ->check(CLI::IsMember({"dbdim", "minore", "minor", "grid", "none"}))
        ->capture_default_str();
    add_decomp_options(sub, a.decomp, false);
    sub->add_option("--seed", a.seed)->capture_default_str();
    sub->add_option("--trials", a.trials)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--csv", a.csv, "per-trial CSV (default stdout)");
  };
  auto* lz = app.add_subcommand("logz", "Certified log-partition bounds");
  add_infer(lz, lz_args);
  auto* mp = app.add_subcommand("map", "MAP estimate with guaranteed gap");
  add_infer(mp, mp_args);

  // saw
  auto* sw = app.add_subcommand("saw", "Self-avoiding-walk tree max-marginal ratios");
  std::string sw_graph;
  int sw_root = 0;
  bool sw_msgpass = false;
  std::string sw_trace;
  std::uint64_t sw_cap = kDefaultSawCap;
  sw->add_option("--graph", sw_graph, "binary MRF text file")->required();
  sw->add_option("--root", sw_root)->capture_default_str();
  sw->add_flag("--msgpass", sw_msgpass, "run the distributed schedule for every node");
  sw->add_option("--trace", sw_trace, "log every path / computation sequence");
  sw->add_option("--cap", sw_cap)->capture_default_str();

  // reduce
  auto* rd = app.add_subcommand("reduce", "Factor model to independent-set binary MRF");
  std::string rd_in;
  std::string rd_out;
  rd->add_option("--in", rd_in, "factor model text file")->required();
  rd->add_option("--out", rd_out, "MRF text output (default stdout)");

  // experiment
  auto* xp = app.add_subcommand("experiment", "Run a trial grid from a key=value spec");
  std::string xp_spec;
  std::string xp_csv;
  std::string xp_summary;
  xp->add_option("--spec", xp_spec)->required();
  xp->add_option("--csv", xp_csv, "per-trial CSV (default stdout)");
  xp->add_option("--summary", xp_summary, "per-cell means CSV");

  // limit
  auto* lm = app.add_subcommand("limit", "Free-energy sequence log Z_n / n^2 on n x n grids");
  std::string lm_phi = "0,0";
  std::string lm_psi = "0.2,0,0,0.2";
  int lm_nmin = 3;
  int lm_nmax = 10;
  int lm_k = 3;
  std::string lm_csv;
  lm->add_option("--phi", lm_phi, "two comma-separated node values")->capture_default_str();
  lm->add_option("--psi", lm_psi, "four comma-separated edge values, row-major")->capture_default_str();
  lm->add_option("--nmin", lm_nmin)->capture_default_str();
  lm->add_option("--nmax", lm_nmax)->capture_default_str();
  lm->add_option("--k", lm_k, "slab width of the sandwich estimates")->capture_default_str();
  lm->add_option("--csv", lm_csv);

  // bounds
  auto* bd = app.add_subcommand("bounds", "A-priori error-bound curves");
  std::string bd_topology = "grid";
  int bd_n = 100;
  std::string bd_decomp = "minore";
  std::string bd_params = "3,4,5";
  int bd_rounds = 3;
  std::string bd_mode = "interaction";
  std::string bd_alpha = "0.2,0.4,0.6,0.8,1,1.2,1.4,1.6,1.8,2";
  std::string bd_csv;
  bd->add_option("--topology", bd_topology, "grid | criscross")->capture_default_str();
  bd->add_option("--n", bd_n)->capture_default_str();
  bd->add_option("--decomp", bd_decomp, "minore | grid | dbdim")->capture_default_str();
  bd->add_option("--param", bd_params, "lambda, k or eps values")->capture_default_str();
  bd->add_option("--rounds", bd_rounds)->capture_default_str();
  bd->add_option("--mode", bd_mode, "interaction | field")->capture_default_str();
  bd->add_option("--alpha", bd_alpha)->capture_default_str();
  bd->add_option("--csv", bd_csv);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dec) {
      const PairwiseMrf mrf = read_mrf_file(dec_graph);
      const Graph& g = mrf.graph();
      Output out(dec_out);
      if (dec_opt.alg == "minorv") {
        out.stream() << format_decomposition(g, minor_v(g, dec_opt.rounds, dec_opt.lambda, dec_seed));
      } else if (dec_opt.alg == "dbdim" && dec_vertex) {
        const int K = dec_opt.K > 0 ? dec_opt.K : k_param(dec_opt.eps, 2.0);
        out.stream() << format_decomposition(g, db_dim_vertex(g, dec_opt.eps, K, dec_seed));
      } else {
        const auto d = edge_decomposition(g, dec_opt, dec_seed, std::pair{dec_opt.l1, dec_opt.l2});
        out.stream() << format_decomposition(g, d);
      }
    } else if (*ex) {
      const PairwiseMrf mrf = read_mrf_file(ex_graph);
      std::optional<double> log_z;
      MapResult map;
      bool want_z = ex_mode != "map";
      bool want_map = ex_mode != "logz";
      if (ex_transfer) {
        const auto shape = infer_lattice_shape(mrf.graph());
        if (!shape) throw UnsupportedTopology("--transfer needs a grid or cris-cross graph");
        if (want_z) log_z = grid_transfer_log_z(mrf, *shape);
        if (want_map) map = grid_transfer_map(mrf, *shape);
      } else {
        const ExactResult r = solve_exact(mrf, ex_cap);
        log_z = r.log_z;
        map = {r.map_assignment, r.map_energy};
      }
      if (want_z) std::cout << "log_z " << format_double(*log_z) << '\n';
      if (want_map) {
        std::cout << "map_energy " << format_double(map.energy) << "\nmap ";
        print_assignment(std::cout, map.assignment);
      }
    } else if (*lz || *mp) {
      const InferArgs& a = *lz ? lz_args : mp_args;
      const PairwiseMrf mrf = read_mrf_file(a.graph);
      const Oracle oracle = run_oracle(mrf);
      Output out(a.csv);
      out.stream() << "seed,lb,ub,gap,exact,H_hat,H_star\n";
      for (int t = 0; t < a.trials; ++t) {
        const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(t);
        const EdgeDecomposition d = edge_decomposition(mrf.graph(), a.decomp, seed, std::nullopt);
        const InferenceBounds b = log_partition_bounds(mrf, d);
        const MapEstimate m = mode_estimate(mrf, d);
        out.stream() << seed << ',' << format_double(b.log_z_lb) << ',' << format_double(b.log_z_ub) << ','
                     << format_double(b.gap) << ',' << opt(oracle.log_z) << ',' << format_double(m.energy)
                     << ',' << opt(oracle.h_star) << '\n';
        if (*mp && !a.csv.empty()) {
          std::cout << "seed " << seed << " map ";
          print_assignment(std::cout, m.assignment);
        }
      }
    } else if (*sw) {
      const PairwiseMrf mrf = read_mrf_file(sw_graph);
      if (sw_root < 0 || sw_root >= mrf.num_nodes()) throw InvalidInput("--root out of range");
      std::unique_ptr<std::ofstream> trace;
      if (!sw_trace.empty()) {
        trace = std::make_unique<std::ofstream>(sw_trace);
        if (!*trace) throw InvalidInput("cannot write " + sw_trace);
      }
      if (sw_msgpass) {
        MsgPassOptions o;
        o.cap = sw_cap;
        o.trace = trace.get();
        const MsgPassResult r = msg_pass_mode(mrf, o);
        std::cout << "node log_q1 log_q0 log_ratio computation_sequences\n";
        for (Node v = 0; v < mrf.num_nodes(); ++v) {
          const RatioPair& q = r.ratios[static_cast<std::size_t>(v)];
          std::cout << v << ' ' << format_double(q.log_num) << ' ' << format_double(q.log_den) << ' '
                    << format_double(q.log_ratio()) << ' '
                    << r.computation_sequences[static_cast<std::size_t>(v)] << '\n';
        }
        std::cout << "path_sequences " << r.path_sequences << '\n';
      } else {
        const SawTree t = build_saw_tree(mrf, sw_root, {}, sw_cap);
        if (trace)
          for (std::size_t i = 0; i < t.nodes.size(); ++i) {
            const SawNode& s = t.nodes[i];
            *trace << i << ' ' << s.original << ' ' << s.parent << ' ' << s.depth << ' '
                   << (s.mark == LeafMark::kGreen ? "green" : s.mark == LeafMark::kRed ? "red" : "-")
                   << '\n';
          }
        std::cout << "tree_nodes " << t.nodes.size() << "\ntree_edges " << t.num_edges() << "\ngreen "
                  << t.num_marked(LeafMark::kGreen) << "\nred " << t.num_marked(LeafMark::kRed)
                  << "\nnode log_q1 log_q0 log_ratio\n";
        print_ratio(std::cout, sw_root, saw_max_ratio(mrf, t));
      }
    } else if (*rd) {
      const FactorModel model = read_factor_model_file(rd_in);
      const MwisInstance inst = factor_to_mwis(model);
      Output out(rd_out);
      out.stream() << "# conflict graph: " << inst.graph.num_nodes() << " nodes, c = " << format_double(inst.c)
                   << "\n";
      for (Node v = 0; v < inst.graph.num_nodes(); ++v) {
        const MwisLabel& l = inst.labels[static_cast<std::size_t>(v)];
        out.stream() << "# node " << v << ": factor " << l.factor << " values";
        for (int x : l.values) out.stream() << ' ' << x;
        out.stream() << '\n';
      }
      write_mrf(out.stream(), mwis_as_binary_mrf(inst));
    } else if (*xp) {
      const ExperimentSpec spec = read_experiment_spec_file(xp_spec);
      const auto records = run_experiment(spec);
      Output out(xp_csv);
      write_trials_csv(out.stream(), records);
      const auto cells = summarize(records);
      if (!xp_summary.empty()) {
        Output s(xp_summary);
        write_summary_csv(s.stream(), cells);
      }
      bool all_ok = true;
      for (const auto& c : cells) all_ok = all_ok && c.all_ok;
      std::cerr << records.size() << " trials, invariants " << (all_ok ? "hold" : "VIOLATED") << '\n';
      return all_ok ? 0 : 5;
    } else if (*lm) {
      if (lm_nmin < 2 || lm_nmax < lm_nmin) throw InvalidInput("need 2 <= nmin <= nmax");
      std::vector<int> ns;
      for (int n = lm_nmin; n <= lm_nmax; ++n) ns.push_back(n);
      const auto phi = parse_list(lm_phi);
      const auto psi = parse_list(lm_psi);
      for (double x : phi)
        if (x < 0.0) throw InvalidInput("--phi values must be >= 0");
      for (double x : psi)
        if (x < 0.0) throw InvalidInput("--psi values must be >= 0");
      Output out(lm_csv);
      write_free_energy_csv(out.stream(), free_energy_sequence(phi, psi, ns, lm_k));
    } else if (*bd) {
      const auto rows = bound_curves(parse_topology(bd_topology), bd_n, parse_decomp_algorithm(bd_decomp),
                                     parse_list(bd_params), bd_rounds, parse_potential_mode(bd_mode),
                                     parse_list(bd_alpha));
      Output out(bd_csv);
      write_bound_csv(out.stream(), rows);
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "error: exponential operation refused: " << e.what() << '\n';
    return 3;
  } catch (const UnsupportedTopology& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
