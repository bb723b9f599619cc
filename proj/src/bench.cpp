#include "locinf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "locinf/error.hpp"
#include "locinf/exact.hpp"
#include "locinf/inference.hpp"
#include "locinf/mrf_io.hpp"
#include "locinf/rng.hpp"
#include "locinf/saw.hpp"

namespace locinf {

Graph gen_grid(int n) {
  if (n < 2) throw InvalidInput("gen_grid: n must be >= 2");
  return make_lattice({n, n, false});
}

Graph gen_criscross(int n) {
  if (n < 2) throw InvalidInput("gen_criscross: n must be >= 2");
  return make_lattice({n, n, true});
}

Graph gen_random(int n, double p, std::uint64_t seed) {
  if (n < 1 || !(p >= 0.0 && p <= 1.0)) throw InvalidInput("gen_random: need n >= 1, p in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Node u = 0; u < n; ++u)
    for (Node v = u + 1; v < n; ++v)
      if (rng.uniform01() < p) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

std::string to_string(PotentialMode m) {
  return m == PotentialMode::kVaryingInteraction ? "interaction" : "field";
}

PotentialMode parse_potential_mode(const std::string& s) {
  if (s == "interaction" || s == "varying-interaction") return PotentialMode::kVaryingInteraction;
  if (s == "field" || s == "varying-field") return PotentialMode::kVaryingField;
  throw InvalidInput("unknown potential mode '" + s + "'");
}

MrfTables sample_ising(const Graph& g, PotentialMode mode, double alpha, std::uint64_t seed) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidInput("sample_ising: alpha must be >= 0");
  const bool vi = mode == PotentialMode::kVaryingInteraction;
  const double field = vi ? 0.05 : alpha;
  const double coupling = vi ? alpha : 0.5;
  Rng rng(seed);
  MrfTables t;
  t.graph = g;
  t.alphabet_size = 2;
  for (Node v = 0; v < g.num_nodes(); ++v) {
    const double th = rng.uniform(-field, field);
    t.node_tables.insert(t.node_tables.end(), {0.0, th});
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    const double th = rng.uniform(-coupling, coupling);
    t.edge_tables.insert(t.edge_tables.end(), {0.0, 0.0, 0.0, th});
  }
  return t;
}

PairwiseMrf sample_potentials(const Graph& g, PotentialMode mode, double alpha, std::uint64_t seed) {
  return affine_shift(sample_ising(g, mode, alpha, seed)).mrf;
}

std::string to_string(Topology t) {
  switch (t) {
    case Topology::kGrid: return "grid";
    case Topology::kCrisCross: return "criscross";
    case Topology::kLineChords: return "linechords";
    case Topology::kRandom: return "random";
  }
  return "?";
}

Topology parse_topology(const std::string& s) {
  if (s == "grid") return Topology::kGrid;
  if (s == "criscross") return Topology::kCrisCross;
  if (s == "linechords") return Topology::kLineChords;
  if (s == "random") return Topology::kRandom;
  throw InvalidInput("unknown topology '" + s + "'");
}

// ---------------------------------------------------------------------------
// Spec file

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidInput("bad number '" + s + "'");
  }
  if (used != s.size()) throw InvalidInput("bad number '" + s + "'");
  return x;
}

int to_int(const std::string& s) {
  const double x = to_double(s);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw InvalidInput("expected an integer, got '" + s + "'");
  return static_cast<int>(x);
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    if (const auto c1 = item.find(':'); c1 != std::string::npos) {
      const auto c2 = item.find(':', c1 + 1);
      if (c2 == std::string::npos) throw InvalidInput("range needs a:b:step, got '" + item + "'");
      const double a = to_double(trim(item.substr(0, c1)));
      const double b = to_double(trim(item.substr(c1 + 1, c2 - c1 - 1)));
      const double step = to_double(trim(item.substr(c2 + 1)));
      if (!(step > 0.0) || b < a) throw InvalidInput("bad range '" + item + "'");
      const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
      for (long i = 0; i < count; ++i)
        out.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
    } else {
      out.push_back(to_double(item));
    }
  }
  return out;
}

bool to_bool(const std::string& s) {
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  throw InvalidInput("expected a boolean, got '" + s + "'");
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::istream& in) {
  ExperimentSpec s;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("spec line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "topology") s.topology = parse_topology(val);
      else if (key == "n") s.n = to_int(val);
      else if (key == "chords") s.chords = to_int(val);
      else if (key == "p") s.p = to_double(val);
      else if (key == "mode") s.mode = parse_potential_mode(val);
      else if (key == "alpha") s.alphas = to_list(val);
      else if (key == "decomp") s.algorithm = parse_decomp_algorithm(val);
      else if (key == "rounds") s.rounds = to_int(val);
      else if (key == "param" || key == "lambda" || key == "k" || key == "eps") s.params = to_list(val);
      else if (key == "K") s.K = to_int(val);
      else if (key == "trials") s.trials = to_int(val);
      else if (key == "seed") s.seed = static_cast<std::uint64_t>(std::stoull(val));
      else if (key == "exact") s.exact = to_bool(val);
      else throw InvalidInput("unknown key '" + key + "'");
    } catch (const InvalidInput& e) {
      throw InvalidInput("spec line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::exception&) {
      throw InvalidInput("spec line " + std::to_string(line_no) + ": bad value '" + val + "'");
    }
  }
  validate_experiment_spec(s);
  return s;
}

ExperimentSpec read_experiment_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return parse_experiment_spec(in);
}

void validate_experiment_spec(const ExperimentSpec& s) {
  if (s.alphas.empty()) throw InvalidInput("spec: alpha grid is empty");
  if (s.params.empty() && s.algorithm != DecompAlgorithm::kNone)
    throw InvalidInput("spec: parameter grid is empty");
  if (s.trials < 1) throw InvalidInput("spec: trials must be >= 1");
  if (s.n < 2) throw InvalidInput("spec: n must be >= 2");
  for (double a : s.alphas)
    if (!(a >= 0.0)) throw InvalidInput("spec: alpha must be >= 0");
  for (double p : s.params) {
    if (s.algorithm == DecompAlgorithm::kDbDim && !(p > 0.0 && p < 1.0))
      throw InvalidInput("spec: dbdim eps must lie in (0, 1)");
    if ((s.algorithm == DecompAlgorithm::kMinor || s.algorithm == DecompAlgorithm::kGrid) &&
        (p < 1.0 || p != std::floor(p)))
      throw InvalidInput("spec: lambda / k must be positive integers");
  }
  if (s.algorithm == DecompAlgorithm::kGrid && s.topology != Topology::kGrid &&
      s.topology != Topology::kCrisCross)
    throw InvalidInput("spec: grid decomposition needs a grid or cris-cross topology");
  if (s.algorithm == DecompAlgorithm::kMinor && s.rounds < 1) throw InvalidInput("spec: rounds must be >= 1");
  // Lattice oracles are certain to be infeasible past the transfer budget;
  // other topologies are attempted and flagged per record.
  const bool lattice = s.topology == Topology::kGrid || s.topology == Topology::kCrisCross;
  if (s.exact && lattice && (std::uint64_t{1} << std::min(s.n, 63)) > kDefaultTransferStates)
    throw InvalidInput("spec: n = " + std::to_string(s.n) +
                       " is beyond the exact oracle; set exact = false");
}

// ---------------------------------------------------------------------------
// Experiment

namespace {

struct Instance {
  Graph graph;
  std::optional<GridShape> shape;
};

Instance make_instance(const ExperimentSpec& s) {
  switch (s.topology) {
    case Topology::kGrid: return {gen_grid(s.n), GridShape{s.n, s.n, false}};
    case Topology::kCrisCross: return {gen_criscross(s.n), GridShape{s.n, s.n, true}};
    case Topology::kLineChords: return {saw_lower_bound_family(s.n, s.chords), std::nullopt};
    case Topology::kRandom: return {gen_random(s.n, s.p, s.seed), std::nullopt};
  }
  throw InvalidInput("bad topology");
}

EdgeDecomposition decompose_base(const ExperimentSpec& s, const Graph& g, double param,
                                 std::uint64_t seed) {
  switch (s.algorithm) {
    case DecompAlgorithm::kNone: return no_decomposition(g);
    case DecompAlgorithm::kMinor: return minor_e(g, s.rounds, static_cast<int>(param), seed);
    case DecompAlgorithm::kDbDim: {
      const int K = s.K > 0 ? s.K : k_param(param, 2.0);
      return db_dim_edge(g, param, K, seed);
    }
    case DecompAlgorithm::kGrid: {
      const int k = static_cast<int>(param);
      Rng rng(seed);
      const int l1 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(k)));
      const int l2 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(k)));
      return grid_decomp(s.n, k, l1, l2);
    }
  }
  throw InvalidInput("bad decomposition");
}

// Cris-cross instances are cut through their grid sub-graph.
EdgeDecomposition decompose(const ExperimentSpec& s, const Instance& inst, double param,
                            std::uint64_t seed) {
  if (s.topology == Topology::kCrisCross) {
    const Graph sub = make_lattice(without_diagonals(*inst.shape));
    return lift_decomposition(sub, decompose_base(s, sub, param, seed), inst.graph);
  }
  return decompose_base(s, inst.graph, param, seed);
}

bool close_le(double a, double b, double rel) {
  return a <= b + rel * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string clean(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec) {
  validate_experiment_spec(spec);
  const Instance inst = make_instance(spec);
  const std::vector<double> params =
      spec.algorithm == DecompAlgorithm::kNone ? std::vector<double>{0.0} : spec.params;
  std::vector<TrialRecord> out;

  for (std::size_t ai = 0; ai < spec.alphas.size(); ++ai) {
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
      for (int t = 0; t < spec.trials; ++t) {
        const auto t0 = std::chrono::steady_clock::now();
        TrialRecord r;
        r.topology = to_string(spec.topology);
        r.n = spec.n;
        r.mode = to_string(spec.mode);
        r.alpha = spec.alphas[ai];
        r.decomp = to_string(spec.algorithm);
        r.param = params[pi];
        r.trial = t;
        r.model_seed = derive_seed(spec.seed, {ai, static_cast<std::uint64_t>(t)});
        r.decomp_seed = derive_seed(spec.seed, {0xdec0, ai, pi, static_cast<std::uint64_t>(t)});
        r.nodes = inst.graph.num_nodes();

        const PairwiseMrf mrf = sample_potentials(inst.graph, spec.mode, r.alpha, r.model_seed);
        const EdgeDecomposition d = decompose(spec, inst, r.param, r.decomp_seed);
        r.removed = static_cast<int>(d.removed_edges.size());
        r.max_component = max_component_size(d.components);
        std::vector<std::string> notes;
        try {
          const InferenceBounds b = log_partition_bounds(mrf, d);
          const MapEstimate m = mode_estimate(mrf, d);
          r.lb = b.log_z_lb;
          r.ub = b.log_z_ub;
          r.gap = b.gap;
          r.h_hat = m.energy;
          if (std::abs((r.ub - r.lb) - r.gap) > 1e-12 * std::max(1.0, std::abs(r.ub)))
            notes.push_back("gap identity failed");
          if (std::abs(m.energy - energy(mrf, m.assignment)) != 0.0) notes.push_back("energy mismatch");
        } catch (const CapExceeded& e) {
          r.ok = false;
          notes.push_back(std::string("component too large: ") + e.what());
        }

        if (spec.exact && r.ok) {
          try {
            if (inst.shape) {
              r.exact = grid_transfer_log_z(mrf, *inst.shape);
              r.h_star = grid_transfer_map(mrf, *inst.shape).energy;
            } else {
              const ExactResult x = solve_exact(mrf);
              r.exact = x.log_z;
              r.h_star = x.map_energy;
            }
          } catch (const CapExceeded& e) {
            notes.push_back(std::string("no oracle: ") + e.what());
          }
        }
        const double nn = r.nodes;
        if (r.exact) {
          r.error_logz = std::abs(r.lb - *r.exact) / nn;
          r.error_logz_ub = std::abs(r.ub - *r.exact) / nn;
          if (!close_le(r.lb, *r.exact, 1e-9) || !close_le(*r.exact, r.ub, 1e-9))
            notes.push_back("bracket failed");
        }
        if (r.h_star) {
          r.error_map = (*r.h_star - r.h_hat) / nn;
          if (!close_le(r.h_hat, *r.h_star, 1e-12) || !close_le(*r.h_star - r.gap, r.h_hat, 1e-12))
            notes.push_back("map sandwich failed");
        }
        for (const auto& n : notes)
          if (n.find("no oracle") == std::string::npos) r.ok = false;
        for (std::size_t i = 0; i < notes.size(); ++i) r.note += (i ? "; " : "") + clean(notes[i]);
        r.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records) {
  std::vector<CellSummary> cells;
  std::map<std::pair<double, double>, std::size_t> index;
  std::vector<int> n_err;
  std::vector<int> n_map;
  for (const TrialRecord& r : records) {
    auto [it, fresh] = index.try_emplace({r.alpha, r.param}, cells.size());
    if (fresh) {
      CellSummary c;
      c.alpha = r.alpha;
      c.param = r.param;
      cells.push_back(c);
      n_err.push_back(0);
      n_map.push_back(0);
    }
    const std::size_t i = it->second;
    CellSummary& c = cells[i];
    ++c.trials;
    c.mean_gap += r.gap / r.nodes;
    if (r.error_logz) {
      c.mean_error_logz = c.mean_error_logz.value_or(0.0) + *r.error_logz;
      ++n_err[i];
    }
    if (r.error_map) {
      c.mean_error_map = c.mean_error_map.value_or(0.0) + *r.error_map;
      ++n_map[i];
    }
    c.all_ok = c.all_ok && r.ok;
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i].mean_gap /= cells[i].trials;
    if (cells[i].mean_error_logz) *cells[i].mean_error_logz /= n_err[i];
    if (cells[i].mean_error_map) *cells[i].mean_error_map /= n_map[i];
  }
  return cells;
}

// ---------------------------------------------------------------------------
// CSV

const char* const kTrialCsvHeader =
    "topology,n,mode,alpha,decomp,param,trial,model_seed,decomp_seed,nodes,removed,max_component,"
    "lb,ub,gap,exact,h_hat,h_star,error_logz,error_logz_ub,error_map,ok,wall_ms,note";

namespace {

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return to_double(s);
}

}  // namespace

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kTrialCsvHeader << '\n';
  for (const TrialRecord& r : records) {
    out << r.topology << ',' << r.n << ',' << r.mode << ',' << format_double(r.alpha) << ',' << r.decomp
        << ',' << format_double(r.param) << ',' << r.trial << ',' << r.model_seed << ',' << r.decomp_seed
        << ',' << r.nodes << ',' << r.removed << ',' << r.max_component << ',' << format_double(r.lb)
        << ',' << format_double(r.ub) << ',' << format_double(r.gap) << ',' << opt(r.exact) << ','
        << format_double(r.h_hat) << ',' << opt(r.h_star) << ',' << opt(r.error_logz) << ','
        << opt(r.error_logz_ub) << ',' << opt(r.error_map) << ',' << (r.ok ? 1 : 0) << ','
        << format_double(r.wall_ms) << ',' << clean(r.note) << '\n';
  }
}

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kTrialCsvHeader)
    throw InvalidInput("trial csv: unexpected header");
  std::vector<TrialRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 24) throw InvalidInput("trial csv line " + std::to_string(line_no) + ": expected 24 fields");
    try {
      TrialRecord r;
      r.topology = f[0];
      r.n = to_int(f[1]);
      r.mode = f[2];
      r.alpha = to_double(f[3]);
      r.decomp = f[4];
      r.param = to_double(f[5]);
      r.trial = to_int(f[6]);
      r.model_seed = std::stoull(f[7]);
      r.decomp_seed = std::stoull(f[8]);
      r.nodes = to_int(f[9]);
      r.removed = to_int(f[10]);
      r.max_component = to_int(f[11]);
      r.lb = to_double(f[12]);
      r.ub = to_double(f[13]);
      r.gap = to_double(f[14]);
      r.exact = parse_opt(f[15]);
      r.h_hat = to_double(f[16]);
      r.h_star = parse_opt(f[17]);
      r.error_logz = parse_opt(f[18]);
      r.error_logz_ub = parse_opt(f[19]);
      r.error_map = parse_opt(f[20]);
      r.ok = to_bool(f[21]);
      r.wall_ms = to_double(f[22]);
      r.note = f[23];
      out.push_back(std::move(r));
    } catch (const InvalidInput& e) {
      throw InvalidInput("trial csv line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::exception&) {
      throw InvalidInput("trial csv line " + std::to_string(line_no) + ": bad field");
    }
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells) {
  out << "alpha,param,trials,mean_gap,mean_error_logz,mean_error_map,all_ok\n";
  for (const CellSummary& c : cells)
    out << format_double(c.alpha) << ',' << format_double(c.param) << ',' << c.trials << ','
        << format_double(c.mean_gap) << ',' << opt(c.mean_error_logz) << ',' << opt(c.mean_error_map)
        << ',' << (c.all_ok ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------
// Bound curves

double removal_eps(DecompAlgorithm alg, double param, int rounds) {
  switch (alg) {
    case DecompAlgorithm::kNone: return 0.0;
    case DecompAlgorithm::kMinor: return std::min(1.0, rounds / param);
    case DecompAlgorithm::kGrid: return 1.0 / param;
    case DecompAlgorithm::kDbDim: return std::min(1.0, 2.0 * param);
  }
  return 0.0;
}

std::vector<BoundRow> bound_curves(Topology topology, int n, DecompAlgorithm alg,
                                   const std::vector<double>& params, int rounds,
                                   PotentialMode mode, const std::vector<double>& alphas) {
  if (topology != Topology::kGrid && topology != Topology::kCrisCross)
    throw InvalidInput("bound_curves: grid or cris-cross topology only");
  if (n < 2) throw InvalidInput("bound_curves: n must be >= 2");
  const double nn = static_cast<double>(n) * n;
  const double grid_edges = 2.0 * n * (n - 1);
  const double diag_edges = topology == Topology::kCrisCross ? 2.0 * (n - 1) * (n - 1) : 0.0;
  std::vector<BoundRow> rows;
  for (double a : alphas) {
    // E|t| for t ~ U[-s, s] is s / 2.
    const double range = mode == PotentialMode::kVaryingInteraction ? a / 2.0 : 0.25;
    for (double p : params) {
      BoundRow r;
      r.alpha = a;
      r.param = p;
      r.eps = removal_eps(alg, p, rounds);
      const double diag_eps = std::min(1.0, 2.0 * r.eps);
      r.bound = range * (r.eps * grid_edges + diag_eps * diag_edges) / nn;
      r.asymptotic = range * (2.0 * r.eps + (diag_edges > 0.0 ? 2.0 * diag_eps : 0.0));
      rows.push_back(r);
    }
  }
  return rows;
}

void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows) {
  out << "alpha,param,eps,bound,asymptotic\n";
  for (const BoundRow& r : rows)
    out << format_double(r.alpha) << ',' << format_double(r.param) << ',' << format_double(r.eps) << ','
        << format_double(r.bound) << ',' << format_double(r.asymptotic) << '\n';
}

// ---------------------------------------------------------------------------
// Free energy

PairwiseMrf homogeneous_grid(int n, const std::vector<double>& phi, const std::vector<double>& psi) {
  if (phi.size() != 2 || psi.size() != 4) throw InvalidInput("homogeneous_grid: need 2 phi and 4 psi values");
  MrfTables t;
  t.graph = gen_grid(n);
  t.alphabet_size = 2;
  for (Node v = 0; v < t.graph.num_nodes(); ++v) t.node_tables.insert(t.node_tables.end(), phi.begin(), phi.end());
  for (int e = 0; e < t.graph.num_edges(); ++e) t.edge_tables.insert(t.edge_tables.end(), psi.begin(), psi.end());
  return PairwiseMrf(std::move(t));
}

std::vector<FreeEnergyRow> free_energy_sequence(const std::vector<double>& phi,
                                                const std::vector<double>& psi,
                                                const std::vector<int>& ns, int k) {
  if (k < 1) throw InvalidInput("free_energy_sequence: k must be >= 1");
  const double max_phi = *std::max_element(phi.begin(), phi.end());
  const double max_psi = *std::max_element(psi.begin(), psi.end());
  std::vector<FreeEnergyRow> rows;
  for (int n : ns) {
    const PairwiseMrf mrf = homogeneous_grid(n, phi, psi);
    FreeEnergyRow r;
    r.n = n;
    const double nn = static_cast<double>(n) * n;
    r.log_z = grid_transfer_log_z(mrf, {n, n, false});
    r.a_n = r.log_z / nn;
    r.lower = nn * std::log(2.0);
    r.upper = nn * (std::log(2.0) + max_phi + 4.0 * max_psi);
    double lb = 0.0;
    double ub = 0.0;
    const int kk = std::min(k, n);  // slabs wider than the grid are the grid itself
    for (int l1 = 0; l1 < kk; ++l1) {
      for (int l2 = 0; l2 < kk; ++l2) {
        const InferenceBounds b = log_partition_bounds(mrf, grid_decomp(n, kk, l1, l2));
        lb += b.log_z_lb;
        ub += b.log_z_ub;
      }
    }
    r.decomp_lb = lb / (kk * kk) / nn;
    r.decomp_ub = ub / (kk * kk) / nn;
    rows.push_back(r);
  }
  return rows;
}

void write_free_energy_csv(std::ostream& out, const std::vector<FreeEnergyRow>& rows) {
  out << "n,log_z,a_n,lower,upper,decomp_lb,decomp_ub\n";
  for (const FreeEnergyRow& r : rows)
    out << r.n << ',' << format_double(r.log_z) << ',' << format_double(r.a_n) << ','
        << format_double(r.lower) << ',' << format_double(r.upper) << ',' << format_double(r.decomp_lb)
        << ',' << format_double(r.decomp_ub) << '\n';
}

}  // namespace locinf
