#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "locinf/decomp.hpp"
#include "locinf/grid.hpp"
#include "locinf/mrf.hpp"

namespace locinf {

Graph gen_grid(int n);
/// Grid plus both diagonals of every unit cell.
Graph gen_criscross(int n);
/// Random connected-or-not G(n, p) graph.
Graph gen_random(int n, double p, std::uint64_t seed);

enum class PotentialMode { kVaryingInteraction, kVaryingField };
std::string to_string(PotentialMode m);
PotentialMode parse_potential_mode(const std::string& s);

/// Ising-form tables phi(x) = t_i x, psi(x, y) = t_ij x y over {0, 1}.
/// Varying interaction: t_i ~ U[-0.05, 0.05], t_ij ~ U[-alpha, alpha].
/// Varying field: t_ij ~ U[-0.5, 0.5], t_i ~ U[-alpha, alpha].
/// Returned before the shift to non-negative tables.
MrfTables sample_ising(const Graph& g, PotentialMode mode, double alpha, std::uint64_t seed);

/// sample_ising followed by affine_shift.
PairwiseMrf sample_potentials(const Graph& g, PotentialMode mode, double alpha, std::uint64_t seed);

enum class Topology { kGrid, kCrisCross, kLineChords, kRandom };
std::string to_string(Topology t);
Topology parse_topology(const std::string& s);

/// Flat key=value experiment description; see parse_experiment_spec.
struct ExperimentSpec {
  Topology topology = Topology::kGrid;
  int n = 7;
  int chords = 1;        // line+chords family
  double p = 0.3;        // random graphs
  PotentialMode mode = PotentialMode::kVaryingInteraction;
  std::vector<double> alphas{0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
  DecompAlgorithm algorithm = DecompAlgorithm::kMinor;
  int rounds = 3;
  /// Decomposition parameter grid: lambda (minor), k (grid) or eps (dbdim).
  std::vector<double> params{3, 4, 5};
  int K = 0;  // dbdim truncation; 0 picks k_param(eps, 2)
  int trials = 40;
  std::uint64_t seed = 1;
  bool exact = true;
};

/// Keys: topology, n, chords, p, mode, alpha, decomp, rounds, param, K,
/// trials, seed, exact. Lists are comma separated; `a:b:c` expands to the
/// range a, a+c, ..., b. Unknown keys are errors.
ExperimentSpec parse_experiment_spec(std::istream& in);
ExperimentSpec read_experiment_spec_file(const std::string& path);
void validate_experiment_spec(const ExperimentSpec& spec);

struct TrialRecord {
  std::string topology;
  int n = 0;
  std::string mode;
  double alpha = 0.0;
  std::string decomp;
  double param = 0.0;
  int trial = 0;
  std::uint64_t model_seed = 0;
  std::uint64_t decomp_seed = 0;
  int nodes = 0;
  int removed = 0;
  int max_component = 0;
  double lb = 0.0;
  double ub = 0.0;
  double gap = 0.0;
  std::optional<double> exact;  // log Z
  double h_hat = 0.0;
  std::optional<double> h_star;
  /// |lb - exact| / nodes, |ub - exact| / nodes and (h_star - h_hat) / nodes.
  std::optional<double> error_logz;
  std::optional<double> error_logz_ub;
  std::optional<double> error_map;
  bool ok = true;
  std::string note;  // why an oracle did not run, or which check failed
  double wall_ms = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// One record per (alpha, param, trial). The model of a trial depends only
/// on (seed, alpha index, trial), so every parameter value sees the same
/// models.
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec);

struct CellSummary {
  double alpha = 0.0;
  double param = 0.0;
  int trials = 0;
  double mean_gap = 0.0;  // per node
  std::optional<double> mean_error_logz;
  std::optional<double> mean_error_map;
  bool all_ok = true;
};

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records);

extern const char* const kTrialCsvHeader;
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_trials_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells);

/// A-priori expected gap per node, eps * E[psi range] * (weighted edges) / nodes.
struct BoundRow {
  double alpha = 0.0;
  double param = 0.0;
  double eps = 0.0;
  double bound = 0.0;       // at the given n
  double asymptotic = 0.0;  // n -> infinity
};

/// Per-edge removal probability of a decomposition parameter value:
/// r / lambda (minor), 1 / k (grid), min(1, 2 eps) (dbdim).
double removal_eps(DecompAlgorithm alg, double param, int rounds);

/// Cris-cross diagonals are counted twice (a diagonal survives only if both
/// of the grid edges around it do, by the union bound).
std::vector<BoundRow> bound_curves(Topology topology, int n, DecompAlgorithm alg,
                                   const std::vector<double>& params, int rounds,
                                   PotentialMode mode, const std::vector<double>& alphas);
void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows);

struct FreeEnergyRow {
  int n = 0;
  double log_z = 0.0;
  double a_n = 0.0;           // log_z / n^2
  double lower = 0.0;         // n^2 ln 2
  double upper = 0.0;         // n^2 (ln 2 + max phi + 4 max psi)
  double decomp_lb = 0.0;     // grid_decomp(min(k, n)) bounds averaged over all offsets,
  double decomp_ub = 0.0;     // divided by n^2
};

/// Same tables on every node / edge of the n x n grid. phi has 2 entries and
/// psi 4 (row-major), already non-negative.
std::vector<FreeEnergyRow> free_energy_sequence(const std::vector<double>& phi,
                                                const std::vector<double>& psi,
                                                const std::vector<int>& ns, int k = 3);
void write_free_energy_csv(std::ostream& out, const std::vector<FreeEnergyRow>& rows);

/// Homogeneous n x n model built from the tables above.
PairwiseMrf homogeneous_grid(int n, const std::vector<double>& phi, const std::vector<double>& psi);

}  // namespace locinf
