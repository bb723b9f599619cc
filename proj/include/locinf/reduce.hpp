#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "locinf/graph.hpp"
#include "locinf/mrf.hpp"

namespace locinf {

// Discrete factor model, q(y) proportional to exp(sum_a theta_a(y_a)).
//
// Text format:
//   factors <nvars> <dom_1> ... <dom_nvars>
//   factor <arity> <var ids...> <table...>      (one line per factor)
// Tables are row-major over the listed variables, last variable fastest.

struct Factor {
  std::vector<int> vars;
  std::vector<double> table;
};

struct FactorModel {
  std::vector<int> domains;
  std::vector<Factor> factors;
};

/// Throws InvalidInput on bad arity, repeated variables, wrong table size,
/// non-finite entries or a variable no factor covers.
void validate_factor_model(const FactorModel& model);

/// sum_a theta_a(y_a).
double factor_energy(const FactorModel& model, const std::vector<int>& y);

FactorModel read_factor_model(std::istream& in);
FactorModel read_factor_model_file(const std::string& path);
void write_factor_model(std::ostream& out, const FactorModel& model);

struct MwisLabel {
  int factor = 0;
  std::vector<int> values;  // aligned with the factor's vars
};

/// Conflict graph: one node per (factor, joint value of its variables), an
/// edge whenever two nodes give some shared variable different values.
struct MwisInstance {
  Graph graph;
  std::vector<double> weights;  // c + theta_a(y_a), all >= 1
  std::vector<MwisLabel> labels;
  double c = 0.0;
  std::vector<int> domains;
  std::vector<std::vector<int>> scopes;  // per factor
};

inline constexpr std::uint64_t kDefaultMwisCap = 4096;

/// Throws CapExceeded when the conflict graph would exceed `cap` nodes.
MwisInstance factor_to_mwis(const FactorModel& model, std::uint64_t cap = kDefaultMwisCap);

/// The global assignment encoded by a selection with exactly one node per
/// factor and no conflicts. Throws InvalidInput otherwise.
std::vector<int> mwis_to_assignment(const MwisInstance& inst, const std::vector<Node>& chosen);

/// Binary MRF whose MAPs are exactly the maximum-weight independent sets:
/// phi(1) = w, phi(0) = 0; psi = M except psi(1,1) = 0, M = 1 + sum w.
/// Only MAP is meaningful on the result, not its partition function.
PairwiseMrf mwis_as_binary_mrf(const MwisInstance& inst);

}  // namespace locinf
