#pragma once

#include <iosfwd>
#include <string>

#include "locinf/mrf.hpp"

namespace locinf {

// MRF text format v1. Line oriented, '#' starts a comment:
//
//   mrf <n> <sigma>
//   node <id> <phi_0> ... <phi_{sigma-1}>                     (n lines)
//   edge <u> <v> <psi_00> <psi_01> ... <psi_{(s-1)(s-1)}>       (one per edge)
//
// Edge rows are row-major in (x_u, x_v) with u < v. Values are written with
// 17 significant digits so they read back bit-identical.

/// Parses the tables without the non-negativity check, so files holding raw
/// (possibly negative) potentials can be shifted afterwards.
MrfTables read_mrf_tables(std::istream& in);
MrfTables read_mrf_tables_file(const std::string& path);

/// Reads and shifts to non-negative tables in one step.
PairwiseMrf read_mrf(std::istream& in);
PairwiseMrf read_mrf_file(const std::string& path);

void write_mrf(std::ostream& out, const MrfTables& tables);
void write_mrf(std::ostream& out, const PairwiseMrf& mrf);
std::string to_mrf_text(const PairwiseMrf& mrf);

/// %.17g-style decimal; always reads back bit-identical.
std::string format_double(double x);

}  // namespace locinf
