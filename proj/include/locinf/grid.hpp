#pragma once

#include <optional>

#include "locinf/graph.hpp"

namespace locinf {

/// Row-major lattice layout: node (row, col) has id row * cols + col.
/// X is the column coordinate and Y the row coordinate.
struct GridShape {
  int rows = 0;
  int cols = 0;
  bool criscross = false;  // both diagonals of every unit cell present

  Node id(int row, int col) const { return row * cols + col; }
  int row_of(Node v) const { return v / cols; }
  int col_of(Node v) const { return v % cols; }
  int num_nodes() const { return rows * cols; }
};

Graph make_lattice(const GridShape& shape);

/// Grid subgraph of a cris-cross layout (diagonals dropped).
inline GridShape without_diagonals(GridShape s) {
  s.criscross = false;
  return s;
}

/// The rows x cols layout (rows <= cols, grid or cris-cross) that g is
/// exactly, if any.
std::optional<GridShape> infer_lattice_shape(const Graph& g);

}  // namespace locinf
