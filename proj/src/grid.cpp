#include "locinf/grid.hpp"

#include "locinf/error.hpp"

namespace locinf {

Graph make_lattice(const GridShape& s) {
  if (s.rows < 1 || s.cols < 1) throw InvalidInput("lattice: rows and cols must be >= 1");
  std::vector<Edge> edges;
  for (int r = 0; r < s.rows; ++r) {
    for (int c = 0; c < s.cols; ++c) {
      if (c + 1 < s.cols) edges.push_back({s.id(r, c), s.id(r, c + 1)});
      if (r + 1 < s.rows) edges.push_back({s.id(r, c), s.id(r + 1, c)});
      if (s.criscross && r + 1 < s.rows && c + 1 < s.cols) {
        edges.push_back({s.id(r, c), s.id(r + 1, c + 1)});
        edges.push_back({s.id(r, c + 1), s.id(r + 1, c)});
      }
    }
  }
  return Graph(s.num_nodes(), std::move(edges));
}

std::optional<GridShape> infer_lattice_shape(const Graph& g) {
  const int n = g.num_nodes();
  for (int rows = 1; rows * rows <= n; ++rows) {
    if (n % rows != 0) continue;
    for (bool cc : {false, true}) {
      const GridShape s{rows, n / rows, cc};
      if (make_lattice(s) == g) return s;
    }
  }
  return std::nullopt;
}

}  // namespace locinf
