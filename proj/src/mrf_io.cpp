#include "locinf/mrf_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "locinf/error.hpp"

namespace locinf {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

struct LineReader {
  std::istream& in;
  int line_no = 0;

  // Next non-empty line with comments stripped; false at EOF.
  bool next(std::istringstream& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      tokens.clear();
      tokens.str(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput("mrf text line " + std::to_string(line_no) + ": " + what);
  }
};

double parse_double(std::istringstream& tokens, LineReader& r) {
  std::string tok;
  if (!(tokens >> tok)) r.fail("missing value");
  double x = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) r.fail("bad number '" + tok + "'");
  return x;
}

}  // namespace

MrfTables read_mrf_tables(std::istream& in) {
  LineReader r{in};
  std::istringstream tok;
  if (!r.next(tok)) throw InvalidInput("mrf text: empty input");
  std::string kw;
  int n = 0;
  int sigma = 0;
  if (!(tok >> kw >> n >> sigma) || kw != "mrf") r.fail("expected 'mrf <n> <sigma>'");
  if (n < 0 || sigma < 2) r.fail("bad header values");
  const auto s = static_cast<std::size_t>(sigma);

  std::vector<double> node_tables(static_cast<std::size_t>(n) * s, 0.0);
  std::vector<bool> have_node(static_cast<std::size_t>(n), false);
  std::vector<Edge> edges;
  std::vector<std::vector<double>> edge_rows;

  while (r.next(tok)) {
    tok >> kw;
    if (kw == "node") {
      int id = -1;
      if (!(tok >> id) || id < 0 || id >= n) r.fail("bad node id");
      if (have_node[static_cast<std::size_t>(id)]) r.fail("duplicate node " + std::to_string(id));
      have_node[static_cast<std::size_t>(id)] = true;
      for (std::size_t k = 0; k < s; ++k)
        node_tables[static_cast<std::size_t>(id) * s + k] = parse_double(tok, r);
    } else if (kw == "edge") {
      int u = -1;
      int v = -1;
      if (!(tok >> u >> v) || u < 0 || v < 0 || u >= n || v >= n) r.fail("bad edge endpoints");
      if (u >= v) r.fail("edge endpoints must satisfy u < v");
      std::vector<double> row(s * s);
      for (double& x : row) x = parse_double(tok, r);
      edges.push_back({u, v});
      edge_rows.push_back(std::move(row));
    } else {
      r.fail("unknown record '" + kw + "'");
    }
    std::string extra;
    if (tok >> extra) r.fail("trailing token '" + extra + "'");
  }
  for (int v = 0; v < n; ++v)
    if (!have_node[static_cast<std::size_t>(v)]) throw InvalidInput("mrf text: missing node " + std::to_string(v));

  MrfTables t;
  t.alphabet_size = sigma;
  t.node_tables = std::move(node_tables);
  t.graph = Graph(n, edges);
  t.edge_tables.resize(static_cast<std::size_t>(t.graph.num_edges()) * s * s);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const int e = *t.graph.edge_index(edges[i].u, edges[i].v);
    std::copy(edge_rows[i].begin(), edge_rows[i].end(),
              t.edge_tables.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(e) * s * s));
  }
  return t;
}

MrfTables read_mrf_tables_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return read_mrf_tables(in);
}

PairwiseMrf read_mrf(std::istream& in) { return affine_shift(read_mrf_tables(in)).mrf; }

PairwiseMrf read_mrf_file(const std::string& path) {
  return affine_shift(read_mrf_tables_file(path)).mrf;
}

void write_mrf(std::ostream& out, const MrfTables& t) {
  const auto s = static_cast<std::size_t>(t.alphabet_size);
  out << "mrf " << t.graph.num_nodes() << ' ' << t.alphabet_size << '\n';
  for (int v = 0; v < t.graph.num_nodes(); ++v) {
    out << "node " << v;
    for (std::size_t k = 0; k < s; ++k)
      out << ' ' << format_double(t.node_tables[static_cast<std::size_t>(v) * s + k]);
    out << '\n';
  }
  for (int e = 0; e < t.graph.num_edges(); ++e) {
    const Edge& ed = t.graph.edge(e);
    out << "edge " << ed.u << ' ' << ed.v;
    for (std::size_t k = 0; k < s * s; ++k)
      out << ' ' << format_double(t.edge_tables[static_cast<std::size_t>(e) * s * s + k]);
    out << '\n';
  }
}

void write_mrf(std::ostream& out, const PairwiseMrf& mrf) { write_mrf(out, mrf.tables()); }

std::string to_mrf_text(const PairwiseMrf& mrf) {
  std::ostringstream os;
  write_mrf(os, mrf);
  return os.str();
}

}  // namespace locinf
