#include "locinf/reduce.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "locinf/error.hpp"
#include "locinf/mrf_io.hpp"

namespace locinf {

namespace {

std::size_t table_size(const FactorModel& m, const Factor& f) {
  std::size_t s = 1;
  for (int v : f.vars) s *= static_cast<std::size_t>(m.domains[static_cast<std::size_t>(v)]);
  return s;
}

std::size_t local_index(const FactorModel& m, const Factor& f, const std::vector<int>& y) {
  std::size_t idx = 0;
  for (int v : f.vars)
    idx = idx * static_cast<std::size_t>(m.domains[static_cast<std::size_t>(v)]) +
          static_cast<std::size_t>(y[static_cast<std::size_t>(v)]);
  return idx;
}

[[noreturn]] void bad(int line, const std::string& what) {
  throw InvalidInput("factor text line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_token(std::istringstream& in, int line) {
  std::string tok;
  if (!(in >> tok)) bad(line, "missing value");
  T x{};
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) bad(line, "bad number '" + tok + "'");
  return x;
}

}  // namespace

void validate_factor_model(const FactorModel& m) {
  if (m.domains.empty()) throw InvalidInput("factor model: no variables");
  for (int d : m.domains)
    if (d < 1) throw InvalidInput("factor model: domain sizes must be >= 1");
  std::vector<bool> covered(m.domains.size(), false);
  for (const Factor& f : m.factors) {
    if (f.vars.empty()) throw InvalidInput("factor model: empty factor");
    for (int v : f.vars) {
      if (v < 0 || static_cast<std::size_t>(v) >= m.domains.size())
        throw InvalidInput("factor model: bad variable id " + std::to_string(v));
      covered[static_cast<std::size_t>(v)] = true;
    }
    auto sorted = f.vars;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidInput("factor model: repeated variable in a factor");
    if (f.table.size() != table_size(m, f)) throw InvalidInput("factor model: table size mismatch");
    for (double x : f.table)
      if (!std::isfinite(x)) throw InvalidInput("factor model: non-finite table entry");
  }
  for (std::size_t v = 0; v < covered.size(); ++v)
    if (!covered[v]) throw InvalidInput("factor model: variable " + std::to_string(v) + " in no factor");
}

double factor_energy(const FactorModel& m, const std::vector<int>& y) {
  if (y.size() != m.domains.size()) throw InvalidInput("factor_energy: assignment size mismatch");
  double h = 0.0;
  for (const Factor& f : m.factors) h += f.table[local_index(m, f, y)];
  return h;
}

FactorModel read_factor_model(std::istream& in) {
  FactorModel m;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tok(line);
    std::string kw;
    if (!(tok >> kw)) continue;
    if (!header) {
      if (kw != "factors") bad(line_no, "expected 'factors'");
      const int n = parse_token<int>(tok, line_no);
      if (n < 1) bad(line_no, "need at least one variable");
      for (int i = 0; i < n; ++i) m.domains.push_back(parse_token<int>(tok, line_no));
      header = true;
    } else {
      if (kw != "factor") bad(line_no, "expected 'factor'");
      Factor f;
      const int arity = parse_token<int>(tok, line_no);
      if (arity < 1) bad(line_no, "arity must be >= 1");
      std::size_t size = 1;
      for (int i = 0; i < arity; ++i) {
        const int v = parse_token<int>(tok, line_no);
        if (v < 0 || static_cast<std::size_t>(v) >= m.domains.size()) bad(line_no, "bad variable id");
        f.vars.push_back(v);
        size *= static_cast<std::size_t>(m.domains[static_cast<std::size_t>(v)]);
      }
      for (std::size_t i = 0; i < size; ++i) f.table.push_back(parse_token<double>(tok, line_no));
      std::string extra;
      if (tok >> extra) bad(line_no, "trailing token '" + extra + "'");
      m.factors.push_back(std::move(f));
    }
  }
  if (!header) throw InvalidInput("factor text: empty input");
  validate_factor_model(m);
  return m;
}

FactorModel read_factor_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return read_factor_model(in);
}

void write_factor_model(std::ostream& out, const FactorModel& m) {
  out << "factors " << m.domains.size();
  for (int d : m.domains) out << ' ' << d;
  out << '\n';
  for (const Factor& f : m.factors) {
    out << "factor " << f.vars.size();
    for (int v : f.vars) out << ' ' << v;
    for (double x : f.table) out << ' ' << format_double(x);
    out << '\n';
  }
}

MwisInstance factor_to_mwis(const FactorModel& m, std::uint64_t cap) {
  validate_factor_model(m);
  std::uint64_t total = 0;
  double lowest = 0.0;
  for (const Factor& f : m.factors) {
    total += table_size(m, f);
    for (double x : f.table) lowest = std::min(lowest, x);
  }
  if (total > cap)
    throw CapExceeded("conflict graph of " + std::to_string(total) + " nodes exceeds cap " +
                      std::to_string(cap));

  MwisInstance inst;
  inst.c = 1.0 - lowest;
  inst.domains = m.domains;
  for (int a = 0; a < static_cast<int>(m.factors.size()); ++a) {
    const Factor& f = m.factors[static_cast<std::size_t>(a)];
    inst.scopes.push_back(f.vars);
    std::vector<int> vals(f.vars.size(), 0);
    for (double theta : f.table) {
      inst.labels.push_back({a, vals});
      inst.weights.push_back(inst.c + theta);
      for (std::size_t j = vals.size(); j-- > 0;) {
        if (++vals[j] < m.domains[static_cast<std::size_t>(f.vars[j])]) break;
        vals[j] = 0;
      }
    }
  }

  auto conflict = [&](const MwisLabel& x, const MwisLabel& y) {
    const auto& sx = inst.scopes[static_cast<std::size_t>(x.factor)];
    const auto& sy = inst.scopes[static_cast<std::size_t>(y.factor)];
    for (std::size_t i = 0; i < sx.size(); ++i)
      for (std::size_t j = 0; j < sy.size(); ++j)
        if (sx[i] == sy[j] && x.values[i] != y.values[j]) return true;
    return false;
  };
  std::vector<Edge> edges;
  const int n = static_cast<int>(inst.labels.size());
  for (Node u = 0; u < n; ++u)
    for (Node v = u + 1; v < n; ++v)
      if (conflict(inst.labels[static_cast<std::size_t>(u)], inst.labels[static_cast<std::size_t>(v)]))
        edges.push_back({u, v});
  inst.graph = Graph(n, std::move(edges));
  return inst;
}

std::vector<int> mwis_to_assignment(const MwisInstance& inst, const std::vector<Node>& chosen) {
  const int n = inst.graph.num_nodes();
  std::vector<int> per_factor(inst.scopes.size(), 0);
  for (Node u : chosen) {
    if (u < 0 || u >= n) throw InvalidInput("selection: bad node id " + std::to_string(u));
    ++per_factor[static_cast<std::size_t>(inst.labels[static_cast<std::size_t>(u)].factor)];
  }
  for (std::size_t a = 0; a < per_factor.size(); ++a)
    if (per_factor[a] != 1)
      throw InvalidInput("selection: factor " + std::to_string(a) + " has " +
                         std::to_string(per_factor[a]) + " chosen nodes, expected 1");
  for (std::size_t i = 0; i < chosen.size(); ++i)
    for (std::size_t j = i + 1; j < chosen.size(); ++j)
      if (inst.graph.has_edge(chosen[i], chosen[j]))
        throw InvalidInput("selection: nodes " + std::to_string(chosen[i]) + " and " +
                           std::to_string(chosen[j]) + " are inconsistent");

  std::vector<int> y(inst.domains.size(), -1);
  for (Node u : chosen) {
    const MwisLabel& l = inst.labels[static_cast<std::size_t>(u)];
    const auto& scope = inst.scopes[static_cast<std::size_t>(l.factor)];
    for (std::size_t i = 0; i < scope.size(); ++i) y[static_cast<std::size_t>(scope[i])] = l.values[i];
  }
  if (std::count(y.begin(), y.end(), -1) != 0) throw InvalidInput("selection leaves a variable unset");
  return y;
}

PairwiseMrf mwis_as_binary_mrf(const MwisInstance& inst) {
  MrfTables t;
  t.graph = inst.graph;
  t.alphabet_size = 2;
  double big = 1.0;
  for (double w : inst.weights) {
    t.node_tables.push_back(0.0);
    t.node_tables.push_back(w);
    big += w;
  }
  for (int e = 0; e < inst.graph.num_edges(); ++e) t.edge_tables.insert(t.edge_tables.end(), {big, big, big, 0.0});
  return PairwiseMrf(std::move(t));
}

}  // namespace locinf
