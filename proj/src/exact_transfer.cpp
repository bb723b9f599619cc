#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "locinf/error.hpp"
#include "locinf/exact.hpp"

namespace locinf {

namespace {

// A lattice viewed as `lines` consecutive lines of `width` nodes each; every
// edge lies inside a line or between consecutive lines.
struct Sweep {
  int width = 0;
  int lines = 0;
  std::vector<Node> node;  // node[line * width + pos]

  struct Link {
    int pos_a;  // position in the earlier (or same) line
    int pos_b;
    int edge;
    Node a;  // node at pos_a
  };
  std::vector<std::vector<Link>> inner;  // per line
  std::vector<std::vector<Link>> cross;  // per line, links to line + 1
};

Sweep make_sweep(const PairwiseMrf& mrf, const GridShape& shape, std::uint64_t max_states) {
  const Graph& g = mrf.graph();
  if (!(g == make_lattice(shape)))
    throw UnsupportedTopology("transfer matrix: graph is not the declared " +
                              std::to_string(shape.rows) + "x" + std::to_string(shape.cols) +
                              (shape.criscross ? " cris-cross" : " grid"));
  Sweep sw;
  const bool by_columns = shape.rows <= shape.cols;
  sw.width = by_columns ? shape.rows : shape.cols;
  sw.lines = by_columns ? shape.cols : shape.rows;
  long double states = 1.0L;
  for (int i = 0; i < sw.width; ++i) states *= mrf.alphabet_size();
  if (states > static_cast<long double>(max_states))
    throw CapExceeded("transfer matrix: " + std::to_string(mrf.alphabet_size()) + "^" +
                      std::to_string(sw.width) + " line states exceed cap " +
                      std::to_string(max_states));

  sw.node.resize(static_cast<std::size_t>(sw.width * sw.lines));
  std::vector<int> line_of(static_cast<std::size_t>(g.num_nodes()));
  std::vector<int> pos_of(static_cast<std::size_t>(g.num_nodes()));
  for (int l = 0; l < sw.lines; ++l) {
    for (int p = 0; p < sw.width; ++p) {
      const Node v = by_columns ? shape.id(p, l) : shape.id(l, p);
      sw.node[static_cast<std::size_t>(l * sw.width + p)] = v;
      line_of[static_cast<std::size_t>(v)] = l;
      pos_of[static_cast<std::size_t>(v)] = p;
    }
  }
  sw.inner.resize(static_cast<std::size_t>(sw.lines));
  sw.cross.resize(static_cast<std::size_t>(sw.lines));
  for (int e = 0; e < g.num_edges(); ++e) {
    Node a = g.edge(e).u;
    Node b = g.edge(e).v;
    if (line_of[static_cast<std::size_t>(a)] > line_of[static_cast<std::size_t>(b)]) std::swap(a, b);
    const int la = line_of[static_cast<std::size_t>(a)];
    const Sweep::Link link{pos_of[static_cast<std::size_t>(a)], pos_of[static_cast<std::size_t>(b)], e, a};
    if (la == line_of[static_cast<std::size_t>(b)])
      sw.inner[static_cast<std::size_t>(la)].push_back(link);
    else
      sw.cross[static_cast<std::size_t>(la)].push_back(link);
  }
  return sw;
}

// Digit p of a line state, position 0 most significant.
struct StateCodec {
  int sigma;
  int width;
  std::vector<std::vector<int>> digits;  // digits[state][pos]

  StateCodec(int s, int w) : sigma(s), width(w) {
    std::size_t count = 1;
    for (int i = 0; i < w; ++i) count *= static_cast<std::size_t>(s);
    digits.assign(count, std::vector<int>(static_cast<std::size_t>(w)));
    for (std::size_t st = 0; st < count; ++st) {
      std::size_t x = st;
      for (int p = w - 1; p >= 0; --p) {
        digits[st][static_cast<std::size_t>(p)] = static_cast<int>(x % static_cast<std::size_t>(s));
        x /= static_cast<std::size_t>(s);
      }
    }
  }
  std::size_t count() const { return digits.size(); }
};

std::vector<double> line_weights(const PairwiseMrf& mrf, const Sweep& sw, const StateCodec& c, int l) {
  std::vector<double> w(c.count(), 0.0);
  for (std::size_t st = 0; st < c.count(); ++st) {
    const auto& d = c.digits[st];
    double h = 0.0;
    for (int p = 0; p < sw.width; ++p)
      h += mrf.phi(sw.node[static_cast<std::size_t>(l * sw.width + p)], d[static_cast<std::size_t>(p)]);
    for (const auto& k : sw.inner[static_cast<std::size_t>(l)])
      h += mrf.pair(k.edge, k.a, d[static_cast<std::size_t>(k.pos_a)], d[static_cast<std::size_t>(k.pos_b)]);
    w[st] = h;
  }
  return w;
}

double cross_weight(const PairwiseMrf& mrf, const std::vector<Sweep::Link>& links,
                    const std::vector<int>& da, const std::vector<int>& db) {
  double h = 0.0;
  for (const auto& k : links)
    h += mrf.pair(k.edge, k.a, da[static_cast<std::size_t>(k.pos_a)], db[static_cast<std::size_t>(k.pos_b)]);
  return h;
}

}  // namespace

double grid_transfer_log_z(const PairwiseMrf& mrf, const GridShape& shape, std::uint64_t max_states) {
  const Sweep sw = make_sweep(mrf, shape, max_states);
  const StateCodec codec(mrf.alphabet_size(), sw.width);
  const std::size_t S = codec.count();
  std::vector<double> alpha = line_weights(mrf, sw, codec, 0);
  std::vector<double> trans(S);
  for (int l = 0; l + 1 < sw.lines; ++l) {
    const auto w = line_weights(mrf, sw, codec, l + 1);
    const auto& links = sw.cross[static_cast<std::size_t>(l)];
    std::vector<double> next(S);
    for (std::size_t t = 0; t < S; ++t) {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < S; ++s) {
        trans[s] = alpha[s] + cross_weight(mrf, links, codec.digits[s], codec.digits[t]);
        m = std::max(m, trans[s]);
      }
      double acc = 0.0;
      for (std::size_t s = 0; s < S; ++s) acc += std::exp(trans[s] - m);
      next[t] = w[t] + m + std::log(acc);
    }
    alpha = std::move(next);
  }
  const double m = *std::max_element(alpha.begin(), alpha.end());
  double acc = 0.0;
  for (double a : alpha) acc += std::exp(a - m);
  return m + std::log(acc);
}

MapResult grid_transfer_map(const PairwiseMrf& mrf, const GridShape& shape, std::uint64_t max_states) {
  const Sweep sw = make_sweep(mrf, shape, max_states);
  const StateCodec codec(mrf.alphabet_size(), sw.width);
  const std::size_t S = codec.count();
  std::vector<double> best = line_weights(mrf, sw, codec, 0);
  std::vector<std::vector<std::size_t>> back(static_cast<std::size_t>(sw.lines));
  for (int l = 0; l + 1 < sw.lines; ++l) {
    const auto w = line_weights(mrf, sw, codec, l + 1);
    const auto& links = sw.cross[static_cast<std::size_t>(l)];
    std::vector<double> next(S);
    auto& bp = back[static_cast<std::size_t>(l) + 1];
    bp.assign(S, 0);
    for (std::size_t t = 0; t < S; ++t) {
      double m = -std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t s = 0; s < S; ++s) {
        const double h = best[s] + cross_weight(mrf, links, codec.digits[s], codec.digits[t]);
        if (h > m) {
          m = h;
          arg = s;
        }
      }
      next[t] = w[t] + m;
      bp[t] = arg;
    }
    best = std::move(next);
  }
  std::size_t st = static_cast<std::size_t>(std::max_element(best.begin(), best.end()) - best.begin());
  MapResult r;
  r.assignment.assign(static_cast<std::size_t>(mrf.num_nodes()), 0);
  for (int l = sw.lines - 1; l >= 0; --l) {
    for (int p = 0; p < sw.width; ++p)
      r.assignment[static_cast<std::size_t>(sw.node[static_cast<std::size_t>(l * sw.width + p)])] =
          codec.digits[st][static_cast<std::size_t>(p)];
    if (l > 0) st = back[static_cast<std::size_t>(l)][st];
  }
  r.energy = energy(mrf, r.assignment);
  return r;
}

}  // namespace locinf
