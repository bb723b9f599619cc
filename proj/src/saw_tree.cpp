#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "locinf/error.hpp"
#include "locinf/saw.hpp"

namespace locinf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_binary(const PairwiseMrf& mrf, const char* what) {
  if (mrf.alphabet_size() != 2) throw InvalidInput(std::string(what) + ": binary models only");
}

void check_evidence(const PairwiseMrf& mrf, const Evidence& ev) {
  if (ev.empty()) return;
  if (ev.size() != static_cast<std::size_t>(mrf.num_nodes()))
    throw InvalidInput("evidence size does not match the model");
  for (int s : ev)
    if (s < -1 || s > 1) throw InvalidInput("evidence entries must be -1, 0 or 1");
}

bool clamped(const Evidence& ev, Node v) {
  return !ev.empty() && ev[static_cast<std::size_t>(v)] >= 0;
}

}  // namespace

std::size_t SawTree::num_marked(LeafMark m) const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [m](const SawNode& s) { return s.mark == m; }));
}

bool RatioPair::is_zero() const { return log_num == kNegInf && log_den != kNegInf; }
bool RatioPair::is_infinite() const { return log_den == kNegInf && log_num != kNegInf; }

double RatioPair::log_ratio() const {
  if (is_zero()) return kNegInf;
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return log_num - log_den;
}

bool same_ratio(const RatioPair& a, const RatioPair& b, double tol) {
  const bool a_fin = std::isfinite(a.log_num) && std::isfinite(a.log_den);
  const bool b_fin = std::isfinite(b.log_num) && std::isfinite(b.log_den);
  if (a_fin && b_fin) return std::abs(a.log_ratio() - b.log_ratio()) <= tol;
  // q1(a) q0(b) == q1(b) q0(a), exact when an infinity is involved.
  const double lhs = a.log_num + b.log_den;
  const double rhs = b.log_num + a.log_den;
  if (lhs == kNegInf || rhs == kNegInf) return lhs == rhs;
  return std::abs(lhs - rhs) <= tol;
}

std::uint64_t saw_size_upper(int n, int k) {
  if (n < 1 || k < 0) throw InvalidInput("saw_size_upper: need n >= 1 and k >= 0");
  if (k + 1 >= 63) return std::numeric_limits<std::uint64_t>::max();
  const auto base = static_cast<std::uint64_t>(n + k - 1);
  const std::uint64_t pow = std::uint64_t{1} << (k + 1);
  if (base != 0 && pow > std::numeric_limits<std::uint64_t>::max() / base)
    return std::numeric_limits<std::uint64_t>::max();
  return base * pow;
}

Graph saw_lower_bound_family(int n, int k) {
  if (n < 3 || k < 1 || 2 * k >= n)
    throw InvalidInput("saw_lower_bound_family: need n >= 3 and 1 <= k < n/2");
  std::vector<Edge> edges;
  for (Node i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  edges.push_back({0, n - 1});
  for (int j = 1; j < k; ++j) edges.push_back({2 * j - 1, 2 * j + 1});
  return Graph(n, std::move(edges));
}

SawTree build_saw_tree(const PairwiseMrf& mrf, Node root, const Evidence& evidence,
                       std::uint64_t cap) {
  check_binary(mrf, "build_saw_tree");
  check_evidence(mrf, evidence);
  const Graph& g = mrf.graph();
  if (root < 0 || root >= g.num_nodes()) throw InvalidInput("build_saw_tree: bad root");

  SawTree t;
  t.root = root;
  t.nodes.push_back({root, -1, 0, LeafMark::kNone});
  t.children.emplace_back();
  if (clamped(evidence, root)) return t;

  auto refuse = [&] {
    const int excess = g.num_edges() - g.num_nodes() + 1;
    throw CapExceeded("SAW tree from node " + std::to_string(root) + " exceeds " +
                      std::to_string(cap) + " nodes (size bound " +
                      std::to_string(saw_size_upper(g.num_nodes(), std::max(excess, 0))) + ")");
  };

  // Position of each original node on the current walk, as a tree index.
  std::vector<int> on_path(static_cast<std::size_t>(g.num_nodes()), -1);
  std::vector<int> path;
  for (std::size_t head = 0; head < t.nodes.size(); ++head) {
    const SawNode cur = t.nodes[head];
    if (cur.mark != LeafMark::kNone) continue;
    if (head != 0 && clamped(evidence, cur.original)) continue;

    path.clear();
    for (int i = static_cast<int>(head); i >= 0; i = t.nodes[static_cast<std::size_t>(i)].parent)
      path.push_back(i);
    for (int i : path) on_path[static_cast<std::size_t>(t.nodes[static_cast<std::size_t>(i)].original)] = i;

    const Node parent_orig =
        cur.parent < 0 ? -1 : t.nodes[static_cast<std::size_t>(cur.parent)].original;
    for (Node w : g.neighbors(cur.original)) {
      if (w == parent_orig) continue;
      SawNode child{w, static_cast<int>(head), cur.depth + 1, LeafMark::kNone};
      const int at = on_path[static_cast<std::size_t>(w)];
      if (at >= 0) {
        // Cycle w, v1, ..., vk=cur, w. v1 is the walk's successor of w.
        const Node v1 = t.nodes[static_cast<std::size_t>(
                                    path[path.size() - 2 - static_cast<std::size_t>(
                                                               t.nodes[static_cast<std::size_t>(at)].depth)])]
                            .original;
        child.mark = cur.original < v1 ? LeafMark::kGreen : LeafMark::kRed;
      }
      if (t.nodes.size() >= cap) refuse();
      t.children[head].push_back(static_cast<int>(t.nodes.size()));
      t.nodes.push_back(child);
      t.children.emplace_back();
    }
    for (int i : path) on_path[static_cast<std::size_t>(t.nodes[static_cast<std::size_t>(i)].original)] = -1;
  }
  return t;
}

namespace saw_detail {

namespace {

BinaryMessage normalized(double a0, double a1) {
  const double z = log_add_exp(a0, a1);
  if (z == kNegInf) return {{a0, a1}};
  return {{a0 - z, a1 - z}};
}

}  // namespace

BinaryMessage phi_hat(const PairwiseMrf& mrf, Node v, LeafMark mark, const Evidence& evidence) {
  BinaryMessage p{{mrf.phi(v, 0), mrf.phi(v, 1)}};
  if (clamped(evidence, v)) p.at[1 - evidence[static_cast<std::size_t>(v)]] = kNegInf;
  if (mark == LeafMark::kGreen) p.at[0] = kNegInf;
  if (mark == LeafMark::kRed) p.at[1] = kNegInf;
  return p;
}

BinaryMessage send(const PairwiseMrf& mrf, int e, Node from, const BinaryMessage& phi,
                   std::span<const BinaryMessage> incoming) {
  double h[2] = {phi.at[0], phi.at[1]};
  for (const BinaryMessage& m : incoming) {
    h[0] += m.at[0];
    h[1] += m.at[1];
  }
  double out[2];
  for (int s = 0; s < 2; ++s)
    out[s] = std::max(mrf.pair(e, from, 0, s) + h[0], mrf.pair(e, from, 1, s) + h[1]);
  return normalized(out[0], out[1]);
}

BinaryMessage belief(const BinaryMessage& phi, std::span<const BinaryMessage> incoming) {
  double h[2] = {phi.at[0], phi.at[1]};
  for (const BinaryMessage& m : incoming) {
    h[0] += m.at[0];
    h[1] += m.at[1];
  }
  return normalized(h[0], h[1]);
}

}  // namespace saw_detail

RatioPair saw_max_ratio(const PairwiseMrf& mrf, const SawTree& tree, const Evidence& evidence) {
  check_binary(mrf, "saw_max_ratio");
  check_evidence(mrf, evidence);
  const Graph& g = mrf.graph();
  std::vector<BinaryMessage> msg(tree.nodes.size());
  std::vector<BinaryMessage> in;
  for (std::size_t i = tree.nodes.size(); i-- > 1;) {
    const SawNode& s = tree.nodes[i];
    in.clear();
    for (int c : tree.children[i]) in.push_back(msg[static_cast<std::size_t>(c)]);
    const Node parent = tree.nodes[static_cast<std::size_t>(s.parent)].original;
    const int e = *g.edge_index(s.original, parent);
    msg[i] = saw_detail::send(mrf, e, s.original,
                              saw_detail::phi_hat(mrf, s.original, s.mark, evidence), in);
  }
  in.clear();
  for (int c : tree.children[0]) in.push_back(msg[static_cast<std::size_t>(c)]);
  const BinaryMessage b =
      saw_detail::belief(saw_detail::phi_hat(mrf, tree.root, LeafMark::kNone, evidence), in);
  return {b.at[1], b.at[0]};
}

RatioPair saw_ratio(const PairwiseMrf& mrf, Node v, const Evidence& evidence, std::uint64_t cap) {
  return saw_max_ratio(mrf, build_saw_tree(mrf, v, evidence, cap), evidence);
}

Assignment saw_component_map(const PairwiseMrf& mrf, std::uint64_t cap) {
  check_binary(mrf, "saw_component_map");
  Evidence ev(static_cast<std::size_t>(mrf.num_nodes()), -1);
  for (Node v = 0; v < mrf.num_nodes(); ++v) {
    const RatioPair r = saw_ratio(mrf, v, ev, cap);
    ev[static_cast<std::size_t>(v)] = r.log_num > r.log_den ? 1 : 0;
  }
  return ev;
}

MapEstimate mode_estimate_saw(const PairwiseMrf& mrf, const EdgeDecomposition& decomp,
                              std::uint64_t cap) {
  check_binary(mrf, "mode_estimate_saw");
  MapEstimate m;
  m.assignment.assign(static_cast<std::size_t>(mrf.num_nodes()), -1);
  const PairwiseMrf rest = without_edges(mrf, decomp.removed_edges);
  for (const auto& comp : decomp.components) {
    const Assignment x = saw_component_map(induced_mrf(rest, comp), cap);
    for (std::size_t i = 0; i < comp.size(); ++i) m.assignment[static_cast<std::size_t>(comp[i])] = x[i];
  }
  if (std::count(m.assignment.begin(), m.assignment.end(), -1) != 0)
    throw InvalidInput("decomposition does not partition the model's nodes");
  m.energy = energy(mrf, m.assignment);
  m.guarantee_gap = removed_edge_range(mrf, decomp.removed_edges);
  m.removed_edges = decomp.removed_edges;
  return m;
}

}  // namespace locinf
