#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "locinf/decomp.hpp"
#include "locinf/exact.hpp"
#include "locinf/inference.hpp"
#include "locinf/mrf.hpp"

namespace locinf {

/// Self-avoiding-walk tree machinery for binary pairwise models.
///
/// All values are in the log (energy) domain. A node clamped to state a has
/// log-potential -infinity at the other state. Clamps come from an Evidence
/// vector (-1 = free); a clamped node is a leaf of every SAW tree it appears
/// in, since conditioning on it separates the walks through it.

enum class LeafMark { kNone, kGreen, kRed };

struct SawNode {
  Node original = 0;
  int parent = -1;  // tree index, -1 at the root
  int depth = 0;
  LeafMark mark = LeafMark::kNone;
};

/// T_SAW(G, root) in BFS order: a child always has a larger index than its
/// parent and siblings appear in ascending order of their original ids.
struct SawTree {
  Node root = 0;
  std::vector<SawNode> nodes;
  std::vector<std::vector<int>> children;

  /// Tree edges, |nodes| - 1.
  std::uint64_t num_edges() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  std::size_t num_marked(LeafMark m) const;
};

/// Max-marginal ratio q(1)/q(0) held as two logs so 0 and infinity are exact.
struct RatioPair {
  double log_num = 0.0;  // log q(1)
  double log_den = 0.0;  // log q(0)

  bool is_zero() const;
  bool is_infinite() const;
  /// log(q1/q0); +-infinity at the extremes.
  double log_ratio() const;
};

/// Equality by cross-difference; finite ratios within `tol` in log space.
bool same_ratio(const RatioPair& a, const RatioPair& b, double tol);

/// Normalized message or belief over a binary state, log domain,
/// log(exp(at[0]) + exp(at[1])) = 0.
struct BinaryMessage {
  double at[2] = {0.0, 0.0};
};

inline constexpr std::uint64_t kDefaultSawCap = std::uint64_t{1} << 22;

/// Node-count bound (n + k - 1) 2^(k+1) on the edges of a SAW tree of a
/// connected graph with n nodes and n - 1 + k edges.
std::uint64_t saw_size_upper(int n, int k);

/// Graph with n - 1 + k edges whose SAW trees all have at least n 2^(k-2)
/// edges: a path 0..n-1 plus {0, n-1} and the chords {1,3}, {3,5}, ...,
/// {2k-3, 2k-1}. Requires 1 <= k < n/2 and n >= 3.
Graph saw_lower_bound_family(int n, int k);

/// Builds T_SAW(G, root) for a binary model. Throws CapExceeded when the
/// tree would have more than `cap` nodes; the message carries the size bound.
SawTree build_saw_tree(const PairwiseMrf& mrf, Node root, const Evidence& evidence = {},
                       std::uint64_t cap = kDefaultSawCap);

/// Leaf-to-root max-product on the tree; returns the root's ratio.
RatioPair saw_max_ratio(const PairwiseMrf& mrf, const SawTree& tree, const Evidence& evidence = {});

/// Convenience: build + sweep.
RatioPair saw_ratio(const PairwiseMrf& mrf, Node v, const Evidence& evidence = {},
                    std::uint64_t cap = kDefaultSawCap);

struct MsgPassOptions {
  Evidence evidence;
  std::uint64_t cap = kDefaultSawCap;  // path sequences per origin
  std::ostream* trace = nullptr;       // one line per emitted sequence
};

struct MsgPassResult {
  std::vector<RatioPair> ratios;
  std::vector<BinaryMessage> beliefs;
  /// Computation sequences emitted on behalf of each origin node.
  std::vector<std::uint64_t> computation_sequences;
  std::uint64_t path_sequences = 0;
};

/// Event-driven simulation of the distributed path / computation sequence
/// schedule. Single-threaded, FIFO delivery.
MsgPassResult msg_pass_mode(const PairwiseMrf& mrf, const MsgPassOptions& options = {});

/// Exact MAP by sequential conditioning: the lowest-id free node is fixed to
/// 1 when its SAW ratio exceeds 1, otherwise to 0, then the next one.
Assignment saw_component_map(const PairwiseMrf& mrf, std::uint64_t cap = kDefaultSawCap);

/// Mode with the SAW solver inside each component.
MapEstimate mode_estimate_saw(const PairwiseMrf& mrf, const EdgeDecomposition& decomp,
                              std::uint64_t cap = kDefaultSawCap);

namespace saw_detail {

/// Log-potential of `v` with clamps and an optional leaf mark applied.
BinaryMessage phi_hat(const PairwiseMrf& mrf, Node v, LeafMark mark, const Evidence& evidence);

/// Message from `from` to its neighbor over edge `e`:
/// m(s) = max_t [psi(t, s) + phi_hat(t) + sum_in in(t)], then normalized.
/// `incoming` must be ordered by ascending sender id.
BinaryMessage send(const PairwiseMrf& mrf, int e, Node from, const BinaryMessage& phi,
                   std::span<const BinaryMessage> incoming);

/// phi_hat(s) + sum_in in(s), normalized.
BinaryMessage belief(const BinaryMessage& phi, std::span<const BinaryMessage> incoming);

}  // namespace saw_detail

}  // namespace locinf
