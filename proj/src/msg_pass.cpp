#include <deque>
#include <map>
#include <ostream>
#include <string>

#include "locinf/error.hpp"
#include "locinf/saw.hpp"

namespace locinf {

namespace {

// A path sequence travels away from its origin; a computation sequence carries
// a message back along the reversed walk.
struct Event {
  bool computation = false;
  Node to = 0;
  std::vector<Node> walk;  // v1..vk; for a computation the sender is vk
  BinaryMessage msg;
};

void print_walk(std::ostream& os, const std::vector<Node>& walk) {
  for (std::size_t i = 0; i < walk.size(); ++i) os << (i ? " " : "") << walk[i];
}

class Simulator {
 public:
  Simulator(const PairwiseMrf& mrf, const MsgPassOptions& opt) : mrf_(mrf), opt_(opt), g_(mrf.graph()) {
    const auto n = static_cast<std::size_t>(g_.num_nodes());
    store_.resize(n);
    result_.ratios.resize(n);
    result_.beliefs.resize(n);
    result_.computation_sequences.assign(n, 0);
    paths_per_origin_.assign(n, 0);
  }

  MsgPassResult run() {
    for (Node v = 0; v < g_.num_nodes(); ++v) {
      if (clamped(v) || g_.degree(v) == 0) {
        finish(v, saw_detail::belief(phi(v, LeafMark::kNone), {}));
        continue;
      }
      for (Node u : g_.neighbors(v)) emit_path({v}, u);
    }
    while (!queue_.empty()) {
      Event ev = std::move(queue_.front());
      queue_.pop_front();
      if (ev.computation)
        on_computation(ev);
      else
        on_path(ev);
    }
    return std::move(result_);
  }

 private:
  bool clamped(Node v) const {
    return !opt_.evidence.empty() && opt_.evidence[static_cast<std::size_t>(v)] >= 0;
  }
  BinaryMessage phi(Node v, LeafMark m) const { return saw_detail::phi_hat(mrf_, v, m, opt_.evidence); }
  int edge(Node a, Node b) const { return *g_.edge_index(a, b); }

  void emit_path(std::vector<Node> walk, Node to) {
    const Node origin = walk.front();
    if (++paths_per_origin_[static_cast<std::size_t>(origin)] > opt_.cap)
      throw CapExceeded("message passing: more than " + std::to_string(opt_.cap) +
                        " path sequences from node " + std::to_string(origin));
    ++result_.path_sequences;
    if (opt_.trace) {
      *opt_.trace << "path ";
      print_walk(*opt_.trace, walk);
      *opt_.trace << " -> " << to << "\n";
    }
    queue_.push_back({false, to, std::move(walk), {}});
  }

  void emit_computation(std::vector<Node> walk, const BinaryMessage& m, Node to) {
    ++result_.computation_sequences[static_cast<std::size_t>(walk.front())];
    if (opt_.trace) {
      *opt_.trace << "comp ";
      print_walk(*opt_.trace, walk);
      *opt_.trace << " -> " << to << " [" << m.at[0] << ", " << m.at[1] << "]\n";
    }
    queue_.push_back({true, to, std::move(walk), m});
  }

  // u = ev.to receives v1..vk with vk its neighbor.
  void on_path(Event& ev) {
    const Node u = ev.to;
    const Node vk = ev.walk.back();
    const int e = edge(u, vk);
    std::size_t at = ev.walk.size();
    for (std::size_t i = 0; i < ev.walk.size(); ++i)
      if (ev.walk[i] == u) at = i;

    LeafMark mark = LeafMark::kNone;
    bool leaf = clamped(u) || g_.degree(u) == 1;
    if (at < ev.walk.size()) {
      // Closes the cycle u, v_{at+1}, ..., vk, u.
      mark = vk < ev.walk[at + 1] ? LeafMark::kGreen : LeafMark::kRed;
      leaf = true;
    }
    ev.walk.push_back(u);
    if (leaf) {
      emit_computation(std::move(ev.walk), saw_detail::send(mrf_, e, u, phi(u, mark), {}), vk);
      return;
    }
    for (Node w : g_.neighbors(u))
      if (w != vk) emit_path(ev.walk, w);
  }

  // u = ev.to receives the message of vk for the walk v1..v_{k-1}.
  void on_computation(Event& ev) {
    const Node u = ev.to;
    const Node sender = ev.walk.back();
    ev.walk.pop_back();
    auto& slot = store_[static_cast<std::size_t>(u)][ev.walk];
    slot[sender] = ev.msg;

    const bool at_origin = ev.walk.size() == 1;
    const Node parent = at_origin ? -1 : ev.walk[ev.walk.size() - 2];
    const auto expected = static_cast<std::size_t>(g_.degree(u) - (at_origin ? 0 : 1));
    if (slot.size() < expected) return;

    std::vector<BinaryMessage> in;
    in.reserve(slot.size());
    for (const auto& [w, m] : slot) in.push_back(m);  // ascending sender id
    if (at_origin) {
      finish(u, saw_detail::belief(phi(u, LeafMark::kNone), in));
    } else {
      const BinaryMessage out = saw_detail::send(mrf_, edge(u, parent), u, phi(u, LeafMark::kNone), in);
      std::vector<Node> walk = ev.walk;
      emit_computation(std::move(walk), out, parent);
    }
    store_[static_cast<std::size_t>(u)].erase(ev.walk);
  }

  void finish(Node v, const BinaryMessage& b) {
    result_.beliefs[static_cast<std::size_t>(v)] = b;
    result_.ratios[static_cast<std::size_t>(v)] = {b.at[1], b.at[0]};
  }

  const PairwiseMrf& mrf_;
  const MsgPassOptions& opt_;
  const Graph& g_;
  std::deque<Event> queue_;
  std::vector<std::map<std::vector<Node>, std::map<Node, BinaryMessage>>> store_;
  std::vector<std::uint64_t> paths_per_origin_;
  MsgPassResult result_;
};

}  // namespace

MsgPassResult msg_pass_mode(const PairwiseMrf& mrf, const MsgPassOptions& options) {
  if (mrf.alphabet_size() != 2) throw InvalidInput("msg_pass_mode: binary models only");
  if (!options.evidence.empty() && options.evidence.size() != static_cast<std::size_t>(mrf.num_nodes()))
    throw InvalidInput("evidence size does not match the model");
  return Simulator(mrf, options).run();
}

}  // namespace locinf
