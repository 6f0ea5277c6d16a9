#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "nullcode/error.hpp"
#include "nullcode/proto.hpp"

namespace nullcode {

const char* party_name(Party p) { return p == Party::Alice ? "alice" : "bob"; }

std::size_t Execution::bits() const {
  std::size_t b = 0;
  for (const auto& s : steps) b += s.message.size();
  return b;
}

std::string Execution::transcript() const {
  std::string t;
  for (const auto& s : steps) t += s.message;
  return t;
}

ProtocolTree::ProtocolTree(unsigned n_bits, std::vector<Node> nodes) : n_bits_(n_bits), nodes_(std::move(nodes)) {
  if (n_bits_ == 0 || n_bits_ > kMaxInputBits) throw Error(Errc::InvalidArgument, "input bits must lie in [1, 20]");
  if (nodes_.empty()) throw Error(Errc::InvalidArgument, "protocol tree has no nodes");
  const std::size_t domain = std::size_t{1} << n_bits_;
  info_.assign(nodes_.size(), {});
  std::vector<bool> seen(nodes_.size(), false);
  info_[0].alice = full_set(n_bits_);
  info_[0].bob = info_[0].alice;
  std::vector<std::size_t> stack{0};
  std::vector<std::size_t> cost(nodes_.size(), 0);
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    Info& in = info_[v];
    in.alice_cube = constant_coordinates(in.alice, n_bits_);
    in.bob_cube = constant_coordinates(in.bob, n_bits_);
    const Node& node = nodes_[v];
    if (node.children.empty()) {
      cost_ = std::max(cost_, cost[v]);
      continue;
    }
    if (node.message.size() != domain)
      throw Error(Errc::InvalidArgument, "message table of node " + std::to_string(v) + " has the wrong size");
    if (node.children.size() > 65536) throw Error(Errc::InvalidArgument, "too many children");
    const InputSet& owned = node.owner == Party::Alice ? in.alice : in.bob;
    std::vector<InputSet> split(node.children.size());
    for (Input x : owned) {
      if (node.message[x] >= node.children.size())
        throw Error(Errc::InvalidArgument, "message of node " + std::to_string(v) + " names a missing child");
      split[node.message[x]].push_back(x);
    }
    for (std::size_t c = 0; c < node.children.size(); ++c) {
      const std::size_t child = node.children[c];
      if (child >= nodes_.size() || seen[child])
        throw Error(Errc::InvalidArgument, "children do not form a tree");
      seen[child] = true;
      if (split[c].empty()) throw Error(Errc::InvalidArgument, "unreachable child " + std::to_string(child));
      Info& ci = info_[child];
      ci.depth = in.depth + 1;
      ci.alice = node.owner == Party::Alice ? std::move(split[c]) : in.alice;
      ci.bob = node.owner == Party::Bob ? std::move(split[c]) : in.bob;
      cost[child] = cost[v] + message_bits(v);
      stack.push_back(child);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw Error(Errc::InvalidArgument, "protocol tree has unreachable nodes");
}

std::size_t ProtocolTree::message_bits(std::size_t v) const {
  const auto k = nodes_.at(v).children.size();
  return k <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(k - 1));
}

std::size_t ProtocolTree::leaf_of(Input x, Input y) const {
  std::size_t v = 0;
  while (!is_leaf(v)) {
    const Node& node = nodes_[v];
    v = node.children.at(node.message.at(node.owner == Party::Alice ? x : y));
  }
  return v;
}

std::vector<std::size_t> ProtocolTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < nodes_.size(); ++v)
    if (is_leaf(v)) out.push_back(v);
  return out;
}

Execution ProtocolTree::execute(Input x, Input y) const {
  const std::size_t domain = std::size_t{1} << n_bits_;
  if (x >= domain || y >= domain) throw Error(Errc::DomainMismatch, "input outside {0,1}^N");
  Execution run;
  std::size_t v = 0;
  while (!is_leaf(v)) {
    const Node& node = nodes_[v];
    const std::size_t c = node.message[node.owner == Party::Alice ? x : y];
    Step step;
    step.owner = node.owner;
    const std::size_t width = message_bits(v);
    for (std::size_t j = width; j-- > 0;) step.message.push_back((c >> j) & 1 ? '1' : '0');
    v = node.children.at(c);
    step.alice = info_[v].alice_cube;
    step.bob = info_[v].bob_cube;
    run.steps.push_back(std::move(step));
  }
  run.output = nodes_[v].label;
  return run;
}

ProtocolTree random_tree(unsigned n_bits, unsigned max_depth, Rng& rng,
                         const std::function<Label(const InputSet&, const InputSet&)>& label_for) {
  if (n_bits == 0 || n_bits > 16) throw Error(Errc::InvalidArgument, "random trees use 1..16 input bits");
  const std::size_t domain = std::size_t{1} << n_bits;
  std::vector<ProtocolTree::Node> nodes;
  auto coord = [&] { return static_cast<unsigned>(rng() % n_bits); };
  // Depth-first so that every child index exceeds its parent.
  std::function<std::size_t(unsigned)> grow = [&](unsigned depth) -> std::size_t {
    const std::size_t id = nodes.size();
    nodes.emplace_back();
    const bool leaf = depth == max_depth || (depth > 0 && rng() % 100 < 15);
    if (leaf) return id;
    ProtocolTree::Node node;
    node.owner = rng() % 2 ? Party::Bob : Party::Alice;
    node.message.resize(domain);
    const unsigned kind = static_cast<unsigned>(rng() % 4);
    const unsigned i = coord(), j = coord();
    for (std::size_t x = 0; x < domain; ++x) {
      const unsigned xi = (x >> i) & 1u, xj = (x >> j) & 1u;
      unsigned b = 0;
      switch (kind) {
        case 0: b = xi; break;
        case 1: b = xi ^ xj; break;
        case 2: b = xi & xj; break;
        default: b = static_cast<unsigned>(rng() & 1); break;
      }
      node.message[x] = static_cast<std::uint16_t>(b);
    }
    nodes[id] = std::move(node);
    // Index rather than hold a reference: recursion reallocates the vector.
    const std::size_t c0 = grow(depth + 1);
    const std::size_t c1 = grow(depth + 1);
    nodes[id].children = {c0, c1};
    return id;
  };
  grow(0);

  // A message constant on the owner's current set would leave a child
  // unreachable; collapse such nodes onto the reachable child.
  std::vector<InputSet> alice(nodes.size()), bob(nodes.size());
  alice[0] = full_set(n_bits);
  bob[0] = alice[0];
  std::vector<ProtocolTree::Node> out;
  std::function<void(std::size_t, const InputSet&, const InputSet&)> emit =
      [&](std::size_t v, const InputSet& a, const InputSet& b) {
        const std::size_t id = out.size();
        out.emplace_back();
        ProtocolTree::Node node = nodes[v];
        if (node.children.empty()) {
          node.label = label_for(a, b);
          out[id] = std::move(node);
          return;
        }
        const InputSet& owned = node.owner == Party::Alice ? a : b;
        std::array<InputSet, 2> split;
        for (Input x : owned) split[node.message[x]].push_back(x);
        if (split[0].empty() || split[1].empty()) {
          out.pop_back();
          const std::size_t only = split[0].empty() ? 1 : 0;
          emit(node.children[only], a, b);
          return;
        }
        std::array<std::size_t, 2> kids{};
        for (std::size_t c = 0; c < 2; ++c) {
          kids[c] = out.size();
          if (node.owner == Party::Alice)
            emit(node.children[c], split[c], b);
          else
            emit(node.children[c], a, split[c]);
        }
        node.children = {kids[0], kids[1]};
        out[id] = std::move(node);
      };
  emit(0, alice[0], bob[0]);
  return ProtocolTree(n_bits, std::move(out));
}

TranscriptStats transcript_stats(const Protocol& protocol) {
  const unsigned n = protocol.input_bits();
  if (2 * n > 20) throw Error(Errc::BudgetExceeded, "exact transcript statistics need 2N <= 20");
  const std::size_t domain = std::size_t{1} << n;
  std::unordered_map<std::string, std::uint64_t> counts;
  double length = 0, rounds = 0;
  for (std::size_t x = 0; x < domain; ++x)
    for (std::size_t y = 0; y < domain; ++y) {
      const Execution run = protocol.execute(static_cast<Input>(x), static_cast<Input>(y));
      ++counts[run.transcript()];
      length += static_cast<double>(run.bits());
      rounds += static_cast<double>(run.steps.size());
    }
  const double total = static_cast<double>(domain * domain);
  TranscriptStats s;
  s.distinct = counts.size();
  s.expected_length = length / total;
  s.expected_rounds = rounds / total;
  for (const auto& [t, c] : counts) {
    const double p = static_cast<double>(c) / total;
    s.entropy -= p * std::log2(p);
  }
  return s;
}

}  // namespace nullcode
