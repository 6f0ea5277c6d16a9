#include <algorithm>
#include <cmath>
#include <limits>

#include "nullcode/error.hpp"
#include "nullcode/proto.hpp"

namespace nullcode {

SubcubeLikeProtocol::SubcubeLikeProtocol(std::shared_ptr<const ProtocolTree> tree, double gamma)
    : tree_(std::move(tree)), gamma_(gamma) {
  if (!tree_) throw Error(Errc::InvalidArgument, "null protocol tree");
  if (!(gamma > 0 && gamma < 1)) throw Error(Errc::InvalidArgument, "gamma must lie in (0, 1)");
  for (std::size_t v = 0; v < tree_->size(); ++v)
    if (!tree_->is_leaf(v) && tree_->node(v).children.size() != 2)
      throw Error(Errc::InvalidArgument, "the transformation needs one-bit messages");
  alice_at_.resize(tree_->size());
  bob_at_.resize(tree_->size());
  const InputSet all = full_set(tree_->input_bits());
  alice_states_.push_back({all, Cube{}, 0});
  bob_states_.push_back({all, Cube{}, 0});
  build(0, {0}, {0});
  for (std::size_t v : tree_->leaves()) {
    std::size_t a = 0, b = 0;
    for (auto s : alice_at_[v]) a = std::max(a, alice_states_[s].cost);
    for (auto t : bob_at_[v]) b = std::max(b, bob_states_[t].cost);
    cost_ = std::max(cost_, a + b);
  }
}

void SubcubeLikeProtocol::build(std::size_t v, const std::vector<std::size_t>& alice,
                                const std::vector<std::size_t>& bob) {
  alice_at_[v] = alice;
  bob_at_[v] = bob;
  if (tree_->is_leaf(v)) return;
  const auto& node = tree_->node(v);
  const bool alice_speaks = node.owner == Party::Alice;
  auto& states = alice_speaks ? alice_states_ : bob_states_;
  std::array<std::vector<std::size_t>, 2> next;
  for (std::size_t s : alice_speaks ? alice : bob) {
    std::array<Round, 2> rounds;
    std::array<InputSet, 2> split;
    for (Input x : states[s].members) split[node.message[x]].push_back(x);
    for (std::size_t b = 0; b < 2; ++b) {
      if (split[b].empty()) continue;
      auto parts = density_restoring_partition(split[b], gamma_, tree_->input_bits());
      Round& r = rounds[b];
      for (const auto& part : parts)
        r.dist.push_back(static_cast<double>(part.members.size()) / static_cast<double>(split[b].size()));
      r.code = huffman(r.dist);
      const std::size_t base_cost = states[s].cost + 1;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        for (Input x : parts[i].members) r.part_of.emplace_back(x, static_cast<std::uint32_t>(i));
        const std::size_t id = states.size();
        states.push_back({std::move(parts[i].members), parts[i].fixed, base_cost + r.code.words[i].size()});
        r.parts.push_back(id);
        next[b].push_back(id);
      }
      std::sort(r.part_of.begin(), r.part_of.end());
    }
    rounds_.emplace(std::make_pair(v, s), std::move(rounds));
  }
  for (std::size_t b = 0; b < 2; ++b) {
    if (alice_speaks)
      build(node.children[b], next[b], bob);
    else
      build(node.children[b], alice, next[b]);
  }
}

const SubcubeLikeProtocol::SideState& SubcubeLikeProtocol::state(Party side, std::size_t id) const {
  return (side == Party::Alice ? alice_states_ : bob_states_).at(id);
}

std::size_t SubcubeLikeProtocol::state_count(Party side) const {
  return (side == Party::Alice ? alice_states_ : bob_states_).size();
}

const std::vector<std::size_t>& SubcubeLikeProtocol::states_at(std::size_t v, Party side) const {
  return (side == Party::Alice ? alice_at_ : bob_at_).at(v);
}

Execution SubcubeLikeProtocol::execute(Input x, Input y) const {
  const std::size_t domain = std::size_t{1} << input_bits();
  if (x >= domain || y >= domain) throw Error(Errc::DomainMismatch, "input outside {0,1}^N");
  Execution run;
  std::size_t v = 0, s = 0, t = 0;
  while (!tree_->is_leaf(v)) {
    const auto& node = tree_->node(v);
    const bool alice_speaks = node.owner == Party::Alice;
    const Input in = alice_speaks ? x : y;
    std::size_t& own = alice_speaks ? s : t;
    const std::size_t b = node.message[in];
    const Round& r = rounds_.at({v, own})[b];
    const auto it = std::lower_bound(r.part_of.begin(), r.part_of.end(), std::make_pair(in, std::uint32_t{0}));
    if (it == r.part_of.end() || it->first != in) throw Error(Errc::InvalidArgument, "input left its state");
    own = r.parts[it->second];
    Step step;
    step.owner = node.owner;
    step.message = (b ? "1" : "0") + r.code.words[it->second];
    step.alice = alice_states_[s].fixed;
    step.bob = bob_states_[t].fixed;
    run.steps.push_back(std::move(step));
    v = node.children[b];
  }
  run.output = tree_->node(v).label;
  return run;
}

std::shared_ptr<const SubcubeLikeProtocol> transform_alg3(std::shared_ptr<const ProtocolTree> tree,
                                                          double gamma) {
  return std::make_shared<const SubcubeLikeProtocol>(std::move(tree), gamma);
}

TransformReport analyze_transform(const SubcubeLikeProtocol& p) {
  const ProtocolTree& tree = p.original();
  const unsigned n = tree.input_bits();
  const double domain = std::ldexp(1.0, static_cast<int>(n));
  TransformReport rep;
  rep.worst_case_cost = p.worst_case_cost();
  rep.original_cost = tree.worst_case_cost();
  rep.alice_states = p.state_count(Party::Alice);
  rep.bob_states = p.state_count(Party::Bob);
  // A transcript is a leaf together with one final state per side, and the
  // probability of (leaf, s, t) factors as p_s p_t.
  for (std::size_t v : tree.leaves()) {
    double pa = 0, la = 0, ha = 0, pb = 0, lb = 0, hb = 0;
    for (auto s : p.states_at(v, Party::Alice)) {
      const auto& st = p.state(Party::Alice, s);
      const double q = static_cast<double>(st.members.size()) / domain;
      pa += q;
      la += q * static_cast<double>(st.cost);
      ha -= q * std::log2(q);
    }
    for (auto t : p.states_at(v, Party::Bob)) {
      const auto& st = p.state(Party::Bob, t);
      const double q = static_cast<double>(st.members.size()) / domain;
      pb += q;
      lb += q * static_cast<double>(st.cost);
      hb -= q * std::log2(q);
    }
    rep.entropy += pb * ha + pa * hb;
    rep.expected_length += pb * la + pa * lb;
    rep.expected_rounds += pa * pb * static_cast<double>(tree.depth(v));
  }
  rep.all_states_subcube_like = true;
  for (Party side : {Party::Alice, Party::Bob})
    for (std::size_t id = 0; id < p.state_count(side); ++id) {
      const auto& st = p.state(side, id);
      if (!is_subcube_like(st.members, st.fixed, p.gamma(), n)) rep.all_states_subcube_like = false;
    }
  for (const auto& [key, rounds] : p.rounds())
    for (const auto& r : rounds)
      if (!r.dist.empty())
        rep.max_huffman_excess =
            std::max(rep.max_huffman_excess, expected_length(r.code, r.dist) - shannon_entropy(r.dist));
  return rep;
}

CleanedProtocol::CleanedProtocol(std::shared_ptr<const Protocol> inner, double epsilon, SideVerifier verifier)
    : inner_(std::move(inner)), epsilon_(epsilon), verifier_(std::move(verifier)) {
  if (!inner_) throw Error(Errc::InvalidArgument, "null protocol");
  if (!(epsilon >= 0 && epsilon <= 1)) throw Error(Errc::InvalidArgument, "epsilon must lie in [0, 1]");
  if (!verifier_.alice || !verifier_.bob) throw Error(Errc::InvalidArgument, "missing verifier");
  threshold_ = epsilon_ > 0 ? static_cast<double>(inner_->worst_case_cost()) / epsilon_
                            : std::numeric_limits<double>::infinity();
}

Execution CleanedProtocol::execute(Input x, Input y) const {
  Execution inner = inner_->execute(x, y);
  Execution run;
  for (auto& step : inner.steps) {
    const double codim = static_cast<double>(step.alice.codim() + step.bob.codim());
    run.steps.push_back(std::move(step));
    if (codim > threshold_) return run;  // aborted with the bottom label
  }
  if (!inner.output) return run;
  const bool alice_ok = verifier_.alice(x, *inner.output);
  Step check;
  check.owner = Party::Alice;
  check.message = alice_ok ? "1" : "0";
  if (!run.steps.empty()) {
    check.alice = run.steps.back().alice;
    check.bob = run.steps.back().bob;
  }
  run.steps.push_back(check);
  if (alice_ok && verifier_.bob(y, *inner.output)) run.output = inner.output;
  return run;
}

std::shared_ptr<const CleanedProtocol> cleanup(std::shared_ptr<const Protocol> inner, double epsilon,
                                               SideVerifier verifier) {
  return std::make_shared<const CleanedProtocol>(std::move(inner), epsilon, std::move(verifier));
}

SideVerifier IndexRelation::verifier() const {
  return {[*this](Input x, std::uint64_t c) { return alice_ok(x, c); },
          [*this](Input y, std::uint64_t c) { return bob_ok(y, c); }};
}

Label IndexRelation::best_label(const InputSet& alice, const InputSet& bob) const {
  std::uint64_t best = 0, best_hits = 0;
  for (std::uint64_t c = 0; c < labels; ++c) {
    std::uint64_t ca = 0, cb = 0;
    for (Input x : alice) ca += alice_ok(x, c);
    for (Input y : bob) cb += bob_ok(y, c);
    if (ca * cb > best_hits) {
      best_hits = ca * cb;
      best = c;
    }
  }
  return best;
}

double IndexRelation::error_rate(const Protocol& p) const {
  if (2 * p.input_bits() > 20) throw Error(Errc::BudgetExceeded, "exact error rate needs 2N <= 20");
  const Input domain = Input{1} << p.input_bits();
  std::uint64_t bad = 0;
  for (Input x = 0; x < domain; ++x)
    for (Input y = 0; y < domain; ++y) {
      const Label l = p.execute(x, y).output;
      if (!l || !alice_ok(x, *l) || !bob_ok(y, *l)) ++bad;
    }
  return static_cast<double>(bad) / (static_cast<double>(domain) * domain);
}

}  // namespace nullcode
