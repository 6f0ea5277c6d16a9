#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nullcode/codes.hpp"
#include "nullcode/instances.hpp"
#include "nullcode/rng.hpp"

namespace nullcode {

// Inputs are N-bit strings (N <= 20) packed with coordinate 1 in bit 0.
using Input = std::uint32_t;
// Sorted, duplicate-free set of inputs.
using InputSet = std::vector<Input>;

inline constexpr unsigned kMaxInputBits = 20;

// A partial assignment: the coordinates in `mask` are fixed to `values`.
struct Cube {
  std::uint32_t mask = 0;
  std::uint32_t values = 0;

  unsigned codim() const;
  bool contains(Input x) const { return (x & mask) == values; }
  bool operator==(const Cube&) const = default;
};

InputSet full_set(unsigned n_bits);
// Coordinates on which every member agrees.
Cube constant_coordinates(const InputSet& set, unsigned n_bits);

// H_inf of the uniform marginal on the coordinates in `coords`.
double min_entropy(const InputSet& set, std::uint32_t coords);
// H_inf(X_I) >= gamma |I| for every nonempty I within `free_coords`.
bool is_dense(const InputSet& set, double gamma, std::uint32_t free_coords);
// Dense on the complement of the cube's fixed coordinates, which must be
// constant on the set.
bool is_subcube_like(const InputSet& set, const Cube& fixed, double gamma, unsigned n_bits);

struct DrpPart {
  InputSet members;
  Cube fixed;
};

// Greedy density-restoring partition (N <= 14). While the residual R is not
// gamma-dense on its non-constant coordinates, peel {x in R : x_I = a} for
// the violating (I, a) with largest |I|, ties broken by the sorted index list
// of I and then by a, both lexicographically.
std::vector<DrpPart> density_restoring_partition(const InputSet& set, double gamma, unsigned n_bits);

struct HuffmanCode {
  std::vector<std::string> words;  // '0'/'1' strings, prefix-free
};

double shannon_entropy(const std::vector<double>& dist);
// Merges the two least likely subtrees; ties go to the smaller symbol index.
HuffmanCode huffman(const std::vector<double>& dist);
double expected_length(const HuffmanCode& code, const std::vector<double>& dist);

enum class Party { Alice, Bob };
const char* party_name(Party p);

// A protocol output; nullopt is the abort symbol.
using Label = std::optional<std::uint64_t>;

/// One message. The cubes describe the fixed coordinates of both players'
/// sets at the node reached after the message.
struct Step {
  Party owner = Party::Alice;
  std::string message;
  Cube alice;
  Cube bob;
};

struct Execution {
  std::vector<Step> steps;
  Label output;

  std::size_t bits() const;
  std::string transcript() const;
};

class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual unsigned input_bits() const = 0;
  virtual Execution execute(Input x, Input y) const = 0;
  // Maximum transcript length in bits.
  virtual std::size_t worst_case_cost() const = 0;
};

/// Deterministic protocol tree with explicit message functions. Internal node
/// v maps each input of its owner to a child index; only inputs in the
/// owner's current set matter.
class ProtocolTree : public Protocol {
 public:
  struct Node {
    Party owner = Party::Alice;
    std::vector<std::uint16_t> message;  // 2^N entries for internal nodes
    std::vector<std::size_t> children;
    Label label;                         // leaves only
  };

  ProtocolTree(unsigned n_bits, std::vector<Node> nodes);

  unsigned input_bits() const override { return n_bits_; }
  Execution execute(Input x, Input y) const override;
  std::size_t worst_case_cost() const override { return cost_; }

  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::size_t v) const { return nodes_.at(v); }
  bool is_leaf(std::size_t v) const { return nodes_.at(v).children.empty(); }
  std::size_t depth(std::size_t v) const { return info_.at(v).depth; }
  const InputSet& alice_set(std::size_t v) const { return info_.at(v).alice; }
  const InputSet& bob_set(std::size_t v) const { return info_.at(v).bob; }
  const Cube& alice_cube(std::size_t v) const { return info_.at(v).alice_cube; }
  const Cube& bob_cube(std::size_t v) const { return info_.at(v).bob_cube; }
  std::size_t leaf_of(Input x, Input y) const;
  std::vector<std::size_t> leaves() const;

  // Message bits spent at an internal node.
  std::size_t message_bits(std::size_t v) const;

 private:
  struct Info {
    std::size_t depth = 0;
    InputSet alice, bob;
    Cube alice_cube, bob_cube;
  };

  unsigned n_bits_;
  std::vector<Node> nodes_;
  std::vector<Info> info_;
  std::size_t cost_ = 0;
};

// Random one-bit-per-round tree. Messages mix single-bit queries, XOR and AND
// of two coordinates, and random truth tables. Leaves are labeled by
// `label_for(alice_set, bob_set)`.
ProtocolTree random_tree(unsigned n_bits, unsigned max_depth, Rng& rng,
                         const std::function<Label(const InputSet&, const InputSet&)>& label_for);

struct TranscriptStats {
  double entropy = 0;          // H of the transcript on uniform inputs
  double expected_length = 0;  // bits
  double expected_rounds = 0;
  std::size_t distinct = 0;
};

// Exact statistics by running every input pair (2N <= 24).
TranscriptStats transcript_stats(const Protocol& protocol);

/// Output of the transformation: node (v, s, t) of the new protocol pairs an
/// original node v with an Alice state s and a Bob state t. States are sets
/// that are gamma-subcube-like with respect to their fixed cube.
class SubcubeLikeProtocol : public Protocol {
 public:
  struct SideState {
    InputSet members;
    Cube fixed;
    std::size_t cost = 0;  // bits this side has sent so far
  };
  // Split of state s at node v for message bit b.
  struct Round {
    HuffmanCode code;
    std::vector<double> dist;
    std::vector<std::size_t> parts;  // state ids, aligned with code words
    std::vector<std::pair<Input, std::uint32_t>> part_of;  // sorted by input
  };

  SubcubeLikeProtocol(std::shared_ptr<const ProtocolTree> tree, double gamma);

  unsigned input_bits() const override { return tree_->input_bits(); }
  Execution execute(Input x, Input y) const override;
  std::size_t worst_case_cost() const override { return cost_; }

  const ProtocolTree& original() const { return *tree_; }
  double gamma() const { return gamma_; }
  const SideState& state(Party side, std::size_t id) const;
  std::size_t state_count(Party side) const;
  const std::vector<std::size_t>& states_at(std::size_t v, Party side) const;
  const std::map<std::pair<std::size_t, std::size_t>, std::array<Round, 2>>& rounds() const { return rounds_; }

 private:
  void build(std::size_t v, const std::vector<std::size_t>& alice, const std::vector<std::size_t>& bob);

  std::shared_ptr<const ProtocolTree> tree_;
  double gamma_;
  std::vector<SideState> alice_states_, bob_states_;
  std::vector<std::vector<std::size_t>> alice_at_, bob_at_;
  // Keyed by (v, state id of the owner).
  std::map<std::pair<std::size_t, std::size_t>, std::array<Round, 2>> rounds_;
  std::size_t cost_ = 0;
};

std::shared_ptr<const SubcubeLikeProtocol> transform_alg3(std::shared_ptr<const ProtocolTree> tree,
                                                          double gamma);

struct TransformReport {
  double entropy = 0;          // H(transcript) on uniform inputs, exact
  double expected_length = 0;  // E |transcript|
  double expected_rounds = 0;  // E d
  std::size_t worst_case_cost = 0;
  std::size_t original_cost = 0;
  bool all_states_subcube_like = false;
  double max_huffman_excess = 0;  // max over rounds of E|C(k)| - H(k); at most 1
  std::size_t alice_states = 0, bob_states = 0;
};

TransformReport analyze_transform(const SubcubeLikeProtocol& p);

/// Each player can check a proposed label against their own input.
struct SideVerifier {
  std::function<bool(Input, std::uint64_t)> alice;
  std::function<bool(Input, std::uint64_t)> bob;
};

/// Aborts with the bottom label once the codimension of the current node
/// exceeds |inner| / epsilon (never when epsilon = 0), and otherwise ends with
/// a verification round in which Alice reports whether the label is valid
/// for her input; Bob checks his side locally.
class CleanedProtocol : public Protocol {
 public:
  CleanedProtocol(std::shared_ptr<const Protocol> inner, double epsilon, SideVerifier verifier);

  unsigned input_bits() const override { return inner_->input_bits(); }
  Execution execute(Input x, Input y) const override;
  std::size_t worst_case_cost() const override { return inner_->worst_case_cost() + 1; }
  double abort_threshold() const { return threshold_; }

 private:
  std::shared_ptr<const Protocol> inner_;
  double epsilon_;
  double threshold_;
  SideVerifier verifier_;
};

/// Search relation for cleanup experiments: label c in [0, labels) is valid
/// iff x_{c mod N} = 0 and y_{(5c + 1) mod N} = 0.
struct IndexRelation {
  unsigned n_bits = 6;
  std::uint64_t labels = 8;

  bool alice_ok(Input x, std::uint64_t c) const { return ((x >> (c % n_bits)) & 1u) == 0; }
  bool bob_ok(Input y, std::uint64_t c) const { return ((y >> ((5 * c + 1) % n_bits)) & 1u) == 0; }
  SideVerifier verifier() const;
  // Label valid on the most pairs of the rectangle.
  Label best_label(const InputSet& alice, const InputSet& bob) const;
  // Fraction of input pairs with a bottom or invalid output (2N <= 20).
  double error_rate(const Protocol& p) const;
};

std::shared_ptr<const CleanedProtocol> cleanup(std::shared_ptr<const Protocol> inner, double epsilon,
                                               SideVerifier verifier);

/// Input layout of a bipartite bNC instance: each side's flat table bits.
struct DangerContext {
  CodeSpec spec;
  Split split;
  std::vector<FoldedWord> codewords;  // enumeration order; labels index this
  std::size_t threshold = 0;          // ceil(zeta n)
  double zeta = 0.4;

  unsigned side_bits() const { return static_cast<unsigned>(split.flat_length()); }
  // Number of coordinates of codeword c whose table bit is fixed.
  std::size_t fixed_count(std::size_t c, const Cube& alice, const Cube& bob) const;
  bool is_solution(std::size_t c, Input x, Input y) const;
};

DangerContext make_danger_context(const CodeSpec& spec, double zeta = 0.4);

// Queries table bits codeword by codeword and outputs the first codeword
// whose bits are all zero; aborts once `budget_bits` would be exceeded.
class BaselineBncProtocol : public Protocol {
 public:
  BaselineBncProtocol(DangerContext ctx, std::size_t budget_bits);

  unsigned input_bits() const override { return ctx_.side_bits(); }
  Execution execute(Input x, Input y) const override;
  std::size_t worst_case_cost() const override { return budget_; }

 private:
  DangerContext ctx_;
  std::size_t budget_;
};

struct DangerRun {
  std::vector<std::vector<std::size_t>> ledger;  // Q_1, ..., Q_d (codeword ids, sorted)
  std::vector<std::uint64_t> list_recover;       // list_recover_count at each node
  bool monotone = true;
  bool counts_consistent = true;
  std::size_t became_dangerous = 0;
  std::size_t dangerous_then_solution = 0;
  Label output;
};

DangerRun danger_run(const Protocol& protocol, const DangerContext& ctx, Input x, Input y);

struct DangerStats {
  std::size_t runs = 0;
  bool monotone = true;
  bool counts_consistent = true;
  std::size_t became_dangerous = 0;
  std::size_t dangerous_then_solution = 0;
  std::size_t max_final_ledger = 0;
  std::size_t correct_outputs = 0;
  double frequency() const {
    return became_dangerous ? static_cast<double>(dangerous_then_solution) / static_cast<double>(became_dangerous) : 0;
  }
};

// Runs on `runs` p-biased inputs, or on every input pair when runs == 0.
DangerStats danger_track(const Protocol& protocol, const DangerContext& ctx, const Bias& p,
                         std::size_t runs, std::uint64_t seed);

}  // namespace nullcode
