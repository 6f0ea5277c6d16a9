#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nullcode/codes.hpp"
#include "nullcode/instances.hpp"

namespace nullcode {

using Amp = std::complex<double>;

// Nonzero-amplitude budget for simulated states; NULLCODE_BUDGET overrides.
std::uint64_t state_budget();

/// How basis strings are packed into 64-bit keys. A register holds `symbols`
/// symbols of Sigma = F_q^m; each symbol occupies m*s bits laid out like the
/// Symbol rank (coordinate 1 most significant), and symbol 1 is the most
/// significant symbol. In a two-register state the first register sits above
/// the second.
struct RegisterLayout {
  unsigned digit_bits = 1;          // s, with q = 2^s
  unsigned digits_per_symbol = 1;   // m
  std::size_t symbols = 1;          // n

  unsigned symbol_bits() const { return digit_bits * digits_per_symbol; }
  unsigned register_bits() const { return static_cast<unsigned>(symbol_bits() * symbols); }
  bool operator==(const RegisterLayout&) const = default;
};

RegisterLayout layout_for(const CodeSpec& spec);

std::uint64_t pack(const RegisterLayout& layout, const FoldedWord& z);
FoldedWord unpack(const RegisterLayout& layout, std::uint64_t key);

class SparseState {
 public:
  using Map = std::unordered_map<std::uint64_t, Amp>;

  SparseState() : SparseState(RegisterLayout{}, 1) {}
  SparseState(RegisterLayout layout, unsigned registers);

  const RegisterLayout& layout() const { return layout_; }
  unsigned registers() const { return registers_; }
  const Map& amplitudes() const { return amps_; }
  std::size_t support() const { return amps_.size(); }

  Amp amplitude(std::uint64_t key) const;
  void add(std::uint64_t key, Amp a) { amps_[key] += a; }
  double norm_squared() const;
  void normalize();
  // Drops amplitudes with magnitude below tol.
  void prune(double tol = 1e-14);
  void check_budget(std::uint64_t budget) const;

  std::uint64_t register_value(std::uint64_t key, unsigned reg) const;
  std::uint64_t join(std::uint64_t first, std::uint64_t second) const;

 private:
  RegisterLayout layout_;
  unsigned registers_;
  Map amps_;
};

// Dense q x q Fourier matrix with entries (-1)^Tr(x z) / sqrt(q); row index z,
// column index x. Characteristic 2 only, so it is real and self-inverse.
std::vector<std::vector<double>> qft_matrix(const FieldCtx& field);

// QFT over Sigma^n on one register: the F_q transform on every digit. It is
// its own inverse.
SparseState apply_qft(const SparseState& state, const FieldCtx& field, unsigned reg,
                      std::uint64_t budget = state_budget());

SparseState prepare_phi(const OracleInstance& inst, std::size_t coord);
SparseState prepare_psi(const CodeSpec& spec, std::uint64_t budget = state_budget());

// Concatenates single-register states symbol-wise (tensor product).
SparseState tensor_symbols(const std::vector<SparseState>& parts,
                           std::uint64_t budget = state_budget());
// Two-register state |a>|b>.
SparseState tensor_pair(const SparseState& a, const SparseState& b,
                        std::uint64_t budget = state_budget());

// F : Sigma^n -> Sigma^n; nullopt is read as the zero word.
using DecodeFn = std::function<std::optional<FoldedWord>(const FoldedWord&)>;
DecodeFn decoder_fn(const DualDecoder& decoder);

// |x>|e> -> |x>|x+e>
SparseState apply_add(const SparseState& joint);
// |a>|z> -> |a - F(z)>|z>
SparseState apply_decode(const SparseState& joint, const DecodeFn& decode);
SparseState apply_add_decode(const SparseState& joint, const DecodeFn& decode);

// Outcome distribution of measuring one register, sorted by outcome.
std::vector<std::pair<std::uint64_t, double>> measure_register(const SparseState& state, unsigned reg);

double l2_distance(const SparseState& a, const SparseState& b);

/// Which pairs (x, e) count as GOOD; everything else is BAD.
struct GoodBadSpec {
  std::function<bool(const FoldedWord& x, const FoldedWord& e)> good;
};

// GOOD = C-perp x {e : symbol weight <= (p + eps) n}.
GoodBadSpec symbol_weight_goodbad(const CodeSpec& spec, double p, double epsilon);
// GOOD = C-perp x {e : unfolded weight <= radius}.
GoodBadSpec unfolded_weight_goodbad(const CodeSpec& spec, std::size_t radius);
// The largest admissible set {(x, e) : F(x + e) = x}.
GoodBadSpec decoder_goodbad(DecodeFn decode);

// Checks F(x + e) = x for every GOOD pair with x in C-perp and any e.
bool good_set_sound(const CodeSpec& spec, const DecodeFn& decode, const GoodBadSpec& goodbad,
                    std::uint64_t budget = state_budget());

struct Lemma51Result {
  double epsilon = 0;
  double delta = 0;
  double l2_distance = 0;
  double bound = 0;         // sqrt(epsilon) + sqrt(delta)
  double tv_distance = 0;   // between second-register outcome distributions
  double ideal_norm = 0;
  SparseState ideal;
  SparseState actual;
};

Lemma51Result lemma51_pipeline(const CodeSpec& spec, const OracleInstance& inst,
                               const DecodeFn& decode, const GoodBadSpec& goodbad,
                               std::uint64_t budget = state_budget());

/// Quantum messages of the simultaneous-message protocol: each party sends
/// one single-symbol state per coordinate it owns.
struct SmpMessage {
  std::vector<SparseState> states;
};

SmpMessage alice_stage(const OracleInstance& inst);
SmpMessage bob_stage(const OracleInstance& inst);

struct Alg1Result {
  std::vector<std::pair<FoldedWord, double>> distribution;  // measured z, probability
  double success_probability = 0;                           // filled by run_alg1
};

// Charlie only sees the code, the decoder and the two messages.
Alg1Result charlie_stage(const CodeSpec& spec, const DecodeFn& decode, const SmpMessage& from_alice,
                         const SmpMessage& from_bob, std::uint64_t budget = state_budget());

Alg1Result run_alg1(const OracleInstance& inst, const DecodeFn& decode,
                    std::uint64_t budget = state_budget());

struct Claim66Result {
  double mean_w0_sq = 0;           // empty T_i contributes 0
  double se_w0_sq = 0;             // 0 in exact mode
  double mean_w0_sq_nonempty = 0;  // conditioned on T_i nonempty
  double prob_empty = 0;
  std::vector<double> per_element_means;  // indexed by symbol rank
  std::vector<double> per_element_se;
  double max_nonzero_z = 0;  // largest pairwise |difference| / combined SE among e != 0
  bool exact = false;
};

// Statistics of |W_i(e)|^2 for a single p-biased table over Sigma = F_q^m
// with |Sigma| = sigma_size. trials = 0 asks for exact enumeration.
Claim66Result claim66_stats(const FieldCtx& field, std::uint64_t sigma_size, const Bias& p,
                            std::uint64_t trials, std::uint64_t seed = 0);

// Max |W^H(e) - prod_i W_i(e_i)| over e, from the full QFT of |phi>.
double product_law_error(const OracleInstance& inst, std::uint64_t budget = state_budget());

}  // namespace nullcode
