#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nullcode/gf.hpp"
#include "nullcode/linalg.hpp"

namespace nullcode {

// A word of the unfolded code, one F_q symbol per coordinate.
using Word = Vec;
// An element of Sigma = F_q^m stored as its rank: the m base-q digits packed
// with the digit of coordinate 1 most significant. Addition in Sigma is XOR.
using Symbol = std::uint64_t;
using FoldedWord = std::vector<Symbol>;

enum class CodeKind { GrsFolded, GenericLinear };

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 22;

/// A linear code over F_q of length N, folded into n = N/m symbols of
/// Sigma = F_q^m.
///
/// GrsFolded codes evaluate polynomials of degree <= k at gamma^0, ...,
/// gamma^(N-1) (all of F_q^*, so N = q - 1) and scale coordinate i by v_i.
/// GenericLinear codes are spanned by the rows of an explicit generator
/// matrix.
class CodeSpec {
 public:
  static CodeSpec grs_folded(const FieldCtx& field, Elem gamma, int degree, unsigned folding,
                             Vec multipliers = {});
  static CodeSpec generic_linear(const FieldCtx& field, Mat genmat, std::size_t length,
                                 unsigned folding);

  CodeKind kind() const { return impl_->kind; }
  const FieldCtx& field() const { return impl_->field; }
  Elem gamma() const { return impl_->gamma; }
  // Polynomial degree bound k (GrsFolded only; -1 for generic codes).
  int degree() const { return impl_->degree; }
  std::size_t length() const { return impl_->length; }
  unsigned folding() const { return impl_->folding; }
  std::size_t folded_length() const { return impl_->length / impl_->folding; }
  const Vec& multipliers() const { return impl_->multipliers; }
  const Mat& generator_matrix() const { return impl_->genmat; }
  const Echelon& echelon() const { return impl_->echelon; }
  std::size_t dimension() const { return impl_->echelon.rank(); }

  Elem evaluation_point(std::size_t i) const { return impl_->points.at(i); }
  unsigned symbol_bits() const { return impl_->folding * impl_->field.degree(); }
  // |Sigma| = q^m; throws BudgetExceeded when it does not fit in 63 bits.
  std::uint64_t alphabet_size() const;
  // |C| = q^dim when it fits in 63 bits.
  std::optional<std::uint64_t> size() const;

  bool contains(const Word& w) const;
  bool contains(const FoldedWord& w) const;

 private:
  struct Impl {
    CodeKind kind = CodeKind::GenericLinear;
    FieldCtx field;
    Elem gamma = 1;
    int degree = -1;
    std::size_t length = 0;
    unsigned folding = 1;
    Vec multipliers;
    Vec points;
    Mat genmat;
    Echelon echelon;
  };
  explicit CodeSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

// Preset with n = 2^t - 1, q = 2^(2t), N = q - 1, m = 2^t + 1, k = floor(0.1 N).
// t = 1 is degenerate (k = 0); a warning is written to *warning when given.
CodeSpec paper_preset(int t, std::string* warning = nullptr);

// Self-dual [8,4] extended Hamming code over F_2, folded with m = 2 into
// n = 4 symbols of Sigma = F_2^2.
CodeSpec toy_selfdual();

Word encode_unfolded(const CodeSpec& spec, const Vec& message);
FoldedWord encode(const CodeSpec& spec, const Vec& message);

FoldedWord fold(const CodeSpec& spec, const Word& x);
Word unfold(const CodeSpec& spec, const FoldedWord& z);

std::size_t hamming_weight(const Word& w);
std::size_t hamming_weight(const FoldedWord& w);
std::size_t hamming_distance(const Word& a, const Word& b);

// Dual code. For GrsFolded codes this is the folded GRS code of degree
// N - k - 2 whose multipliers come from a null-space computation
// (cross-checked against v'_i = gamma^i / v_i).
CodeSpec dual(const CodeSpec& spec);

// True when both describe the same subspace with the same folding.
bool same_code(const CodeSpec& a, const CodeSpec& b);

void for_each_codeword(const CodeSpec& spec, const std::function<void(const Word&)>& fn,
                       std::uint64_t budget = kDefaultEnumerationBudget);
std::vector<Word> enumerate_codewords(const CodeSpec& spec,
                                      std::uint64_t budget = kDefaultEnumerationBudget);

// Minimum distance: N - k for GrsFolded, enumeration for generic codes.
std::size_t minimum_distance(const CodeSpec& spec, std::uint64_t budget = kDefaultEnumerationBudget);
std::size_t unique_decoding_radius(const CodeSpec& spec,
                                   std::uint64_t budget = kDefaultEnumerationBudget);

// Unique decoding of a GrsFolded code up to floor((N - k - 1) / 2) errors.
std::optional<Word> berlekamp_welch(const CodeSpec& spec, const Word& z);

enum class DecodePath { Auto, Exhaustive, BerlekampWelch };

// All codewords within unfolded Hamming distance `radius` of z, sorted.
std::vector<Word> list_decode(const CodeSpec& spec, const Word& z, std::size_t radius,
                              DecodePath path = DecodePath::Auto,
                              std::uint64_t budget = kDefaultEnumerationBudget);

struct DecoderParams {
  double p = 0;
  double epsilon = 0.01;
  std::size_t radius_unfolded = 0;  // floor((p + epsilon) N)
};

// Validates that the radius stays inside the unique-decoding radius of the dual.
DecoderParams make_decoder_params(const CodeSpec& spec, double p, double epsilon = 0.01);

// Decoder for C^perp: unfold, decode, accept the unique candidate within
// radius_unfolded, fold. nullopt plays the role of the "bottom" output.
class DualDecoder {
 public:
  DualDecoder(const CodeSpec& spec, DecoderParams params);

  std::optional<Word> decode_unfolded(const Word& z) const;
  std::optional<FoldedWord> operator()(const FoldedWord& z) const;

  const CodeSpec& dual_code() const { return dual_; }
  const DecoderParams& params() const { return params_; }

 private:
  CodeSpec dual_;
  DecoderParams params_;
};

std::optional<FoldedWord> dual_decode(const CodeSpec& spec, const DecoderParams& params,
                                      const FoldedWord& z);

struct ListRecoveryParams {
  double zeta = 0.4;
  std::size_t ell = 0;
  double list_bound = 0;
};

// Number of codewords with x_i in sets[i] for at least zeta * n coordinates.
// Each set must be sorted.
std::uint64_t list_recover_count(const CodeSpec& spec, const std::vector<std::vector<Symbol>>& sets,
                                 double zeta, std::uint64_t budget = kDefaultEnumerationBudget);

// ceil(zeta * n) with a small tolerance for representation error.
std::size_t agreement_threshold(double zeta, std::size_t n);

struct LrCheck {
  bool ineq1 = false;
  bool ineq2 = false;
  double lhs1 = 0, rhs1 = 0;
  double lhs2 = 0, rhs2 = 0;
  long double list_bound = 0;  // q^s
};

// Evaluates the two sufficient conditions for (zeta, ell, q^s)
// list-recoverability of the m-folded RS code.
LrCheck lr_param_check(double N, double m, double k, double ell, double s, double r, double zeta,
                       double q);

}  // namespace nullcode
