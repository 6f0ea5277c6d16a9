#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nullcode/codes.hpp"
#include "nullcode/gf.hpp"
#include "nullcode/instances.hpp"
#include "nullcode/rng.hpp"

namespace nullcode {

/// Polynomial hash family: key (c_0, ..., c_{lambda-1}) in F_{2^r}^lambda maps
/// (e, i) to the low `width` bits of sum_j c_j u^j with u = e * n + i.
class HashFamily {
 public:
  // Throws EncodingOverflow when |Sigma| * n > 2^r.
  HashFamily(unsigned r, std::size_t lambda, std::uint64_t alphabet, std::size_t n);
  // lambda = n^2 and the smallest r with 2^r >= |Sigma| n.
  static HashFamily for_code(const CodeSpec& spec);

  unsigned r() const { return field_.degree(); }
  std::size_t lambda() const { return lambda_; }
  std::uint64_t alphabet() const { return alphabet_; }
  std::size_t n() const { return n_; }
  // min(6, r); the bias form is the AND of these bits, so p = 2^-width.
  unsigned width() const { return width_; }
  const FieldCtx& field() const { return field_; }
  std::uint64_t key_bits() const { return static_cast<std::uint64_t>(r()) * lambda_; }

  Elem encode(Symbol e, std::size_t coord) const;

 private:
  FieldCtx field_;
  std::size_t lambda_;
  std::uint64_t alphabet_;
  std::size_t n_;
  unsigned width_;
};

struct HashKey {
  std::vector<Elem> coeffs;
  bool operator==(const HashKey&) const = default;
};

HashKey zero_key(const HashFamily& family);
HashKey random_key(const HashFamily& family, Rng& rng);
// Key with bit b of coefficient j taken from bit j * r + b of `bits`.
HashKey key_from_bits(const HashFamily& family, std::uint64_t bits);

std::uint32_t eval_hash(const HashFamily& family, const HashKey& key, Symbol e, std::size_t coord);
bool eval_hash_bias(const HashFamily& family, const HashKey& key, Symbol e, std::size_t coord);

using HashPoint = std::pair<Symbol, std::size_t>;

// Exact check that the outputs at the given distinct points are jointly
// uniform over all keys (r * lambda <= 24).
bool independence_check(const HashFamily& family, const std::vector<HashPoint>& points);

// Tables H_i(e) xor bias h_k(e, i).
OracleInstance shift_instance(const OracleInstance& inst, const HashFamily& family, const HashKey& key);

/// Fixes a codeword x and solves, over F_2 in the key bits, for hash outputs
/// equal to H_i(x_i) * 1^width on every coordinate, so the shifted oracle
/// vanishes on x.
struct AttackResult {
  std::optional<HashKey> key;
  FoldedWord target;
  std::size_t equations = 0;
  std::size_t unknowns = 0;
  std::size_t rank = 0;
};

AttackResult attack_solve(const HashFamily& family, const CodeSpec& spec, const OracleInstance& inst);

}  // namespace nullcode
