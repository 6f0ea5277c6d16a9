#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nullcode/codes.hpp"

namespace nullcode {

/// Bias p of an oracle bit, kept exact as num/den. The exponent form 2^-b is
/// remembered so AND-block operations can insist on it.
class Bias {
 public:
  static Bias rational(std::uint64_t num, std::uint64_t den);
  static Bias power_of_two(unsigned exponent);
  // Accepts "1/64", "2^-6" and plain decimals such as "0.25" (when exact in
  // binary with at most 62 fractional bits).
  static Bias parse(const std::string& text);

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  // b when p == 2^-b exactly.
  std::optional<unsigned> exponent() const;
  std::string to_string() const;

  bool operator==(const Bias& o) const { return num_ == o.num_ && den_ == o.den_; }

 private:
  Bias(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {}
  std::uint64_t num_;
  std::uint64_t den_;
};

/// Packed bit table; bit j lives in byte j/8 at position j%8 (LSB first),
/// which is also the hex serialization order.
class BitTable {
 public:
  BitTable() = default;
  explicit BitTable(std::size_t size, bool value = false);

  std::size_t size() const { return size_; }
  bool get(std::size_t j) const { return (bytes_[j >> 3] >> (j & 7)) & 1; }
  void set(std::size_t j, bool v);
  std::size_t count() const;

  std::string to_hex() const;
  static BitTable from_hex(const std::string& hex, std::size_t size);

  bool operator==(const BitTable&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint8_t> bytes_;
};

// AND-block view: entry e of table i is a b-bit block whose AND is H_i(e).
struct UnfoldedTables {
  unsigned block = 0;
  std::vector<std::vector<std::uint16_t>> blocks;

  std::uint16_t all_ones() const { return static_cast<std::uint16_t>((1u << block) - 1); }
  bool operator==(const UnfoldedTables&) const = default;
};

inline constexpr std::uint64_t kDefaultTableBudget = std::uint64_t{1} << 26;

/// The oracle tables H_1..H_n over Sigma for a code.
struct OracleInstance {
  CodeSpec spec;
  Bias p;
  std::uint64_t seed = 0;
  std::vector<BitTable> tables;
  std::optional<UnfoldedTables> unfolded;

  std::size_t n() const { return tables.size(); }
  bool bit(std::size_t i, Symbol e) const { return tables[i].get(static_cast<std::size_t>(e)); }
};

OracleInstance sample_instance(const CodeSpec& spec, const Bias& p, std::uint64_t seed,
                               std::uint64_t budget = kDefaultTableBudget);
// All-zero or all-one tables.
OracleInstance constant_instance(const CodeSpec& spec, bool value);
// Tables drawn as uniform b-bit blocks; the bias tables are their ANDs, so p = 2^-b.
OracleInstance sample_unfolded_instance(const CodeSpec& spec, unsigned block, std::uint64_t seed,
                                        std::uint64_t budget = kDefaultTableBudget);

// Attaches blocks consistent with the bias bits: all-ones over a 1, a uniform
// non-all-ones block over a 0.
OracleInstance expand_and_blocks(const OracleInstance& inst, unsigned block);
// Recomputes the bias tables from the blocks and drops them.
OracleInstance collapse_and_blocks(const OracleInstance& inst);

bool verify(const OracleInstance& inst, const FoldedWord& x);
std::vector<FoldedWord> brute_solve(const OracleInstance& inst,
                                    std::uint64_t budget = kDefaultEnumerationBudget);

/// Alice holds coordinates [0, n/2), Bob [n/2, n). Each side's input is the
/// flat bit string of its tables.
struct Split {
  std::size_t n = 0;
  std::uint64_t alphabet = 0;

  std::size_t half() const { return n / 2; }
  bool is_alice(std::size_t coord) const { return coord < half(); }
  std::size_t flat_length() const { return half() * static_cast<std::size_t>(alphabet); }
  std::size_t flat_index(std::size_t coord, Symbol e) const {
    return (coord - (is_alice(coord) ? 0 : half())) * static_cast<std::size_t>(alphabet) +
           static_cast<std::size_t>(e);
  }
};

Split make_split(const OracleInstance& inst);
// Flat input bits of one side.
BitTable side_input(const OracleInstance& inst, bool alice);

}  // namespace nullcode
