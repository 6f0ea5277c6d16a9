#include "nullcode/instances.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "nullcode/error.hpp"
#include "nullcode/rng.hpp"

namespace nullcode {

namespace {

constexpr std::uint64_t kExpandStream = std::uint64_t{1} << 32;

std::uint64_t checked_alphabet(const CodeSpec& spec, std::uint64_t budget) {
  const std::uint64_t sigma = spec.alphabet_size();
  if (sigma > budget || spec.folded_length() * sigma > budget)
    throw Error(Errc::BudgetExceeded, "oracle tables exceed the table budget");
  return sigma;
}

}  // namespace

Bias Bias::rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw Error(Errc::DivisionByZero, "bias denominator is zero");
  if (num > den) throw Error(Errc::InvalidArgument, "bias exceeds 1");
  const std::uint64_t g = std::gcd(num, den);
  return num == 0 ? Bias(0, 1) : Bias(num / g, den / g);
}

Bias Bias::power_of_two(unsigned exponent) {
  if (exponent > 63) throw Error(Errc::InvalidArgument, "bias exponent too large");
  return Bias(1, std::uint64_t{1} << exponent);
}

Bias Bias::parse(const std::string& text) {
  try {
    if (text.rfind("2^-", 0) == 0) return power_of_two(static_cast<unsigned>(std::stoul(text.substr(3))));
    if (const auto slash = text.find('/'); slash != std::string::npos)
      return rational(std::stoull(text.substr(0, slash)), std::stoull(text.substr(slash + 1)));
    std::size_t used = 0;
    const double d = std::stod(text, &used);
    if (used != text.size() || !(d >= 0 && d <= 1)) throw Error(Errc::ParseError, "bad bias: " + text);
    for (unsigned j = 0; j <= 62; ++j) {
      const double scaled = std::ldexp(d, static_cast<int>(j));
      if (scaled == std::floor(scaled)) return rational(static_cast<std::uint64_t>(scaled), std::uint64_t{1} << j);
    }
  } catch (const std::logic_error&) {
  }
  throw Error(Errc::ParseError, "bad bias: " + text);
}

std::optional<unsigned> Bias::exponent() const {
  if (num_ != 1 || !std::has_single_bit(den_)) return std::nullopt;
  return static_cast<unsigned>(std::countr_zero(den_));
}

std::string Bias::to_string() const {
  if (auto b = exponent(); b && *b > 0) return "2^-" + std::to_string(*b);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

BitTable::BitTable(std::size_t size, bool value)
    : size_(size), bytes_((size + 7) / 8, value ? 0xff : 0) {
  if (value && size % 8 != 0) bytes_.back() = static_cast<std::uint8_t>((1u << (size % 8)) - 1);
}

void BitTable::set(std::size_t j, bool v) {
  const auto mask = static_cast<std::uint8_t>(1u << (j & 7));
  if (v)
    bytes_[j >> 3] |= mask;
  else
    bytes_[j >> 3] &= static_cast<std::uint8_t>(~mask);
}

std::size_t BitTable::count() const {
  std::size_t c = 0;
  for (auto b : bytes_) c += static_cast<std::size_t>(std::popcount(b));
  return c;
}

std::string BitTable::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (auto b : bytes_) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

BitTable BitTable::from_hex(const std::string& hex, std::size_t size) {
  BitTable t(size);
  if (hex.size() != t.bytes_.size() * 2) throw Error(Errc::ParseError, "hex table has the wrong length");
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw Error(Errc::ParseError, "non-hex character in table");
  };
  for (std::size_t i = 0; i < t.bytes_.size(); ++i)
    t.bytes_[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  if (size % 8 != 0 && (t.bytes_.back() >> (size % 8)) != 0)
    throw Error(Errc::ParseError, "padding bits of hex table are not zero");
  return t;
}

OracleInstance sample_instance(const CodeSpec& spec, const Bias& p, std::uint64_t seed,
                               std::uint64_t budget) {
  const std::uint64_t sigma = checked_alphabet(spec, budget);
  OracleInstance inst{spec, p, seed, {}, std::nullopt};
  const unsigned __int128 threshold = static_cast<unsigned __int128>(p.num()) << 64;
  for (std::size_t i = 0; i < spec.folded_length(); ++i) {
    Rng rng = make_rng(seed, i);
    BitTable t(static_cast<std::size_t>(sigma));
    // u / 2^64 < num / den, evaluated exactly.
    for (std::size_t e = 0; e < sigma; ++e)
      t.set(e, static_cast<unsigned __int128>(rng()) * p.den() < threshold);
    inst.tables.push_back(std::move(t));
  }
  return inst;
}

OracleInstance constant_instance(const CodeSpec& spec, bool value) {
  const std::uint64_t sigma = checked_alphabet(spec, kDefaultTableBudget);
  OracleInstance inst{spec, Bias::rational(value ? 1 : 0, 1), 0, {}, std::nullopt};
  inst.tables.assign(spec.folded_length(), BitTable(static_cast<std::size_t>(sigma), value));
  return inst;
}

OracleInstance sample_unfolded_instance(const CodeSpec& spec, unsigned block, std::uint64_t seed,
                                        std::uint64_t budget) {
  if (block == 0 || block > 16) throw Error(Errc::InvalidArgument, "AND block size must lie in [1, 16]");
  const std::uint64_t sigma = checked_alphabet(spec, budget);
  OracleInstance inst{spec, Bias::power_of_two(block), seed, {}, UnfoldedTables{block, {}}};
  const std::uint16_t ones = inst.unfolded->all_ones();
  for (std::size_t i = 0; i < spec.folded_length(); ++i) {
    Rng rng = make_rng(seed, i);
    std::vector<std::uint16_t> blocks(static_cast<std::size_t>(sigma));
    BitTable t(static_cast<std::size_t>(sigma));
    for (std::size_t e = 0; e < sigma; ++e) {
      blocks[e] = static_cast<std::uint16_t>(rng() & ones);
      t.set(e, blocks[e] == ones);
    }
    inst.tables.push_back(std::move(t));
    inst.unfolded->blocks.push_back(std::move(blocks));
  }
  return inst;
}

OracleInstance expand_and_blocks(const OracleInstance& inst, unsigned block) {
  if (inst.p.exponent() != block)
    throw Error(Errc::BiasNotPowerOfTwo, "AND blocks need p = 2^-" + std::to_string(block));
  if (block == 0 || block > 16) throw Error(Errc::InvalidArgument, "AND block size must lie in [1, 16]");
  OracleInstance out = inst;
  out.unfolded = UnfoldedTables{block, {}};
  const std::uint16_t ones = out.unfolded->all_ones();
  for (std::size_t i = 0; i < inst.n(); ++i) {
    Rng rng = make_rng(inst.seed, kExpandStream + i);
    std::vector<std::uint16_t> blocks(inst.tables[i].size());
    for (std::size_t e = 0; e < blocks.size(); ++e) {
      if (inst.tables[i].get(e)) {
        blocks[e] = ones;
        continue;
      }
      std::uint16_t b;
      do {
        b = static_cast<std::uint16_t>(rng() & ones);
      } while (b == ones);
      blocks[e] = b;
    }
    out.unfolded->blocks.push_back(std::move(blocks));
  }
  return out;
}

OracleInstance collapse_and_blocks(const OracleInstance& inst) {
  if (!inst.unfolded) throw Error(Errc::InvalidArgument, "instance has no AND blocks");
  OracleInstance out = inst;
  const std::uint16_t ones = inst.unfolded->all_ones();
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const auto& blocks = inst.unfolded->blocks[i];
    for (std::size_t e = 0; e < blocks.size(); ++e) out.tables[i].set(e, blocks[e] == ones);
  }
  out.unfolded.reset();
  return out;
}

bool verify(const OracleInstance& inst, const FoldedWord& x) {
  if (x.size() != inst.n()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= inst.tables[i].size() || inst.bit(i, x[i])) return false;
  }
  return inst.spec.contains(x);
}

std::vector<FoldedWord> brute_solve(const OracleInstance& inst, std::uint64_t budget) {
  std::vector<FoldedWord> out;
  for_each_codeword(inst.spec, [&](const Word& c) {
    FoldedWord z = fold(inst.spec, c);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (inst.bit(i, z[i])) return;
    }
    out.push_back(std::move(z));
  }, budget);
  std::sort(out.begin(), out.end());
  return out;
}

Split make_split(const OracleInstance& inst) {
  if (inst.n() % 2 != 0)
    throw Error(Errc::SplitRequiresEvenN, "bipartite split needs an even number of tables, got " +
                                              std::to_string(inst.n()));
  return Split{inst.n(), inst.spec.alphabet_size()};
}

BitTable side_input(const OracleInstance& inst, bool alice) {
  const Split split = make_split(inst);
  BitTable flat(split.flat_length());
  const std::size_t first = alice ? 0 : split.half();
  for (std::size_t i = first; i < first + split.half(); ++i)
    for (std::size_t e = 0; e < split.alphabet; ++e) flat.set(split.flat_index(i, e), inst.bit(i, e));
  return flat;
}

}  // namespace nullcode
