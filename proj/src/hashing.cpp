#include "nullcode/hashing.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "nullcode/error.hpp"
#include "nullcode/linalg.hpp"

namespace nullcode {

HashFamily::HashFamily(unsigned r, std::size_t lambda, std::uint64_t alphabet, std::size_t n)
    : field_(FieldCtx::standard(r)), lambda_(lambda), alphabet_(alphabet), n_(n), width_(std::min(6u, r)) {
  if (lambda == 0) throw Error(Errc::InvalidArgument, "lambda must be at least 1");
  if (alphabet == 0 || n == 0) throw Error(Errc::InvalidArgument, "empty hash domain");
  if (r > 31 || alphabet > (std::uint64_t{1} << r) / n)
    throw Error(Errc::EncodingOverflow, "2^r is smaller than |Sigma| * n");
}

HashFamily HashFamily::for_code(const CodeSpec& spec) {
  const std::uint64_t domain = spec.alphabet_size() * spec.folded_length();
  const auto r = static_cast<unsigned>(std::bit_width(domain - 1));
  const std::size_t n = spec.folded_length();
  return HashFamily(std::max(1u, r), n * n, spec.alphabet_size(), n);
}

Elem HashFamily::encode(Symbol e, std::size_t coord) const {
  if (e >= alphabet_ || coord >= n_) throw Error(Errc::EncodingOverflow, "hash input outside the encoded domain");
  return static_cast<Elem>(e * n_ + coord);
}

HashKey zero_key(const HashFamily& family) { return HashKey{std::vector<Elem>(family.lambda(), 0)}; }

HashKey random_key(const HashFamily& family, Rng& rng) {
  HashKey k = zero_key(family);
  const std::uint64_t mask = (std::uint64_t{1} << family.r()) - 1;
  for (auto& c : k.coeffs) c = static_cast<Elem>(rng() & mask);
  return k;
}

HashKey key_from_bits(const HashFamily& family, std::uint64_t bits) {
  if (family.key_bits() > 64) throw Error(Errc::InvalidArgument, "key does not fit in 64 bits");
  HashKey k = zero_key(family);
  const std::uint64_t mask = (std::uint64_t{1} << family.r()) - 1;
  for (std::size_t j = 0; j < family.lambda(); ++j) k.coeffs[j] = static_cast<Elem>((bits >> (j * family.r())) & mask);
  return k;
}

std::uint32_t eval_hash(const HashFamily& family, const HashKey& key, Symbol e, std::size_t coord) {
  if (key.coeffs.size() != family.lambda()) throw Error(Errc::LengthMismatch, "key length differs from lambda");
  const FieldCtx& f = family.field();
  const Elem u = family.encode(e, coord);
  Elem acc = 0;
  for (std::size_t j = key.coeffs.size(); j-- > 0;) acc = f.add(f.mul(acc, u), key.coeffs[j]);
  return acc & ((1u << family.width()) - 1);
}

bool eval_hash_bias(const HashFamily& family, const HashKey& key, Symbol e, std::size_t coord) {
  return eval_hash(family, key, e, coord) == (1u << family.width()) - 1;
}

bool independence_check(const HashFamily& family, const std::vector<HashPoint>& points) {
  if (points.empty() || points.size() > family.lambda())
    throw Error(Errc::InvalidArgument, "need between 1 and lambda points");
  if (std::set<HashPoint>(points.begin(), points.end()).size() != points.size())
    throw Error(Errc::DistinctnessViolated, "hash points repeat");
  if (family.key_bits() > 24) throw Error(Errc::BudgetExceeded, "key space too large to enumerate");
  const unsigned w = family.width();
  if (w * points.size() > 24) throw Error(Errc::BudgetExceeded, "joint outcome space too large");
  std::vector<std::uint64_t> counts(std::size_t{1} << (w * points.size()), 0);
  const std::uint64_t keys = std::uint64_t{1} << family.key_bits();
  for (std::uint64_t bits = 0; bits < keys; ++bits) {
    const HashKey k = key_from_bits(family, bits);
    std::size_t outcome = 0;
    for (const auto& [e, i] : points) outcome = (outcome << w) | eval_hash(family, k, e, i);
    ++counts[outcome];
  }
  if (keys % counts.size() != 0) return false;
  const std::uint64_t each = keys / counts.size();
  return std::all_of(counts.begin(), counts.end(), [&](std::uint64_t c) { return c == each; });
}

OracleInstance shift_instance(const OracleInstance& inst, const HashFamily& family, const HashKey& key) {
  if (inst.n() != family.n()) throw Error(Errc::LengthMismatch, "instance length differs from the hash domain");
  OracleInstance out = inst;
  out.unfolded.reset();
  for (std::size_t i = 0; i < inst.n(); ++i)
    for (Symbol e = 0; e < inst.tables[i].size(); ++e)
      if (eval_hash_bias(family, key, e, i)) out.tables[i].set(e, !inst.tables[i].get(e));
  return out;
}

AttackResult attack_solve(const HashFamily& family, const CodeSpec& spec, const OracleInstance& inst) {
  if (inst.n() != family.n() || spec.folded_length() != family.n())
    throw Error(Errc::LengthMismatch, "instance, code and hash domain lengths differ");
  AttackResult res;
  // The first nonzero codeword, or zero for the trivial code.
  const auto words = enumerate_codewords(spec);
  res.target = fold(spec, words.front());
  for (const auto& w : words)
    if (hamming_weight(w) > 0) {
      res.target = fold(spec, w);
      break;
    }
  const unsigned r = family.r(), w = family.width();
  const FieldCtx gf2 = FieldCtx::standard(1);
  res.unknowns = family.key_bits();
  res.equations = family.n() * w;
  Mat a(res.equations, Vec(res.unknowns, 0));
  Vec b(res.equations, 0);
  for (std::size_t i = 0; i < family.n(); ++i) {
    const Elem u = family.encode(res.target[i], i);
    const bool want = inst.bit(i, res.target[i]);
    Elem power = 1;  // u^j
    for (std::size_t j = 0; j < family.lambda(); ++j) {
      for (unsigned bit = 0; bit < r; ++bit) {
        // Contribution of key bit (j, bit): low bits of 2^bit * u^j.
        const Elem image = family.field().mul(Elem{1} << bit, power);
        for (unsigned row = 0; row < w; ++row) a[i * w + row][j * r + bit] = (image >> row) & 1u;
      }
      power = family.field().mul(power, u);
    }
    for (unsigned row = 0; row < w; ++row) b[i * w + row] = want ? 1 : 0;
  }
  res.rank = rank(gf2, a, res.unknowns);
  const auto x = solve(gf2, a, b, res.unknowns);
  if (!x) return res;
  HashKey k = zero_key(family);
  for (std::size_t j = 0; j < family.lambda(); ++j)
    for (unsigned bit = 0; bit < r; ++bit)
      if ((*x)[j * r + bit]) k.coeffs[j] |= Elem{1} << bit;
  res.key = std::move(k);
  return res;
}

}  // namespace nullcode
