#include <gtest/gtest.h>

#include "nullcode/error.hpp"
#include "nullcode/hashing.hpp"
#include "nullcode/linalg.hpp"
#include "nullcode/tbnc.hpp"

using namespace nullcode;

namespace {

// Carry-less product reduced by x^4 + x + 1.
std::uint32_t ref_mul16(std::uint32_t a, std::uint32_t b) {
  std::uint32_t prod = 0;
  for (unsigned j = 0; j < 4; ++j)
    if ((b >> j) & 1u) prod ^= a << j;
  for (int d = 7; d >= 4; --d)
    if ((prod >> d) & 1u) prod ^= 0x13u << (d - 4);
  return prod;
}

}  // namespace

TEST(Hashing, ZeroAndConstantKeys) {
  const HashFamily fam(6, 3, 4, 4);
  const HashKey zero = zero_key(fam);
  HashKey constant = zero;
  constant.coeffs[0] = 0x2b;
  for (Symbol e = 0; e < 4; ++e)
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_EQ(eval_hash(fam, zero, e, i), 0u);
      EXPECT_EQ(eval_hash(fam, constant, e, i), 0x2bu);
    }
}

TEST(Hashing, TwoTermPolynomialMatchesDirectArithmetic) {
  const HashFamily fam(4, 2, 4, 4);
  for (std::uint32_t c0 = 0; c0 < 16; ++c0)
    for (std::uint32_t c1 = 0; c1 < 16; ++c1)
      for (Symbol e = 0; e < 4; ++e)
        for (std::size_t i = 0; i < 4; ++i) {
          const std::uint32_t u = static_cast<std::uint32_t>(e * 4 + i);
          EXPECT_EQ(eval_hash(fam, HashKey{{c0, c1}}, e, i), c0 ^ ref_mul16(c1, u));
        }
}

TEST(Hashing, LinearInKeyBits) {
  const HashFamily fam(8, 5, 16, 8);
  Rng rng = make_rng(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const HashKey a = random_key(fam, rng), b = random_key(fam, rng);
    HashKey sum = a;
    for (std::size_t j = 0; j < sum.coeffs.size(); ++j) sum.coeffs[j] ^= b.coeffs[j];
    const Symbol e = rng() % 16;
    const std::size_t i = rng() % 8;
    EXPECT_EQ(eval_hash(fam, sum, e, i), eval_hash(fam, a, e, i) ^ eval_hash(fam, b, e, i));
  }
}

TEST(Hashing, ExactIndependence) {
  const HashFamily pair(4, 2, 4, 4);
  EXPECT_TRUE(independence_check(pair, {{1, 2}, {3, 0}}));
  EXPECT_TRUE(independence_check(pair, {{0, 0}}));
  const HashFamily single(6, 1, 4, 4);
  EXPECT_TRUE(independence_check(single, {{2, 3}}));
  const HashFamily triple(4, 3, 4, 4);
  EXPECT_TRUE(independence_check(triple, {{0, 1}, {1, 1}, {3, 3}}));
  try {
    independence_check(pair, {{1, 2}, {1, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DistinctnessViolated);
  }
}

TEST(Hashing, EncodingMustBeInjective) {
  try {
    HashFamily(3, 1, 4, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EncodingOverflow);
  }
  const HashFamily fam(4, 1, 4, 4);
  EXPECT_THROW(eval_hash(fam, zero_key(fam), 4, 0), Error);
}

TEST(Hashing, FamilyForToyCode) {
  const auto fam = HashFamily::for_code(toy_selfdual());
  EXPECT_EQ(fam.r(), 4u);
  EXPECT_EQ(fam.lambda(), 16u);
  EXPECT_EQ(fam.width(), 4u);
}

TEST(Attack, KeysPassTheVerifier) {
  const CodeSpec spec = toy_selfdual();
  const auto fam = HashFamily::for_code(spec);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = sample_instance(spec, Bias::rational(1, 2), seed);
    const auto res = attack_solve(fam, spec, inst);
    ASSERT_TRUE(res.key.has_value());
    const TbncInstance tb{spec, fam, {inst}};
    EXPECT_TRUE(tbnc_verify(tb, *res.key, {res.target}));
  }
}

TEST(Attack, AllZeroInstance) {
  const CodeSpec spec = toy_selfdual();
  const auto fam = HashFamily::for_code(spec);
  const auto inst = constant_instance(spec, false);
  const auto res = attack_solve(fam, spec, inst);
  ASSERT_TRUE(res.key.has_value());
  EXPECT_TRUE(tbnc_verify(TbncInstance{spec, fam, {inst}}, *res.key, {res.target}));
}

TEST(Attack, BottomExactlyWhenInconsistent) {
  const CodeSpec spec = toy_selfdual();
  const HashFamily fam(4, 1, 4, 4);  // lambda < n
  const FieldCtx gf2 = FieldCtx::standard(1);
  std::size_t bottoms = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = sample_instance(spec, Bias::rational(1, 2), seed);
    const auto res = attack_solve(fam, spec, inst);
    // Rebuild the augmented system independently through the hash itself.
    Mat aug;
    for (std::size_t i = 0; i < 4; ++i)
      for (unsigned row = 0; row < fam.width(); ++row) {
        Vec v;
        for (unsigned bit = 0; bit < fam.r(); ++bit)
          v.push_back((eval_hash(fam, HashKey{{Elem{1} << bit}}, res.target[i], i) >> row) & 1u);
        v.push_back(inst.bit(i, res.target[i]) ? 1 : 0);
        aug.push_back(v);
      }
    const std::size_t augmented = rank(gf2, aug, fam.r() + 1);
    EXPECT_EQ(res.key.has_value(), augmented == res.rank);
    if (!res.key) ++bottoms;
    else EXPECT_TRUE(tbnc_verify(TbncInstance{spec, fam, {inst}}, *res.key, {res.target}));
  }
  EXPECT_GT(bottoms, 0u);
}
