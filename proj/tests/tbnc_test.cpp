#include <gtest/gtest.h>

#include <cmath>

#include "nullcode/error.hpp"
#include "nullcode/tbnc.hpp"

using namespace nullcode;

namespace {

CodeSpec repetition_f4() { return CodeSpec::generic_linear(FieldCtx(2, 0x7), {{1, 1}}, 2, 1); }

}  // namespace

TEST(Tbnc, VerifierOnZeroOracles) {
  const CodeSpec spec = toy_selfdual();
  const auto fam = HashFamily::for_code(spec);
  const auto tb = constant_tbnc(spec, fam, 3, false);
  const auto words = enumerate_codewords(spec);
  const std::vector<FoldedWord> sols{fold(spec, words[1]), fold(spec, words[5]), fold(spec, words[9])};
  EXPECT_TRUE(tbnc_verify(tb, zero_key(fam), sols));
  auto wrong = sols;
  wrong[2][0] ^= 1;
  EXPECT_FALSE(tbnc_verify(tb, zero_key(fam), wrong));
  try {
    tbnc_verify(tb, zero_key(fam), {sols[0]});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::LengthMismatch);
  }
}

TEST(Tbnc, ShiftIsBiasLevelXor) {
  const CodeSpec spec = toy_selfdual();
  const auto fam = HashFamily::for_code(spec);
  const auto tb = make_tbnc(spec, fam, 1, 4);
  Rng rng = make_rng(4, 9);
  const HashKey key = random_key(fam, rng);
  const auto shifted = shift_instance(tb.copies[0], fam, key);
  for (std::size_t i = 0; i < 4; ++i)
    for (Symbol e = 0; e < 4; ++e)
      EXPECT_EQ(shifted.bit(i, e), tb.copies[0].bit(i, e) != eval_hash_bias(fam, key, e, i));
}

TEST(Tbnc, UnfoldedXorDiffersFromBiasXor) {
  // AND(a xor b) and AND(a) xor AND(b) disagree on some 6-bit blocks, so the
  // shift has to be taken after collapsing each side.
  std::size_t differ = 0;
  for (unsigned a = 0; a < 64; ++a)
    for (unsigned b = 0; b < 64; ++b) {
      const bool unfolded = (a ^ b) == 63;
      const bool bias = (a == 63) != (b == 63);
      differ += unfolded != bias;
    }
  // One side all ones and the other not zero, or neither side all ones but
  // complementary: 62 pairs in each of three cases.
  EXPECT_EQ(differ, 3u * 62u);
}

TEST(TotalProtocol, ZeroOraclesWithForcedZeroKey) {
  const CodeSpec spec = toy_selfdual();
  const auto fam = HashFamily::for_code(spec);
  const auto tb = constant_tbnc(spec, fam, 4, false);
  Alg2Options opt;
  opt.forced_key = zero_key(fam);
  const auto res = run_alg2(tb, 1, opt);
  EXPECT_TRUE(res.success);
  for (const auto& c : res.copies) {
    EXPECT_NEAR(c.success_probability, 1.0, 1e-9);
    EXPECT_EQ(c.retries, 0u);
  }
  EXPECT_TRUE(tbnc_verify(tb, res.key, res.solutions()));
}

TEST(TotalProtocol, RetryCapZero) {
  const CodeSpec spec = toy_selfdual();
  const auto fam = HashFamily::for_code(spec);
  const auto tb = constant_tbnc(spec, fam, 1, true);
  Alg2Options opt;
  opt.retry_cap = 0;
  opt.forced_key = zero_key(fam);
  try {
    run_alg2(tb, 1, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RetriesExhausted);
  }
}

TEST(TotalProtocol, DeterministicAndConsistentWithVerifier) {
  const CodeSpec spec = toy_selfdual();
  const auto fam = HashFamily::for_code(spec);
  std::size_t ok = 0, runs = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto tb = make_tbnc(spec, fam, 2, seed);
    Alg2Result a, b;
    try {
      a = run_alg2(tb, seed);
      b = run_alg2(tb, seed);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::RetriesExhausted);
      continue;
    }
    ++runs;
    EXPECT_EQ(a.key, b.key);
    EXPECT_EQ(a.solutions(), b.solutions());
    EXPECT_EQ(a.success, tbnc_verify(tb, a.key, a.solutions()));
    ok += a.success;
  }
  EXPECT_GT(runs, 0u);
  EXPECT_GT(ok, 0u);
}

TEST(Totality, MatchesExactEmptinessAtOneCopy) {
  const CodeSpec spec = repetition_f4();
  const HashFamily fam(6, 2, 4, 2);
  const auto st = totality_scan(spec, fam, 1, 1u << 12, 200, 17);
  ASSERT_TRUE(st.keys_enumerated);
  ASSERT_TRUE(st.exact_empty_rate.has_value());
  ASSERT_TRUE(st.exact_empty_rate_se.has_value());
  EXPECT_GT(*st.exact_empty_rate_se, 0);
  EXPECT_LE(std::abs(st.empty_rate - *st.exact_empty_rate), 3 * *st.exact_empty_rate_se);
  EXPECT_EQ(st.with_good_key, 1.0);
}

TEST(Totality, ExactEmptinessAgainstIndependentFormula) {
  // With lambda >= |Sigma| n the shift bits are fully independent, so the
  // emptiness rate is the product over the disjoint codeword supports.
  const CodeSpec spec = CodeSpec::generic_linear(FieldCtx::standard(1), {{1, 1}}, 2, 1);
  const HashFamily fam(2, 4, 2, 2);
  const Bias p = Bias::power_of_two(2);
  const double q = 2 * 0.25 * 0.75;
  EXPECT_NEAR(exact_emptiness(spec, fam, p), std::pow(1 - (1 - q) * (1 - q), 2), 1e-12);
}

TEST(Totality, ZeroOraclesAlwaysHaveAGoodKey) {
  const CodeSpec spec = repetition_f4();
  const HashFamily fam(6, 2, 4, 2);
  // Samples are random, but the zero key keeps every instance's tables; a
  // direct check of the zero oracle goes through the verifier instead.
  const auto tb = constant_tbnc(spec, fam, 1, false);
  EXPECT_TRUE(tbnc_verify(tb, zero_key(fam), {FoldedWord{2, 2}}));
}

TEST(UnionBound, Arithmetic) {
  EXPECT_EQ(union_bound_calculator(7, 30, 1.0), 128.0);
  EXPECT_EQ(union_bound_calculator(10, 100, 0.5), std::ldexp(1.0, -90));
  EXPECT_EQ(union_bound_calculator(5, 0, 0.3), 32.0);
}
