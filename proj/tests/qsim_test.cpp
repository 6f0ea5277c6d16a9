#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "nullcode/error.hpp"
#include "nullcode/qsim.hpp"

using namespace nullcode;

namespace {

constexpr double kTol = 1e-12;

// Walsh-Hadamard transform of an 8-bit register, written independently of
// the digit-wise library transform. Valid for the binary toy code.
std::vector<double> walsh8(const std::vector<double>& v) {
  std::vector<double> out(256, 0);
  for (unsigned z = 0; z < 256; ++z)
    for (unsigned x = 0; x < 256; ++x) out[z] += (std::popcount(x & z) & 1 ? -v[x] : v[x]) / 16.0;
  return out;
}

std::vector<double> dense(const SparseState& s) {
  std::vector<double> v(256, 0);
  for (const auto& [k, a] : s.amplitudes()) v[k] = a.real();
  return v;
}

DecodeFn toy_decoder(double p) {
  const auto c = toy_selfdual();
  return decoder_fn(DualDecoder(c, make_decoder_params(c, p, 0.01)));
}

}  // namespace

TEST(Qsim, QftMatrixQ2) {
  const auto h = qft_matrix(FieldCtx::standard(1));
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(h[0][0], r, kTol);
  EXPECT_NEAR(h[0][1], r, kTol);
  EXPECT_NEAR(h[1][0], r, kTol);
  EXPECT_NEAR(h[1][1], -r, kTol);
}

TEST(Qsim, QftIsOrthogonalAndSelfInverse) {
  for (unsigned s : {1u, 2u, 4u}) {
    const auto h = qft_matrix(FieldCtx::standard(s));
    const std::size_t q = h.size();
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) {
        double dot_t = 0, sq = 0;
        for (std::size_t k = 0; k < q; ++k) {
          dot_t += h[i][k] * h[j][k];
          sq += h[i][k] * h[k][j];
        }
        EXPECT_NEAR(dot_t, i == j ? 1 : 0, kTol);
        EXPECT_NEAR(sq, i == j ? 1 : 0, kTol);
      }
  }
}

TEST(Qsim, QftOfUniformIsZeroState) {
  const FieldCtx f = FieldCtx::standard(4);
  SparseState u(RegisterLayout{4, 1, 1}, 1);
  for (std::uint64_t x = 0; x < 16; ++x) u.add(x, 0.25);
  const auto out = apply_qft(u, f, 0);
  EXPECT_EQ(out.support(), 1u);
  EXPECT_NEAR(std::abs(out.amplitude(0) - 1.0), 0, kTol);
}

TEST(Qsim, PackUnpack) {
  const RegisterLayout l{2, 3, 2};
  const FoldedWord z{0b101101, 0b000111};
  EXPECT_EQ(pack(l, z), (std::uint64_t{0b101101} << 6) | 0b000111);
  EXPECT_EQ(unpack(l, pack(l, z)), z);
}

TEST(Qsim, PreparePhi) {
  const auto c = toy_selfdual();
  auto inst = constant_instance(c, false);
  const auto phi = prepare_phi(inst, 0);
  EXPECT_EQ(phi.support(), 4u);
  EXPECT_NEAR(phi.norm_squared(), 1, kTol);
  const auto hat = apply_qft(phi, c.field(), 0);
  EXPECT_EQ(hat.support(), 1u);

  inst.tables[1] = BitTable(4, true);
  inst.tables[1].set(2, false);
  const auto single = prepare_phi(inst, 1);
  EXPECT_EQ(single.support(), 1u);
  EXPECT_NEAR(single.amplitude(2).real(), 1, kTol);

  inst.tables[2] = BitTable(4, true);
  inst.tables[2].set(0, false);
  inst.tables[2].set(3, false);
  const auto w = apply_qft(prepare_phi(inst, 2), c.field(), 0);
  EXPECT_NEAR(std::abs(w.amplitude(0)), std::sqrt(2.0 / 4.0), kTol);

  inst.tables[3] = BitTable(4, true);
  try {
    prepare_phi(inst, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptySupport);
  }
}

TEST(Qsim, PsiOfTrivialCode) {
  const auto zero = CodeSpec::generic_linear(FieldCtx::standard(1), {}, 4, 2);
  const auto psi = prepare_psi(zero);
  EXPECT_EQ(psi.support(), 1u);
  EXPECT_NEAR(psi.amplitude(0).real(), 1, kTol);
  const auto hat = apply_qft(psi, zero.field(), 0);
  EXPECT_EQ(hat.support(), 16u);
  for (const auto& [k, a] : hat.amplitudes()) EXPECT_NEAR(a.real(), 0.25, kTol);
}

TEST(Qsim, ToyFourierSupportIsDual) {
  const auto c = toy_selfdual();
  const auto psi = prepare_psi(c);
  EXPECT_NEAR(psi.norm_squared(), 1, kTol);
  const auto hat = apply_qft(psi, c.field(), 0);
  const auto ref = walsh8(dense(psi));
  const auto perp = dual(c);
  const auto l = layout_for(c);
  for (std::uint64_t z = 0; z < 256; ++z) {
    EXPECT_NEAR(hat.amplitude(z).real(), ref[z], kTol);
    const bool in_perp = perp.contains(unpack(l, z));
    EXPECT_NEAR(std::abs(hat.amplitude(z)), in_perp ? 0.25 : 0.0, 1e-10);
  }
  EXPECT_NEAR(hat.norm_squared(), 1, 1e-10);
}

TEST(Qsim, AddDecodeIsPermutation) {
  // Sigma = F_2^2, n = 2, arbitrary F.
  const RegisterLayout l{1, 2, 2};
  std::mt19937_64 rng(4);
  std::map<std::uint64_t, std::uint64_t> table;
  for (std::uint64_t z = 0; z < 16; ++z) table[z] = rng() % 16;
  const DecodeFn f = [&](const FoldedWord& z) -> std::optional<FoldedWord> {
    return unpack(l, table.at(pack(l, z)));
  };
  SparseState joint(l, 2);
  for (std::uint64_t k = 0; k < 256; ++k) joint.add(k, static_cast<double>(k + 1));
  const auto out = apply_add_decode(joint, f);
  EXPECT_EQ(out.support(), 256u);
  std::set<double> amps;
  for (const auto& [k, a] : out.amplitudes()) amps.insert(a.real());
  EXPECT_EQ(amps.size(), 256u);
  EXPECT_NEAR(out.norm_squared(), joint.norm_squared(), 1e-6);

  // F(z) = z leaves -e = e in the first register.
  const DecodeFn id = [](const FoldedWord& z) -> std::optional<FoldedWord> { return z; };
  SparseState one(l, 2);
  one.add(one.join(5, 9), 1);
  const auto moved = apply_add_decode(one, id);
  EXPECT_NEAR(moved.amplitude(moved.join(9, 5 ^ 9)).real(), 1, kTol);
}

TEST(Qsim, StateDistanceCleanOracle) {
  const auto c = toy_selfdual();
  const auto inst = constant_instance(c, false);
  const auto dec = toy_decoder(1.0 / 16);
  const auto r = lemma51_pipeline(c, inst, dec, symbol_weight_goodbad(c, 1.0 / 16, 0.01));
  EXPECT_NEAR(r.epsilon, 0, kTol);
  EXPECT_NEAR(r.delta, 0, kTol);
  EXPECT_LE(r.l2_distance, 1e-9);
  // Outcome uniform over C.
  const auto dist = measure_register(r.actual, 1);
  EXPECT_EQ(dist.size(), 16u);
  for (const auto& [z, pr] : dist) {
    EXPECT_TRUE(c.contains(unpack(layout_for(c), z)));
    EXPECT_NEAR(pr, 1.0 / 16, 1e-10);
  }
}

TEST(Qsim, StateDistanceBiasedToyWithIndependentEpsilon) {
  const auto c = toy_selfdual();
  const auto dec = toy_decoder(1.0 / 16);
  const auto gb = symbol_weight_goodbad(c, 1.0 / 16, 0.01);
  ASSERT_TRUE(good_set_sound(c, dec, gb));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = sample_instance(c, Bias::power_of_two(4), seed);
    const auto r = lemma51_pipeline(c, inst, dec, gb);
    EXPECT_LE(r.l2_distance, r.bound + 1e-9) << seed;
    EXPECT_NEAR(r.actual.norm_squared(), 1, 1e-10);
    // (p + eps) n < 1, so GOOD keeps only e = 0 and epsilon = 1 - |W(0)|^2
    // with |W(0)|^2 = prod_i |T_i| / |Sigma|.
    double w0 = 1;
    for (const auto& t : inst.tables) w0 *= static_cast<double>(t.size() - t.count()) / 4.0;
    EXPECT_NEAR(r.epsilon, 1 - w0, 1e-10);
    // A tighter GOOD set can only shrink epsilon.
    const auto tight = lemma51_pipeline(c, inst, dec, decoder_goodbad(dec));
    EXPECT_LE(tight.epsilon, r.epsilon + 1e-12);
    EXPECT_LE(tight.l2_distance, tight.bound + 1e-9);
  }
}

TEST(Qsim, UnsoundGoodSetDetected) {
  const auto c = toy_selfdual();
  const GoodBadSpec everything{[](const FoldedWord&, const FoldedWord&) { return true; }};
  EXPECT_FALSE(good_set_sound(c, toy_decoder(1.0 / 16), everything));
  EXPECT_TRUE(good_set_sound(c, toy_decoder(1.0 / 16), unfolded_weight_goodbad(c, 0)));
}

TEST(Qsim, SmpProtocolCleanAndBiased) {
  const auto c = toy_selfdual();
  const auto dec = toy_decoder(1.0 / 16);
  EXPECT_NEAR(run_alg1(constant_instance(c, false), dec).success_probability, 1, 1e-9);
  EXPECT_THROW(run_alg1(constant_instance(c, true), dec), Error);
  const auto gb = symbol_weight_goodbad(c, 1.0 / 16, 0.01);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = sample_instance(c, Bias::power_of_two(4), seed);
    const auto r = run_alg1(inst, dec);
    const auto lem = lemma51_pipeline(c, inst, dec, gb);
    EXPECT_GE(r.success_probability, 1 - lem.bound * lem.bound - 1e-9);
    double total = 0;
    for (const auto& [z, pr] : r.distribution) total += pr;
    EXPECT_NEAR(total, 1, 1e-10);
  }
}

TEST(Qsim, SmpProtocolRequiresEvenSplit) {
  const auto c = paper_preset(1);
  const auto params = make_decoder_params(c, 1.0 / 64, 0.01);
  try {
    run_alg1(constant_instance(c, false), decoder_fn(DualDecoder(c, params)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SplitRequiresEvenN);
  }
}

TEST(Qsim, FourierWeightExact) {
  const auto r = claim66_stats(FieldCtx::standard(1), 4, Bias::rational(1, 4), 0);
  EXPECT_NEAR(r.mean_w0_sq, 0.75, 1e-10);
  EXPECT_NEAR(r.prob_empty, 1.0 / 256, 1e-15);
  EXPECT_LE(r.max_nonzero_z, 1e-12);
  // Means over all e sum to Pr[T nonempty].
  double sum = 0;
  for (double m : r.per_element_means) sum += m;
  EXPECT_NEAR(sum, 1 - 1.0 / 256, 1e-12);
  // Same statistics over F_4 as the alphabet.
  EXPECT_NEAR(claim66_stats(FieldCtx::standard(2), 4, Bias::rational(1, 4), 0).mean_w0_sq, 0.75, 1e-10);

  const auto zero = claim66_stats(FieldCtx::standard(1), 8, Bias::rational(0, 1), 0);
  EXPECT_NEAR(zero.mean_w0_sq, 1, 1e-12);
}

TEST(Qsim, FourierWeightMonteCarlo) {
  const auto r = claim66_stats(FieldCtx::standard(1), 8, Bias::rational(1, 8), 20000, 3);
  EXPECT_LE(std::abs(r.mean_w0_sq - 7.0 / 8), 3 * r.se_w0_sq);
  EXPECT_GT(r.se_w0_sq, 0);
}

TEST(Qsim, ProductLaw) {
  const auto c = toy_selfdual();
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    EXPECT_LE(product_law_error(sample_instance(c, Bias::rational(1, 4), seed)), 1e-12);
}
