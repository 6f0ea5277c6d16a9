#include "nullcode/tbnc.hpp"

#include <bit>
#include <cmath>
#include <map>

#include "nullcode/error.hpp"

namespace nullcode {

namespace {

constexpr std::uint64_t kKeyStream = 0;
constexpr std::uint64_t kScanKeyStream = std::uint64_t{1} << 40;

void check_family(const CodeSpec& spec, const HashFamily& family) {
  if (family.n() != spec.folded_length() || family.alphabet() != spec.alphabet_size())
    throw Error(Errc::DomainMismatch, "hash family does not match the code");
}

// Table bits packed as i * |Sigma| + e; requires n |Sigma| <= 64.
std::uint64_t pack_tables(const OracleInstance& inst) {
  std::uint64_t bits = 0;
  std::size_t pos = 0;
  for (const auto& t : inst.tables)
    for (std::size_t e = 0; e < t.size(); ++e, ++pos)
      if (t.get(e)) bits |= std::uint64_t{1} << pos;
  return bits;
}

std::uint64_t pack_hash(const HashFamily& family, const HashKey& key) {
  std::uint64_t bits = 0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < family.n(); ++i)
    for (Symbol e = 0; e < family.alphabet(); ++e, ++pos)
      if (eval_hash_bias(family, key, e, i)) bits |= std::uint64_t{1} << pos;
  return bits;
}

std::vector<std::uint64_t> codeword_masks(const CodeSpec& spec) {
  const std::uint64_t sigma = spec.alphabet_size();
  std::vector<std::uint64_t> masks;
  for (const Word& w : enumerate_codewords(spec)) {
    const FoldedWord z = fold(spec, w);
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < z.size(); ++i) m |= std::uint64_t{1} << (i * sigma + z[i]);
    masks.push_back(m);
  }
  return masks;
}

bool has_solution(std::uint64_t table, const std::vector<std::uint64_t>& masks) {
  for (auto m : masks)
    if ((table & m) == 0) return true;
  return false;
}

std::size_t table_bits(const CodeSpec& spec) {
  const std::uint64_t sigma = spec.alphabet_size();
  if (sigma > 64 || spec.folded_length() * sigma > 64)
    throw Error(Errc::BudgetExceeded, "totality statistics need n |Sigma| <= 64");
  return static_cast<std::size_t>(spec.folded_length() * sigma);
}

// Probability that a table of independent Bernoulli(q_j) bits has no
// surviving codeword, where q_j = p xor-shifted by `shift`.
double emptiness_given_shift(const std::vector<bool>& empty, std::size_t bits, double p, std::uint64_t shift) {
  double total = 0;
  for (std::uint64_t z = 0; z < empty.size(); ++z) {
    if (!empty[z]) continue;
    const auto ones = static_cast<unsigned>(std::popcount(z ^ shift));
    total += std::pow(p, ones) * std::pow(1 - p, static_cast<double>(bits - ones));
  }
  return total;
}

}  // namespace

TbncInstance make_tbnc(const CodeSpec& spec, const HashFamily& family, std::size_t t, std::uint64_t seed) {
  if (t == 0) throw Error(Errc::InvalidArgument, "t must be at least 1");
  check_family(spec, family);
  TbncInstance tb{spec, family, {}};
  for (std::size_t i = 0; i < t; ++i)
    tb.copies.push_back(sample_unfolded_instance(spec, family.width(), derive_seed(seed, i)));
  return tb;
}

TbncInstance constant_tbnc(const CodeSpec& spec, const HashFamily& family, std::size_t t, bool value) {
  if (t == 0) throw Error(Errc::InvalidArgument, "t must be at least 1");
  check_family(spec, family);
  return TbncInstance{spec, family, std::vector<OracleInstance>(t, constant_instance(spec, value))};
}

bool tbnc_verify(const TbncInstance& tb, const HashKey& key, const std::vector<FoldedWord>& solutions) {
  if (solutions.size() != tb.t()) throw Error(Errc::LengthMismatch, "need one solution per copy");
  if (key.coeffs.size() != tb.family.lambda()) return false;
  for (std::size_t i = 0; i < tb.t(); ++i) {
    const FoldedWord& x = solutions[i];
    if (x.size() != tb.copies[i].n() || !tb.spec.contains(x)) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] >= tb.family.alphabet()) return false;
      if (tb.copies[i].bit(j, x[j]) != eval_hash_bias(tb.family, key, x[j], j)) return false;
    }
  }
  return true;
}

std::vector<FoldedWord> Alg2Result::solutions() const {
  std::vector<FoldedWord> out;
  for (const auto& c : copies) out.push_back(c.solution);
  return out;
}

Alg2Result run_alg2(const TbncInstance& tb, std::uint64_t seed, const Alg2Options& options) {
  Alg2Result res;
  if (options.forced_key) {
    res.key = *options.forced_key;
  } else {
    Rng rng = make_rng(seed, kKeyStream);
    res.key = random_key(tb.family, rng);
  }
  const double p = std::ldexp(1.0, -static_cast<int>(tb.family.width()));
  const DualDecoder decoder(tb.spec, make_decoder_params(tb.spec, p, options.epsilon));
  const DecodeFn decode = decoder_fn(decoder);
  for (std::size_t i = 0; i < tb.t(); ++i) {
    const OracleInstance shifted = shift_instance(tb.copies[i], tb.family, res.key);
    Rng rng = make_rng(seed, 1 + i);
    Alg2Copy copy;
    // Measuring the shifted bit of |e>|H(e) xor h(e)> gives 0 with probability |T_j| / |Sigma|.
    for (std::size_t j = 0; j < shifted.n(); ++j) {
      const std::uint64_t sigma = shifted.tables[j].size();
      const std::uint64_t zeros = sigma - shifted.tables[j].count();
      std::uniform_int_distribution<std::uint64_t> pick(0, sigma - 1);
      std::size_t attempts = 0;
      while (pick(rng) >= zeros) {
        if (++attempts > options.retry_cap)
          throw Error(Errc::RetriesExhausted, "copy " + std::to_string(i) + ", coordinate " + std::to_string(j) +
                                                  ": every measurement returned 1");
      }
      copy.retries += attempts;
    }
    const Alg1Result out = charlie_stage(tb.spec, decode, alice_stage(shifted), bob_stage(shifted), options.budget);
    for (const auto& [z, pr] : out.distribution)
      if (verify(shifted, z)) copy.success_probability += pr;
    std::vector<double> weights;
    for (const auto& entry : out.distribution) weights.push_back(entry.second);
    std::discrete_distribution<std::size_t> measure(weights.begin(), weights.end());
    copy.solution = out.distribution.at(measure(rng)).first;
    if (options.diagnostics) {
      const auto lemma = lemma51_pipeline(tb.spec, shifted, decode,
                                          symbol_weight_goodbad(tb.spec, p, options.epsilon), options.budget);
      copy.epsilon = lemma.epsilon;
      copy.delta = lemma.delta;
    }
    res.copies.push_back(std::move(copy));
  }
  res.success = tbnc_verify(tb, res.key, res.solutions());
  return res;
}

namespace {

// Mean and second moment over p-biased tables of the fraction of keys
// leaving no solution.
std::pair<double, double> emptiness_moments(const CodeSpec& spec, const HashFamily& family, const Bias& p) {
  check_family(spec, family);
  const std::size_t bits = table_bits(spec);
  if (bits > 20) throw Error(Errc::BudgetExceeded, "exact emptiness needs n |Sigma| <= 20");
  if (family.key_bits() > 24) throw Error(Errc::BudgetExceeded, "key space too large to enumerate");
  const auto masks = codeword_masks(spec);
  std::map<std::uint64_t, std::uint64_t> shifts;
  const std::uint64_t keys = std::uint64_t{1} << family.key_bits();
  for (std::uint64_t k = 0; k < keys; ++k) ++shifts[pack_hash(family, key_from_bits(family, k))];
  double mean = 0, second = 0;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << bits); ++z) {
    const auto ones = static_cast<unsigned>(std::popcount(z));
    const double w = std::pow(p.value(), ones) * std::pow(1 - p.value(), static_cast<double>(bits - ones));
    std::uint64_t bad = 0;
    for (const auto& [shift, count] : shifts)
      if (!has_solution(z ^ shift, masks)) bad += count;
    const double rate = static_cast<double>(bad) / static_cast<double>(keys);
    mean += w * rate;
    second += w * rate * rate;
  }
  return {mean, second};
}

}  // namespace

double exact_emptiness(const CodeSpec& spec, const HashFamily& family, const Bias& p) {
  return emptiness_moments(spec, family, p).first;
}

TotalityStats totality_scan(const CodeSpec& spec, const HashFamily& family, std::size_t t,
                            std::uint64_t key_budget, std::size_t samples, std::uint64_t seed) {
  check_family(spec, family);
  if (t == 0 || samples == 0) throw Error(Errc::InvalidArgument, "t and the sample count must be positive");
  const std::size_t bits = table_bits(spec);
  const auto masks = codeword_masks(spec);
  TotalityStats st;
  st.samples = samples;
  st.keys_enumerated = family.key_bits() < 64 && (std::uint64_t{1} << family.key_bits()) <= key_budget;
  std::vector<std::uint64_t> shifts;
  if (st.keys_enumerated) {
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << family.key_bits()); ++k)
      shifts.push_back(pack_hash(family, key_from_bits(family, k)));
  } else {
    if (key_budget == 0) throw Error(Errc::BudgetExceeded, "key budget is zero");
    Rng rng = make_rng(seed, kScanKeyStream);
    for (std::uint64_t k = 0; k < key_budget; ++k) shifts.push_back(pack_hash(family, random_key(family, rng)));
  }
  st.keys_per_sample = shifts.size();
  double sum = 0, sum_sq = 0;
  std::size_t with_good = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const TbncInstance tb = make_tbnc(spec, family, t, derive_seed(seed, s));
    std::vector<std::uint64_t> tables;
    for (const auto& c : tb.copies) tables.push_back(pack_tables(c));
    std::uint64_t bad = 0;
    for (auto shift : shifts) {
      bool ok = true;
      for (auto table : tables) ok = ok && has_solution(table ^ shift, masks);
      if (!ok) ++bad;
    }
    const double rate = static_cast<double>(bad) / static_cast<double>(shifts.size());
    sum += rate;
    sum_sq += rate * rate;
    if (bad < shifts.size()) ++with_good;
  }
  const double n = static_cast<double>(samples);
  st.empty_rate = sum / n;
  st.empty_rate_se = samples > 1 ? std::sqrt(std::max(0.0, (sum_sq - n * st.empty_rate * st.empty_rate) / (n - 1)) / n) : 0;
  st.with_good_key = static_cast<double>(with_good) / n;
  const Bias p = Bias::power_of_two(family.width());
  if (t == 1 && st.keys_enumerated && bits <= 20 && family.key_bits() <= 24) {
    const auto [mean, second] = emptiness_moments(spec, family, p);
    st.exact_empty_rate = mean;
    st.exact_empty_rate_se = std::sqrt(std::max(0.0, second - mean * mean) / n);
  }
  if (bits <= 20) {
    std::vector<bool> empty(std::size_t{1} << bits);
    for (std::uint64_t z = 0; z < empty.size(); ++z) empty[z] = !has_solution(z, masks);
    const double flip = 2 * p.value() * (1 - p.value());
    st.independent_closed_form = emptiness_given_shift(empty, bits, flip, 0);
  }
  return st;
}

double union_bound_calculator(unsigned r, double t, double suc_single) {
  if (t < 0 || suc_single < 0) throw Error(Errc::InvalidArgument, "negative argument");
  return std::ldexp(std::pow(suc_single, t), static_cast<int>(r));
}

}  // namespace nullcode
