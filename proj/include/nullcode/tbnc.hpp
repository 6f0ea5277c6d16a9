#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nullcode/codes.hpp"
#include "nullcode/hashing.hpp"
#include "nullcode/instances.hpp"
#include "nullcode/qsim.hpp"

namespace nullcode {

/// t copies of a bNC instance that must be solved under one shared hash key.
struct TbncInstance {
  CodeSpec spec;
  HashFamily family;
  std::vector<OracleInstance> copies;

  std::size_t t() const { return copies.size(); }
};

// Copies carry uniform AND blocks of the family's output width.
TbncInstance make_tbnc(const CodeSpec& spec, const HashFamily& family, std::size_t t, std::uint64_t seed);
TbncInstance constant_tbnc(const CodeSpec& spec, const HashFamily& family, std::size_t t, bool value);

// Every copy's word lies in C and vanishes under H^(i) xor bias h_k.
bool tbnc_verify(const TbncInstance& tb, const HashKey& key, const std::vector<FoldedWord>& solutions);

struct Alg2Options {
  std::size_t retry_cap = 64;  // extra copies per coordinate after the first
  std::optional<HashKey> forced_key;
  double epsilon = 0.01;       // decoder slack
  bool diagnostics = false;    // per-copy epsilon, delta
  std::uint64_t budget = state_budget();
};

struct Alg2Copy {
  FoldedWord solution;
  double success_probability = 0;
  std::size_t retries = 0;
  std::optional<double> epsilon, delta;
};

struct Alg2Result {
  HashKey key;
  std::vector<Alg2Copy> copies;
  bool success = false;

  std::vector<FoldedWord> solutions() const;
};

// Charlie draws the key and every measurement outcome from `seed`.
Alg2Result run_alg2(const TbncInstance& tb, std::uint64_t seed, const Alg2Options& options = {});

struct TotalityStats {
  std::size_t samples = 0;
  std::uint64_t keys_per_sample = 0;
  bool keys_enumerated = false;
  double with_good_key = 0;      // fraction of samples where some scanned key works
  double empty_rate = 0;         // mean over samples of the fraction of bad keys
  double empty_rate_se = 0;
  std::optional<double> exact_empty_rate;     // over p-biased tables and uniform keys
  std::optional<double> exact_empty_rate_se;  // exact standard error of empty_rate
  double independent_closed_form = 0;      // value if all table bits were independent
};

/// Samples `samples` instances (t copies, uniform AND blocks) and, for each,
/// counts the keys under which every copy keeps a solution. Keys are
/// enumerated when 2^(r lambda) <= key_budget and sampled otherwise.
TotalityStats totality_scan(const CodeSpec& spec, const HashFamily& family, std::size_t t,
                            std::uint64_t key_budget, std::size_t samples, std::uint64_t seed);

// Exact probability that a copy has no solution when tables are p-biased and
// the key is uniform (n |Sigma| <= 20, r lambda <= 24).
double exact_emptiness(const CodeSpec& spec, const HashFamily& family, const Bias& p);

// 2^r * suc_single^t.
double union_bound_calculator(unsigned r, double t, double suc_single);

}  // namespace nullcode
