#include <algorithm>
#include <set>

#include "nullcode/error.hpp"
#include "nullcode/proto.hpp"

namespace nullcode {

namespace {

Input to_input(const BitTable& t) {
  Input x = 0;
  for (std::size_t j = 0; j < t.size(); ++j)
    if (t.get(j)) x |= Input{1} << j;
  return x;
}

}  // namespace

std::size_t DangerContext::fixed_count(std::size_t c, const Cube& alice, const Cube& bob) const {
  const FoldedWord& w = codewords.at(c);
  std::size_t count = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::uint32_t mask = split.is_alice(i) ? alice.mask : bob.mask;
    if ((mask >> split.flat_index(i, w[i])) & 1u) ++count;
  }
  return count;
}

bool DangerContext::is_solution(std::size_t c, Input x, Input y) const {
  const FoldedWord& w = codewords.at(c);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Input in = split.is_alice(i) ? x : y;
    if ((in >> split.flat_index(i, w[i])) & 1u) return false;
  }
  return true;
}

DangerContext make_danger_context(const CodeSpec& spec, double zeta) {
  const std::size_t n = spec.folded_length();
  if (n % 2 != 0) throw Error(Errc::SplitRequiresEvenN, "bipartite split needs an even number of coordinates");
  DangerContext ctx{spec, Split{n, spec.alphabet_size()}, {}, agreement_threshold(zeta, n), zeta};
  if (ctx.split.flat_length() > kMaxInputBits)
    throw Error(Errc::BudgetExceeded, "each side may hold at most 20 table bits");
  for (const Word& w : enumerate_codewords(spec)) ctx.codewords.push_back(fold(spec, w));
  return ctx;
}

BaselineBncProtocol::BaselineBncProtocol(DangerContext ctx, std::size_t budget_bits)
    : ctx_(std::move(ctx)), budget_(budget_bits) {}

Execution BaselineBncProtocol::execute(Input x, Input y) const {
  Execution run;
  Cube alice, bob;
  for (std::size_t c = 0; c < ctx_.codewords.size(); ++c) {
    const FoldedWord& w = ctx_.codewords[c];
    bool zero = true;
    for (std::size_t i = 0; i < w.size() && zero; ++i) {
      const bool is_alice = ctx_.split.is_alice(i);
      Cube& known = is_alice ? alice : bob;
      const std::uint32_t bit = std::uint32_t{1} << ctx_.split.flat_index(i, w[i]);
      if (known.mask & bit) {
        zero = (known.values & bit) == 0;
        continue;
      }
      if (run.steps.size() == budget_) return run;
      const Input in = is_alice ? x : y;
      known.mask |= bit;
      known.values |= in & bit;
      zero = (in & bit) == 0;
      run.steps.push_back(Step{is_alice ? Party::Alice : Party::Bob, zero ? "0" : "1", alice, bob});
    }
    if (zero) {
      run.output = c;
      return run;
    }
  }
  return run;
}

DangerRun danger_run(const Protocol& protocol, const DangerContext& ctx, Input x, Input y) {
  if (protocol.input_bits() != ctx.side_bits())
    throw Error(Errc::LengthMismatch, "protocol inputs do not match the instance layout");
  const Execution exec = protocol.execute(x, y);
  DangerRun run;
  run.output = exec.output;
  const std::size_t n = ctx.split.n;
  auto observe = [&](const Cube& alice, const Cube& bob) {
    std::vector<std::size_t> q;
    for (std::size_t c = 0; c < ctx.codewords.size(); ++c)
      if (ctx.fixed_count(c, alice, bob) >= ctx.threshold) q.push_back(c);
    std::vector<std::vector<Symbol>> sets(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t mask = ctx.split.is_alice(i) ? alice.mask : bob.mask;
      for (Symbol e = 0; e < ctx.split.alphabet; ++e)
        if ((mask >> ctx.split.flat_index(i, e)) & 1u) sets[i].push_back(e);
    }
    const std::uint64_t lr = list_recover_count(ctx.spec, sets, ctx.zeta);
    run.list_recover.push_back(lr);
    if (lr != q.size()) run.counts_consistent = false;
    if (!run.ledger.empty() && !std::includes(q.begin(), q.end(), run.ledger.back().begin(), run.ledger.back().end()))
      run.monotone = false;
    run.ledger.push_back(std::move(q));
  };
  observe(Cube{}, Cube{});
  for (const Step& s : exec.steps) observe(s.alice, s.bob);
  std::set<std::size_t> ever;
  for (const auto& q : run.ledger) ever.insert(q.begin(), q.end());
  run.became_dangerous = ever.size();
  for (std::size_t c : ever)
    if (ctx.is_solution(c, x, y)) ++run.dangerous_then_solution;
  return run;
}

DangerStats danger_track(const Protocol& protocol, const DangerContext& ctx, const Bias& p, std::size_t runs,
                         std::uint64_t seed) {
  DangerStats stats;
  auto record = [&](Input x, Input y) {
    const DangerRun r = danger_run(protocol, ctx, x, y);
    ++stats.runs;
    stats.monotone = stats.monotone && r.monotone;
    stats.counts_consistent = stats.counts_consistent && r.counts_consistent;
    stats.became_dangerous += r.became_dangerous;
    stats.dangerous_then_solution += r.dangerous_then_solution;
    stats.max_final_ledger = std::max(stats.max_final_ledger, r.ledger.back().size());
    if (r.output && ctx.is_solution(static_cast<std::size_t>(*r.output), x, y)) ++stats.correct_outputs;
  };
  if (runs == 0) {
    if (2 * ctx.side_bits() > 20) throw Error(Errc::BudgetExceeded, "exhaustive danger tracking needs 2N <= 20");
    const std::size_t domain = std::size_t{1} << ctx.side_bits();
    for (std::size_t x = 0; x < domain; ++x)
      for (std::size_t y = 0; y < domain; ++y) record(static_cast<Input>(x), static_cast<Input>(y));
    return stats;
  }
  for (std::size_t r = 0; r < runs; ++r) {
    const OracleInstance inst = sample_instance(ctx.spec, p, derive_seed(seed, r));
    record(to_input(side_input(inst, true)), to_input(side_input(inst, false)));
  }
  return stats;
}

}  // namespace nullcode
