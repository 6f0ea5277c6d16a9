#include "nullcode/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "nullcode/error.hpp"
#include "nullcode/rng.hpp"

namespace nullcode {

namespace {

constexpr std::uint64_t kDefaultStateBudget = std::uint64_t{1} << 26;

std::uint64_t low_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

// sign[z][x] = Tr(x z) as a 0/1 entry.
std::vector<std::vector<std::uint8_t>> trace_table(const FieldCtx& field) {
  const Elem q = field.order();
  std::vector<std::vector<std::uint8_t>> t(q, std::vector<std::uint8_t>(q));
  for (Elem z = 0; z < q; ++z)
    for (Elem x = 0; x < q; ++x) t[z][x] = static_cast<std::uint8_t>(field.trace(field.mul(x, z)));
  return t;
}

void check_field_layout(const FieldCtx& field, const RegisterLayout& layout) {
  if (field.degree() != layout.digit_bits)
    throw Error(Errc::DomainMismatch, "field degree does not match the state layout");
}

std::vector<SparseState> single_symbol_states(const OracleInstance& inst, std::size_t first,
                                              std::size_t last) {
  std::vector<SparseState> out;
  for (std::size_t i = first; i < last; ++i) out.push_back(prepare_phi(inst, i));
  return out;
}

}  // namespace

std::uint64_t state_budget() {
  if (const char* env = std::getenv("NULLCODE_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::logic_error&) {
      throw Error(Errc::ParseError, std::string("bad NULLCODE_BUDGET: ") + env);
    }
  }
  return kDefaultStateBudget;
}

RegisterLayout layout_for(const CodeSpec& spec) {
  RegisterLayout l{spec.field().degree(), spec.folding(), spec.folded_length()};
  if (l.register_bits() > 64) throw Error(Errc::BudgetExceeded, "register does not fit in a 64-bit key");
  return l;
}

std::uint64_t pack(const RegisterLayout& layout, const FoldedWord& z) {
  if (z.size() != layout.symbols) throw Error(Errc::LengthMismatch, "word length != register symbols");
  std::uint64_t key = 0;
  const unsigned b = layout.symbol_bits();
  for (Symbol s : z) key = b >= 64 ? s : (key << b) | s;
  return key;
}

FoldedWord unpack(const RegisterLayout& layout, std::uint64_t key) {
  const unsigned b = layout.symbol_bits();
  FoldedWord z(layout.symbols);
  for (std::size_t i = layout.symbols; i-- > 0;) {
    z[i] = key & low_mask(b);
    key = b >= 64 ? 0 : key >> b;
  }
  return z;
}

SparseState::SparseState(RegisterLayout layout, unsigned registers)
    : layout_(layout), registers_(registers) {
  if (registers != 1 && registers != 2) throw Error(Errc::InvalidArgument, "states have one or two registers");
  if (layout.register_bits() * registers > 64)
    throw Error(Errc::BudgetExceeded, "joint basis strings do not fit in a 64-bit key");
}

Amp SparseState::amplitude(std::uint64_t key) const {
  const auto it = amps_.find(key);
  return it == amps_.end() ? Amp{} : it->second;
}

double SparseState::norm_squared() const {
  double s = 0;
  for (const auto& [k, a] : amps_) s += std::norm(a);
  return s;
}

void SparseState::normalize() {
  const double n = std::sqrt(norm_squared());
  if (n == 0) throw Error(Errc::EmptySupport, "cannot normalize the zero vector");
  for (auto& [k, a] : amps_) a /= n;
}

void SparseState::prune(double tol) {
  std::erase_if(amps_, [tol](const auto& kv) { return std::abs(kv.second) < tol; });
}

void SparseState::check_budget(std::uint64_t budget) const {
  if (amps_.size() > budget)
    throw Error(Errc::BudgetExceeded, "state support " + std::to_string(amps_.size()) + " exceeds budget " +
                                          std::to_string(budget) +
                                          "; use a smaller code such as the self-dual toy config");
}

std::uint64_t SparseState::register_value(std::uint64_t key, unsigned reg) const {
  const unsigned b = layout_.register_bits();
  if (registers_ == 1) return key;
  return reg == 0 ? key >> b : key & low_mask(b);
}

std::uint64_t SparseState::join(std::uint64_t first, std::uint64_t second) const {
  return (first << layout_.register_bits()) | second;
}

std::vector<std::vector<double>> qft_matrix(const FieldCtx& field) {
  if (field.order() > 4096) throw Error(Errc::BudgetExceeded, "dense QFT limited to q <= 4096");
  const auto tr = trace_table(field);
  const double scale = 1.0 / std::sqrt(static_cast<double>(field.order()));
  std::vector<std::vector<double>> m(field.order(), std::vector<double>(field.order()));
  for (std::size_t z = 0; z < m.size(); ++z)
    for (std::size_t x = 0; x < m.size(); ++x) m[z][x] = tr[z][x] ? -scale : scale;
  return m;
}

SparseState apply_qft(const SparseState& state, const FieldCtx& field, unsigned reg,
                      std::uint64_t budget) {
  check_field_layout(field, state.layout());
  if (reg >= state.registers()) throw Error(Errc::InvalidArgument, "register index out of range");
  const auto h = qft_matrix(field);
  const unsigned s = field.degree();
  const Elem q = field.order();
  const RegisterLayout& l = state.layout();
  const unsigned base = state.registers() == 2 && reg == 0 ? l.register_bits() : 0;
  const std::size_t digits = l.symbols * l.digits_per_symbol;

  SparseState cur = state;
  for (std::size_t d = 0; d < digits; ++d) {
    const unsigned off = base + static_cast<unsigned>(d) * s;
    const std::uint64_t mask = low_mask(s) << off;
    SparseState next(l, state.registers());
    for (const auto& [key, a] : cur.amplitudes()) {
      const auto x = static_cast<Elem>((key & mask) >> off);
      const std::uint64_t rest = key & ~mask;
      for (Elem z = 0; z < q; ++z) next.add(rest | (std::uint64_t{z} << off), a * h[z][x]);
    }
    next.prune();
    next.check_budget(budget);
    cur = std::move(next);
  }
  return cur;
}

SparseState prepare_phi(const OracleInstance& inst, std::size_t coord) {
  RegisterLayout l = layout_for(inst.spec);
  l.symbols = 1;
  SparseState st(l, 1);
  const BitTable& t = inst.tables.at(coord);
  const std::size_t zeros = t.size() - t.count();
  if (zeros == 0)
    throw Error(Errc::EmptySupport, "table " + std::to_string(coord) + " is identically 1");
  const double amp = 1.0 / std::sqrt(static_cast<double>(zeros));
  for (std::size_t e = 0; e < t.size(); ++e) {
    if (!t.get(e)) st.add(e, amp);
  }
  return st;
}

SparseState prepare_psi(const CodeSpec& spec, std::uint64_t budget) {
  const RegisterLayout l = layout_for(spec);
  SparseState st(l, 1);
  const auto size = spec.size();
  if (!size || *size > budget) throw Error(Errc::BudgetExceeded, "code too large for a state vector");
  const double amp = 1.0 / std::sqrt(static_cast<double>(*size));
  for_each_codeword(spec, [&](const Word& c) { st.add(pack(l, fold(spec, c)), amp); }, budget);
  return st;
}

SparseState tensor_symbols(const std::vector<SparseState>& parts, std::uint64_t budget) {
  if (parts.empty()) throw Error(Errc::InvalidArgument, "nothing to tensor");
  RegisterLayout l = parts.front().layout();
  l.symbols = 0;
  for (const auto& p : parts) {
    if (p.registers() != 1 || p.layout().digit_bits != l.digit_bits ||
        p.layout().digits_per_symbol != l.digits_per_symbol)
      throw Error(Errc::DomainMismatch, "tensor factors have different symbol layouts");
    l.symbols += p.layout().symbols;
  }
  SparseState acc = parts.front();
  RegisterLayout acc_layout = parts.front().layout();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    acc_layout.symbols += parts[i].layout().symbols;
    SparseState next(acc_layout, 1);
    const unsigned shift = parts[i].layout().register_bits();
    for (const auto& [ka, a] : acc.amplitudes())
      for (const auto& [kb, b] : parts[i].amplitudes()) next.add((ka << shift) | kb, a * b);
    next.check_budget(budget);
    acc = std::move(next);
  }
  return acc;
}

SparseState tensor_pair(const SparseState& a, const SparseState& b, std::uint64_t budget) {
  if (a.registers() != 1 || b.registers() != 1 || !(a.layout() == b.layout()))
    throw Error(Errc::DomainMismatch, "pair factors must be single registers with equal layouts");
  SparseState out(a.layout(), 2);
  if (a.support() * b.support() > budget) throw Error(Errc::BudgetExceeded, "joint state exceeds budget");
  for (const auto& [ka, x] : a.amplitudes())
    for (const auto& [kb, y] : b.amplitudes()) out.add(out.join(ka, kb), x * y);
  return out;
}

DecodeFn decoder_fn(const DualDecoder& decoder) {
  return [decoder](const FoldedWord& z) { return decoder(z); };
}

SparseState apply_add(const SparseState& joint) {
  if (joint.registers() != 2) throw Error(Errc::InvalidArgument, "U_add acts on a two-register state");
  SparseState out(joint.layout(), 2);
  for (const auto& [key, a] : joint.amplitudes()) {
    const std::uint64_t x = joint.register_value(key, 0), e = joint.register_value(key, 1);
    out.add(out.join(x, x ^ e), a);
  }
  return out;
}

SparseState apply_decode(const SparseState& joint, const DecodeFn& decode) {
  if (joint.registers() != 2) throw Error(Errc::InvalidArgument, "U_F acts on a two-register state");
  const RegisterLayout& l = joint.layout();
  std::unordered_map<std::uint64_t, std::uint64_t> cache;
  SparseState out(l, 2);
  for (const auto& [key, a] : joint.amplitudes()) {
    const std::uint64_t first = joint.register_value(key, 0), z = joint.register_value(key, 1);
    auto it = cache.find(z);
    if (it == cache.end()) {
      const auto fz = decode(unpack(l, z));
      it = cache.emplace(z, fz ? pack(l, *fz) : 0).first;
    }
    // Characteristic 2: subtraction is XOR.
    out.add(out.join(first ^ it->second, z), a);
  }
  return out;
}

SparseState apply_add_decode(const SparseState& joint, const DecodeFn& decode) {
  return apply_decode(apply_add(joint), decode);
}

std::vector<std::pair<std::uint64_t, double>> measure_register(const SparseState& state, unsigned reg) {
  std::map<std::uint64_t, double> dist;
  for (const auto& [key, a] : state.amplitudes()) dist[state.register_value(key, reg)] += std::norm(a);
  return {dist.begin(), dist.end()};
}

double l2_distance(const SparseState& a, const SparseState& b) {
  double s = 0;
  for (const auto& [k, x] : a.amplitudes()) s += std::norm(x - b.amplitude(k));
  for (const auto& [k, y] : b.amplitudes()) {
    if (!a.amplitudes().contains(k)) s += std::norm(y);
  }
  return std::sqrt(s);
}

GoodBadSpec symbol_weight_goodbad(const CodeSpec& spec, double p, double epsilon) {
  const CodeSpec perp = dual(spec);
  const double limit = (p + epsilon) * static_cast<double>(spec.folded_length()) + 1e-12;
  return {[perp, limit](const FoldedWord& x, const FoldedWord& e) {
    return static_cast<double>(hamming_weight(e)) <= limit && perp.contains(x);
  }};
}

GoodBadSpec unfolded_weight_goodbad(const CodeSpec& spec, std::size_t radius) {
  const CodeSpec perp = dual(spec);
  return {[perp, radius](const FoldedWord& x, const FoldedWord& e) {
    return hamming_weight(unfold(perp, e)) <= radius && perp.contains(x);
  }};
}

GoodBadSpec decoder_goodbad(DecodeFn decode) {
  return {[decode = std::move(decode)](const FoldedWord& x, const FoldedWord& e) {
    FoldedWord z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] ^ e[i];
    const auto fz = decode(z);
    return fz ? *fz == x : hamming_weight(x) == 0;
  }};
}

bool good_set_sound(const CodeSpec& spec, const DecodeFn& decode, const GoodBadSpec& goodbad,
                    std::uint64_t budget) {
  const CodeSpec perp = dual(spec);
  const RegisterLayout l = layout_for(spec);
  const auto perp_size = perp.size();
  if (l.register_bits() > 40) throw Error(Errc::BudgetExceeded, "GOOD soundness check enumerates Sigma^n");
  const std::uint64_t words = std::uint64_t{1} << l.register_bits();
  if (!perp_size || *perp_size > budget / words)
    throw Error(Errc::BudgetExceeded, "GOOD soundness check exceeds budget");
  std::unordered_map<std::uint64_t, std::uint64_t> cache;
  bool sound = true;
  for_each_codeword(perp, [&](const Word& xw) {
    if (!sound) return;
    const FoldedWord x = fold(perp, xw);
    const std::uint64_t xk = pack(l, x);
    for (std::uint64_t ek = 0; ek < words && sound; ++ek) {
      const FoldedWord e = unpack(l, ek);
      if (!goodbad.good(x, e)) continue;
      const std::uint64_t z = xk ^ ek;
      auto it = cache.find(z);
      if (it == cache.end()) {
        const auto fz = decode(unpack(l, z));
        it = cache.emplace(z, fz ? pack(l, *fz) : 0).first;
      }
      sound = it->second == xk;
    }
  }, budget);
  return sound;
}

Lemma51Result lemma51_pipeline(const CodeSpec& spec, const OracleInstance& inst,
                               const DecodeFn& decode, const GoodBadSpec& goodbad,
                               std::uint64_t budget) {
  const FieldCtx& f = spec.field();
  const RegisterLayout l = layout_for(spec);
  const SparseState psi = prepare_psi(spec, budget);
  const SparseState phi = tensor_symbols(single_symbol_states(inst, 0, inst.n()), budget);
  const SparseState v_hat = apply_qft(psi, f, 0, budget);
  const SparseState w_hat = apply_qft(phi, f, 0, budget);

  Lemma51Result r;
  std::vector<std::pair<FoldedWord, std::uint64_t>> es;
  for (const auto& [ek, w] : w_hat.amplitudes()) es.emplace_back(unpack(l, ek), ek);
  std::unordered_map<std::uint64_t, Amp> bad_by_z;
  for (const auto& [xk, v] : v_hat.amplitudes()) {
    const FoldedWord x = unpack(l, xk);
    for (const auto& [e, ek] : es) {
      if (goodbad.good(x, e)) continue;
      const Amp a = v * w_hat.amplitude(ek);
      r.epsilon += std::norm(a);
      bad_by_z[xk ^ ek] += a;
    }
  }
  for (const auto& [z, a] : bad_by_z) r.delta += std::norm(a);
  r.bound = std::sqrt(r.epsilon) + std::sqrt(r.delta);

  const SparseState joint = tensor_pair(v_hat, w_hat, budget);
  r.actual = apply_qft(apply_add_decode(joint, decode), f, 1, budget);

  r.ideal = SparseState(l, 2);
  const double scale = std::pow(2.0, l.register_bits() / 2.0);
  for (const auto& [z, v] : psi.amplitudes()) {
    const Amp w = phi.amplitude(z);
    if (w != Amp{}) r.ideal.add(r.ideal.join(0, z), scale * v * w);
  }
  r.ideal_norm = std::sqrt(r.ideal.norm_squared());
  r.l2_distance = l2_distance(r.actual, r.ideal);

  if (r.ideal_norm == 0) {
    r.tv_distance = 1;
  } else {
    std::unordered_map<std::uint64_t, double> diff;
    for (const auto& [z, pr] : measure_register(r.actual, 1)) diff[z] += pr;
    for (const auto& [z, pr] : measure_register(r.ideal, 1)) diff[z] -= pr / (r.ideal_norm * r.ideal_norm);
    for (const auto& [z, d] : diff) r.tv_distance += std::abs(d) / 2;
  }
  return r;
}

SmpMessage alice_stage(const OracleInstance& inst) {
  const Split s = make_split(inst);
  return {single_symbol_states(inst, 0, s.half())};
}

SmpMessage bob_stage(const OracleInstance& inst) {
  const Split s = make_split(inst);
  return {single_symbol_states(inst, s.half(), s.n)};
}

Alg1Result charlie_stage(const CodeSpec& spec, const DecodeFn& decode, const SmpMessage& from_alice,
                         const SmpMessage& from_bob, std::uint64_t budget) {
  const FieldCtx& f = spec.field();
  const RegisterLayout l = layout_for(spec);
  std::vector<SparseState> parts = from_alice.states;
  parts.insert(parts.end(), from_bob.states.begin(), from_bob.states.end());
  if (parts.size() != spec.folded_length())
    throw Error(Errc::LengthMismatch, "received states do not cover every coordinate");
  const SparseState phi = tensor_symbols(parts, budget);
  const SparseState psi = prepare_psi(spec, budget);
  const SparseState eta = tensor_pair(apply_qft(psi, f, 0, budget), apply_qft(phi, f, 0, budget), budget);
  const SparseState out = apply_qft(apply_add_decode(eta, decode), f, 1, budget);
  Alg1Result r;
  for (const auto& [z, pr] : measure_register(out, 1)) r.distribution.emplace_back(unpack(l, z), pr);
  return r;
}

Alg1Result run_alg1(const OracleInstance& inst, const DecodeFn& decode, std::uint64_t budget) {
  const SmpMessage a = alice_stage(inst);
  const SmpMessage b = bob_stage(inst);
  Alg1Result r = charlie_stage(inst.spec, decode, a, b, budget);
  for (const auto& [z, pr] : r.distribution) {
    if (verify(inst, z)) r.success_probability += pr;
  }
  return r;
}

Claim66Result claim66_stats(const FieldCtx& field, std::uint64_t sigma_size, const Bias& p,
                            std::uint64_t trials, std::uint64_t seed) {
  if (!std::has_single_bit(sigma_size) || std::countr_zero(sigma_size) % field.degree() != 0)
    throw Error(Errc::InvalidArgument, "|Sigma| must be a power of q");
  if (sigma_size > 64) throw Error(Errc::BudgetExceeded, "claim statistics limited to |Sigma| <= 64");
  const bool exact = trials == 0;
  if (exact && sigma_size > 20) throw Error(Errc::BudgetExceeded, "exact mode needs |Sigma| <= 20");
  const unsigned s = field.degree();
  const unsigned m = static_cast<unsigned>(std::countr_zero(sigma_size)) / s;
  const std::size_t sig = static_cast<std::size_t>(sigma_size);

  // neg[e] marks the t with character (-1)^{sum_j Tr(e_j t_j)} = -1.
  std::vector<std::uint64_t> neg(sig, 0);
  for (std::size_t e = 0; e < sig; ++e)
    for (std::size_t t = 0; t < sig; ++t) {
      int parity = 0;
      for (unsigned j = 0; j < m; ++j) {
        const auto ej = static_cast<Elem>((e >> (j * s)) & low_mask(s));
        const auto tj = static_cast<Elem>((t >> (j * s)) & low_mask(s));
        parity ^= field.trace(field.mul(ej, tj));
      }
      if (parity) neg[e] |= std::uint64_t{1} << t;
    }
  auto w_sq = [&](std::uint64_t tmask, std::size_t e) {
    const int size = std::popcount(tmask);
    if (size == 0) return 0.0;
    const double amp = size - 2 * std::popcount(tmask & neg[e]);
    return amp * amp / (static_cast<double>(sig) * size);
  };

  Claim66Result r;
  r.exact = exact;
  r.per_element_means.assign(sig, 0);
  r.per_element_se.assign(sig, 0);
  const double pv = p.value();
  r.prob_empty = std::pow(pv, static_cast<double>(sig));

  if (exact) {
    for (std::uint64_t tmask = 0; tmask < (std::uint64_t{1} << sig); ++tmask) {
      const int zeros = std::popcount(tmask);
      const double weight = std::pow(1 - pv, zeros) * std::pow(pv, static_cast<double>(sig) - zeros);
      if (weight == 0) continue;
      for (std::size_t e = 0; e < sig; ++e) r.per_element_means[e] += weight * w_sq(tmask, e);
    }
    double gap = 0;
    for (std::size_t e = 1; e < sig; ++e)
      for (std::size_t e2 = e + 1; e2 < sig; ++e2)
        gap = std::max(gap, std::abs(r.per_element_means[e] - r.per_element_means[e2]));
    r.max_nonzero_z = gap;
  } else {
    Rng rng = make_rng(seed, 66);
    const unsigned __int128 threshold = static_cast<unsigned __int128>(p.num()) << 64;
    std::vector<double> sumsq(sig, 0);
    std::uint64_t empty = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
      std::uint64_t tmask = 0;
      for (std::size_t t = 0; t < sig; ++t) {
        const bool one = static_cast<unsigned __int128>(rng()) * p.den() < threshold;
        if (!one) tmask |= std::uint64_t{1} << t;
      }
      empty += tmask == 0;
      for (std::size_t e = 0; e < sig; ++e) {
        const double v = w_sq(tmask, e);
        r.per_element_means[e] += v;
        sumsq[e] += v * v;
      }
    }
    const double n = static_cast<double>(trials);
    for (std::size_t e = 0; e < sig; ++e) {
      r.per_element_means[e] /= n;
      const double var = std::max(0.0, sumsq[e] / n - r.per_element_means[e] * r.per_element_means[e]);
      r.per_element_se[e] = std::sqrt(var / n);
    }
    r.prob_empty = static_cast<double>(empty) / n;
    for (std::size_t e = 1; e < sig; ++e)
      for (std::size_t e2 = e + 1; e2 < sig; ++e2) {
        const double se = std::hypot(r.per_element_se[e], r.per_element_se[e2]);
        const double d = std::abs(r.per_element_means[e] - r.per_element_means[e2]);
        if (se > 0) r.max_nonzero_z = std::max(r.max_nonzero_z, d / se);
        else if (d > 0) r.max_nonzero_z = INFINITY;
      }
  }
  r.mean_w0_sq = r.per_element_means[0];
  r.se_w0_sq = r.per_element_se[0];
  r.mean_w0_sq_nonempty = r.prob_empty < 1 ? r.mean_w0_sq / (1 - r.prob_empty) : 0;
  return r;
}

double product_law_error(const OracleInstance& inst, std::uint64_t budget) {
  const FieldCtx& f = inst.spec.field();
  const RegisterLayout l = layout_for(inst.spec);
  const std::vector<SparseState> parts = single_symbol_states(inst, 0, inst.n());
  const SparseState w_hat = apply_qft(tensor_symbols(parts, budget), f, 0, budget);
  std::vector<SparseState> factors;
  for (const auto& p : parts) factors.push_back(apply_qft(p, f, 0, budget));
  if (l.register_bits() >= 40) throw Error(Errc::BudgetExceeded, "product-law check enumerates Sigma^n");
  double worst = 0;
  for (std::uint64_t ek = 0; ek < (std::uint64_t{1} << l.register_bits()); ++ek) {
    const FoldedWord e = unpack(l, ek);
    Amp prod = 1;
    for (std::size_t i = 0; i < e.size(); ++i) prod *= factors[i].amplitude(e[i]);
    worst = std::max(worst, std::abs(prod - w_hat.amplitude(ek)));
  }
  return worst;
}

}  // namespace nullcode
