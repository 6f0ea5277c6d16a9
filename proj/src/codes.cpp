#include "nullcode/codes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nullcode/error.hpp"

namespace nullcode {

namespace {

Mat grs_generator(const FieldCtx& f, const Vec& points, const Vec& v, int degree) {
  const std::size_t len = points.size();
  Mat g(static_cast<std::size_t>(degree + 1), Vec(len));
  for (std::size_t i = 0; i < len; ++i) {
    Elem x = v[i];
    for (int j = 0; j <= degree; ++j) {
      g[static_cast<std::size_t>(j)][i] = x;
      x = f.mul(x, points[i]);
    }
  }
  return g;
}

void check_folding(std::size_t length, unsigned folding) {
  if (folding == 0 || length % folding != 0)
    throw Error(Errc::InvalidArgument, "folding parameter must divide the code length");
}

}  // namespace

CodeSpec CodeSpec::grs_folded(const FieldCtx& field, Elem gamma, int degree, unsigned folding,
                              Vec multipliers) {
  const std::size_t len = field.order() - 1;
  check_folding(len, folding);
  if (!field.contains(gamma) || gamma == 0 || field.multiplicative_order(gamma) != len)
    throw Error(Errc::InvalidArgument, "gamma is not a generator of the multiplicative group");
  if (degree < 0 || static_cast<std::size_t>(degree) >= len)
    throw Error(Errc::InvalidArgument, "degree bound must lie in [0, N-1]");
  if (multipliers.empty()) multipliers.assign(len, 1);
  if (multipliers.size() != len) throw Error(Errc::LengthMismatch, "multiplier vector length != N");
  for (Elem x : multipliers) {
    if (x == 0 || !field.contains(x)) throw Error(Errc::InvalidArgument, "multipliers must be nonzero field elements");
  }
  Impl impl{CodeKind::GrsFolded, field, gamma, degree, len, folding, std::move(multipliers), {}, {}, {}};
  impl.points.resize(len);
  Elem x = 1;
  for (std::size_t i = 0; i < len; ++i) {
    impl.points[i] = x;
    x = field.mul(x, gamma);
  }
  impl.genmat = grs_generator(field, impl.points, impl.multipliers, degree);
  impl.echelon = row_reduce(field, impl.genmat, len);
  return CodeSpec(std::make_shared<const Impl>(std::move(impl)));
}

CodeSpec CodeSpec::generic_linear(const FieldCtx& field, Mat genmat, std::size_t length,
                                  unsigned folding) {
  check_folding(length, folding);
  for (const auto& row : genmat) {
    if (row.size() != length) throw Error(Errc::LengthMismatch, "generator row length != N");
    for (Elem x : row) {
      if (!field.contains(x)) throw Error(Errc::InvalidArgument, "generator entry outside the field");
    }
  }
  Impl impl{CodeKind::GenericLinear, field, 1, -1, length, folding, {}, {}, std::move(genmat), {}};
  impl.echelon = row_reduce(field, impl.genmat, length);
  return CodeSpec(std::make_shared<const Impl>(std::move(impl)));
}

std::uint64_t CodeSpec::alphabet_size() const {
  if (symbol_bits() > 63) throw Error(Errc::BudgetExceeded, "alphabet does not fit in 63 bits");
  return std::uint64_t{1} << symbol_bits();
}

std::optional<std::uint64_t> CodeSpec::size() const {
  const std::size_t bits = dimension() * field().degree();
  if (bits > 62) return std::nullopt;
  return std::uint64_t{1} << bits;
}

bool CodeSpec::contains(const Word& w) const {
  if (w.size() != length()) throw Error(Errc::LengthMismatch, "word length != N");
  return in_row_space(field(), echelon(), w);
}

bool CodeSpec::contains(const FoldedWord& w) const { return contains(unfold(*this, w)); }

CodeSpec paper_preset(int t, std::string* warning) {
  if (t < 1) throw Error(Errc::InvalidArgument, "preset parameter t must be >= 1");
  if (t > 4) throw Error(Errc::BudgetExceeded, "preset field size exceeds supported degree");
  const unsigned s = 2 * static_cast<unsigned>(t);
  const FieldCtx field = FieldCtx::standard(s);
  const std::size_t len = field.order() - 1;
  const unsigned folding = (1u << t) + 1;
  const int k = static_cast<int>(len / 10);
  if (k == 0 && warning) *warning = "degenerate preset: degree bound k = 0";
  return CodeSpec::grs_folded(field, find_generator(field).gamma.value, k, folding);
}

CodeSpec toy_selfdual() {
  Mat g{{1, 0, 0, 0, 0, 1, 1, 1},
        {0, 1, 0, 0, 1, 0, 1, 1},
        {0, 0, 1, 0, 1, 1, 0, 1},
        {0, 0, 0, 1, 1, 1, 1, 0}};
  return CodeSpec::generic_linear(FieldCtx::standard(1), std::move(g), 8, 2);
}

Word encode_unfolded(const CodeSpec& spec, const Vec& message) {
  const Mat& g = spec.generator_matrix();
  if (spec.kind() == CodeKind::GrsFolded ? message.size() > g.size() : message.size() != g.size())
    throw Error(Errc::LengthMismatch, "message length does not match the code");
  const FieldCtx& f = spec.field();
  Word c(spec.length(), 0);
  for (std::size_t j = 0; j < message.size(); ++j) {
    if (!f.contains(message[j])) throw Error(Errc::InvalidArgument, "message symbol outside the field");
    if (message[j] == 0) continue;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] ^= f.mul(message[j], g[j][i]);
  }
  return c;
}

FoldedWord encode(const CodeSpec& spec, const Vec& message) {
  return fold(spec, encode_unfolded(spec, message));
}

FoldedWord fold(const CodeSpec& spec, const Word& x) {
  if (x.size() != spec.length()) throw Error(Errc::LengthMismatch, "unfolded word length != N");
  if (spec.symbol_bits() > 64) throw Error(Errc::BudgetExceeded, "folded symbol exceeds 64 bits");
  const unsigned m = spec.folding();
  const unsigned s = spec.field().degree();
  FoldedWord z(spec.folded_length(), 0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    Symbol sym = 0;
    for (unsigned j = 0; j < m; ++j) sym = (sym << s) | x[i * m + j];
    z[i] = sym;
  }
  return z;
}

Word unfold(const CodeSpec& spec, const FoldedWord& z) {
  if (z.size() != spec.folded_length()) throw Error(Errc::LengthMismatch, "folded word length != n");
  if (spec.symbol_bits() > 64) throw Error(Errc::BudgetExceeded, "folded symbol exceeds 64 bits");
  const unsigned m = spec.folding();
  const unsigned s = spec.field().degree();
  const Symbol mask = (Symbol{1} << s) - 1;
  Word x(spec.length(), 0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (unsigned j = 0; j < m; ++j)
      x[i * m + j] = static_cast<Elem>((z[i] >> (s * (m - 1 - j))) & mask);
  }
  return x;
}

std::size_t hamming_weight(const Word& w) {
  return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](Elem x) { return x != 0; }));
}

std::size_t hamming_weight(const FoldedWord& w) {
  return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](Symbol x) { return x != 0; }));
}

std::size_t hamming_distance(const Word& a, const Word& b) {
  if (a.size() != b.size()) throw Error(Errc::LengthMismatch, "words of different length");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

CodeSpec dual(const CodeSpec& spec) {
  const FieldCtx& f = spec.field();
  const std::size_t len = spec.length();
  Mat perp = null_space(f, spec.generator_matrix(), len);
  if (spec.kind() != CodeKind::GrsFolded)
    return CodeSpec::generic_linear(f, std::move(perp), len, spec.folding());

  const int dual_degree = static_cast<int>(len) - spec.degree() - 2;
  if (dual_degree < 0) return CodeSpec::generic_linear(f, {}, len, spec.folding());

  // v' spans the null space of the degree-(N-2) GRS generator with
  // multipliers v, a rank N-1 matrix.
  Vec points(len);
  for (std::size_t i = 0; i < len; ++i) points[i] = spec.evaluation_point(i);
  const Mat wide = grs_generator(f, points, spec.multipliers(), static_cast<int>(len) - 2);
  Mat kernel = null_space(f, wide, len);
  if (kernel.size() != 1) throw std::logic_error("dual multiplier kernel is not one-dimensional");
  Vec v = std::move(kernel.front());
  const Elem scale = f.div(f.inv(spec.multipliers()[0]), v[0]);
  for (auto& x : v) x = f.mul(x, scale);

  for (std::size_t i = 0; i < len; ++i) {
    if (v[i] != f.div(spec.evaluation_point(i), spec.multipliers()[i]))
      throw std::logic_error("dual multipliers disagree with gamma^i / v_i");
  }
  CodeSpec out = CodeSpec::grs_folded(f, spec.gamma(), dual_degree, spec.folding(), std::move(v));
  if (!same_row_space(f, out.generator_matrix(), perp, len))
    throw std::logic_error("dual GRS does not span the null space");
  return out;
}

bool same_code(const CodeSpec& a, const CodeSpec& b) {
  return a.field() == b.field() && a.length() == b.length() && a.folding() == b.folding() &&
         same_row_space(a.field(), a.generator_matrix(), b.generator_matrix(), a.length());
}

void for_each_codeword(const CodeSpec& spec, const std::function<void(const Word&)>& fn,
                       std::uint64_t budget) {
  const auto total = spec.size();
  if (!total || *total > budget) throw Error(Errc::BudgetExceeded, "code too large to enumerate");
  const FieldCtx& f = spec.field();
  const Mat& basis = spec.echelon().rows;
  const Elem q = f.order();
  Vec digits(basis.size(), 0);
  Word c(spec.length(), 0);
  for (std::uint64_t idx = 0; idx < *total; ++idx) {
    fn(c);
    // Odometer step; each digit change adds (new - old) * basis row.
    for (std::size_t j = 0; j < digits.size(); ++j) {
      const Elem old = digits[j];
      const Elem next = old + 1 == q ? 0 : old + 1;
      digits[j] = next;
      const Elem delta = old ^ next;
      for (std::size_t i = 0; i < c.size(); ++i) c[i] ^= f.mul(delta, basis[j][i]);
      if (next != 0) break;
    }
  }
}

std::vector<Word> enumerate_codewords(const CodeSpec& spec, std::uint64_t budget) {
  std::vector<Word> out;
  if (const auto total = spec.size(); total && *total <= budget) out.reserve(*total);
  for_each_codeword(spec, [&](const Word& c) { out.push_back(c); }, budget);
  return out;
}

std::size_t minimum_distance(const CodeSpec& spec, std::uint64_t budget) {
  if (spec.kind() == CodeKind::GrsFolded)
    return spec.length() - static_cast<std::size_t>(spec.degree());
  if (spec.dimension() == 0) return spec.length() + 1;
  std::size_t best = spec.length();
  for_each_codeword(spec, [&](const Word& c) {
    const std::size_t w = hamming_weight(c);
    if (w != 0) best = std::min(best, w);
  }, budget);
  return best;
}

std::size_t unique_decoding_radius(const CodeSpec& spec, std::uint64_t budget) {
  return (minimum_distance(spec, budget) - 1) / 2;
}

namespace {

// Polynomial helpers; coefficient j multiplies x^j.
Elem poly_eval(const FieldCtx& f, const Vec& p, Elem x) {
  Elem acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = f.mul(acc, x) ^ *it;
  return acc;
}

// Quotient of num / den when the division is exact.
std::optional<Vec> poly_exact_div(const FieldCtx& f, Vec num, const Vec& den) {
  std::size_t dd = den.size();
  while (dd > 0 && den[dd - 1] == 0) --dd;
  if (dd == 0) throw Error(Errc::DivisionByZero, "polynomial division by zero");
  const Elem lead_inv = f.inv(den[dd - 1]);
  if (num.size() < dd) {
    for (Elem x : num) {
      if (x != 0) return std::nullopt;
    }
    return Vec{};
  }
  Vec quot(num.size() - dd + 1, 0);
  for (std::size_t i = num.size(); i-- >= dd;) {
    const Elem c = f.mul(num[i], lead_inv);
    quot[i - dd + 1] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < dd; ++j) num[i - dd + 1 + j] ^= f.mul(c, den[j]);
  }
  for (std::size_t i = 0; i + 1 < dd; ++i) {
    if (num[i] != 0) return std::nullopt;
  }
  return quot;
}

}  // namespace

std::optional<Word> berlekamp_welch(const CodeSpec& spec, const Word& z) {
  if (spec.kind() != CodeKind::GrsFolded)
    throw Error(Errc::InvalidArgument, "Berlekamp-Welch needs a GRS code");
  if (z.size() != spec.length()) throw Error(Errc::LengthMismatch, "word length != N");
  const FieldCtx& f = spec.field();
  const std::size_t len = spec.length();
  const std::size_t k = static_cast<std::size_t>(spec.degree());
  const std::size_t t = unique_decoding_radius(spec);

  Vec y(len);
  for (std::size_t i = 0; i < len; ++i) y[i] = f.div(z[i], spec.multipliers()[i]);

  // Unknowns: Q_0..Q_{t+k}, then E_0..E_{t-1} with E monic of degree t.
  // Equation i: Q(a_i) + y_i E_low(a_i) = y_i a_i^t.
  const std::size_t nq = t + k + 1;
  const std::size_t cols = nq + t;
  Mat a(len, Vec(cols, 0));
  Vec rhs(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    const Elem pt = spec.evaluation_point(i);
    Elem pw = 1;
    for (std::size_t j = 0; j < nq; ++j) {
      a[i][j] = pw;
      if (j < t) a[i][nq + j] = f.mul(y[i], pw);
      if (j == t) rhs[i] = f.mul(y[i], pw);
      pw = f.mul(pw, pt);
    }
  }
  const auto sol = solve(f, a, rhs, cols);
  if (!sol) return std::nullopt;
  Vec q(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(nq));
  Vec e(sol->begin() + static_cast<std::ptrdiff_t>(nq), sol->end());
  e.push_back(1);
  auto msg = poly_exact_div(f, std::move(q), e);
  if (!msg) return std::nullopt;
  while (!msg->empty() && msg->back() == 0) msg->pop_back();
  if (msg->size() > k + 1) return std::nullopt;

  Word c(len);
  for (std::size_t i = 0; i < len; ++i)
    c[i] = f.mul(spec.multipliers()[i], poly_eval(f, *msg, spec.evaluation_point(i)));
  if (hamming_distance(c, z) > t) return std::nullopt;
  return c;
}

std::vector<Word> list_decode(const CodeSpec& spec, const Word& z, std::size_t radius,
                              DecodePath path, std::uint64_t budget) {
  if (z.size() != spec.length()) throw Error(Errc::LengthMismatch, "word length != N");
  const bool grs = spec.kind() == CodeKind::GrsFolded;
  const bool bw_ok = grs && radius <= unique_decoding_radius(spec);
  if (path == DecodePath::BerlekampWelch && !bw_ok)
    throw Error(Errc::InvalidArgument, "radius exceeds the Berlekamp-Welch range");

  if (path == DecodePath::BerlekampWelch || (path == DecodePath::Auto && bw_ok)) {
    std::vector<Word> out;
    if (auto c = berlekamp_welch(spec, z); c && hamming_distance(*c, z) <= radius)
      out.push_back(std::move(*c));
    return out;
  }

  std::vector<Word> out;
  for_each_codeword(spec, [&](const Word& c) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < c.size() && d <= radius; ++i) d += c[i] != z[i];
    if (d <= radius) out.push_back(c);
  }, budget);
  std::sort(out.begin(), out.end());
  return out;
}

DecoderParams make_decoder_params(const CodeSpec& spec, double p, double epsilon) {
  if (!(p >= 0 && p <= 1) || !(epsilon >= 0))
    throw Error(Errc::InvalidArgument, "bias must lie in [0,1] and slack must be non-negative");
  DecoderParams params{p, epsilon, 0};
  params.radius_unfolded =
      static_cast<std::size_t>(std::floor((p + epsilon) * static_cast<double>(spec.length())));
  const std::size_t unique = unique_decoding_radius(dual(spec));
  if (params.radius_unfolded > unique)
    throw Error(Errc::InvalidArgument, "decoding radius " + std::to_string(params.radius_unfolded) +
                                           " exceeds the dual's unique-decoding radius " +
                                           std::to_string(unique));
  return params;
}

DualDecoder::DualDecoder(const CodeSpec& spec, DecoderParams params)
    : dual_(dual(spec)), params_(params) {}

std::optional<Word> DualDecoder::decode_unfolded(const Word& z) const {
  auto list = list_decode(dual_, z, params_.radius_unfolded);
  if (list.size() != 1) return std::nullopt;
  return std::move(list.front());
}

std::optional<FoldedWord> DualDecoder::operator()(const FoldedWord& z) const {
  auto x = decode_unfolded(unfold(dual_, z));
  if (!x) return std::nullopt;
  return fold(dual_, *x);
}

std::optional<FoldedWord> dual_decode(const CodeSpec& spec, const DecoderParams& params,
                                      const FoldedWord& z) {
  return DualDecoder(spec, params)(z);
}

std::size_t agreement_threshold(double zeta, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(zeta * static_cast<double>(n) - 1e-9));
}

std::uint64_t list_recover_count(const CodeSpec& spec, const std::vector<std::vector<Symbol>>& sets,
                                 double zeta, std::uint64_t budget) {
  if (sets.size() != spec.folded_length()) throw Error(Errc::LengthMismatch, "need one set per folded coordinate");
  if (!(zeta > 0 && zeta <= 1)) throw Error(Errc::InvalidArgument, "zeta must lie in (0, 1]");
  const std::size_t need = agreement_threshold(zeta, sets.size());
  std::uint64_t count = 0;
  for_each_codeword(spec, [&](const Word& c) {
    const FoldedWord z = fold(spec, c);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < z.size(); ++i)
      hits += std::binary_search(sets[i].begin(), sets[i].end(), z[i]);
    count += hits >= need;
  }, budget);
  return count;
}

LrCheck lr_param_check(double N, double m, double k, double ell, double s, double r, double zeta,
                       double q) {
  if (!(N > 0 && m > 0 && s > 0 && r > 0 && q > 0 && ell >= 0 && zeta > 0 && zeta <= 1) || s > m)
    throw Error(Errc::InvalidArgument, "list-recovery parameters out of range");
  if (m - s + 1 == 0) throw Error(Errc::DivisionByZero, "m - s + 1 = 0");
  if (k == 0) throw Error(Errc::DivisionByZero, "k = 0");
  LrCheck out;
  const double root = 1.0 / (s + 1);
  out.lhs1 = zeta * N / m;
  out.rhs1 = (1 + s / r) * std::pow(N * ell * std::pow(k, s), root) / (m - s + 1);
  out.ineq1 = out.lhs1 >= out.rhs1;
  out.lhs2 = (r + s) * std::pow(N * ell / k, root);
  out.rhs2 = q;
  out.ineq2 = out.lhs2 < out.rhs2;
  out.list_bound = std::pow(static_cast<long double>(q), static_cast<long double>(s));
  return out;
}

}  // namespace nullcode
