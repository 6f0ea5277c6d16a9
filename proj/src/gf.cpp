#include "nullcode/gf.hpp"

#include <bit>
#include <string>

#include "nullcode/error.hpp"

namespace nullcode {

struct FieldCtx::Tables {
  std::vector<Elem> exp;  // length 2(q-1) so log sums need no reduction
  std::vector<std::uint32_t> log;
};

namespace {

constexpr unsigned kMaxDegree = 31;
constexpr unsigned kTableDegree = 16;

unsigned poly_degree(std::uint64_t p) { return p == 0 ? 0 : 63 - std::countl_zero(p); }

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
  const unsigned dm = poly_degree(m);
  while (a != 0 && poly_degree(a) >= dm) a ^= m << (poly_degree(a) - dm);
  return a;
}

}  // namespace

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= v; ++p) {
    if (v % p == 0) {
      out.push_back(p);
      while (v % p == 0) v /= p;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

bool is_irreducible(std::uint32_t poly, unsigned degree) {
  if (degree == 0 || degree > kMaxDegree) return false;
  if (poly_degree(poly) != degree) return false;
  if (degree == 1) return true;
  if ((poly & 1u) == 0) return false;  // divisible by x
  // Trial division by every polynomial of degree 1..degree/2.
  for (unsigned d = 1; d <= degree / 2; ++d) {
    for (std::uint64_t f = std::uint64_t{1} << d; f < (std::uint64_t{1} << (d + 1)); ++f) {
      if (poly_mod(poly, f) == 0) return false;
    }
  }
  return true;
}

std::uint32_t default_modulus(unsigned degree) {
  switch (degree) {
    case 1: return 0x3;      // x + 1
    case 2: return 0x7;      // x^2 + x + 1
    case 4: return 0x13;     // x^4 + x + 1
    case 6: return 0x43;     // x^6 + x + 1
    case 8: return 0x11d;    // x^8 + x^4 + x^3 + x^2 + 1
    case 12: return 0x1053;  // x^12 + x^6 + x^4 + x + 1
    default: break;
  }
  if (degree == 0 || degree > kMaxDegree) {
    throw Error(Errc::InvalidArgument, "field degree must be in [1, 31], got " + std::to_string(degree));
  }
  for (std::uint64_t p = (std::uint64_t{1} << degree) | 1; p < (std::uint64_t{1} << (degree + 1)); p += 2) {
    if (is_irreducible(static_cast<std::uint32_t>(p), degree)) return static_cast<std::uint32_t>(p);
  }
  throw Error(Errc::InvalidArgument, "no irreducible polynomial found");
}

FieldCtx::FieldCtx(unsigned degree, std::uint32_t modulus) : s_(degree), modulus_(modulus) {
  if (!is_irreducible(modulus, degree)) {
    throw Error(Errc::InvalidArgument, "modulus " + std::to_string(modulus) +
                                           " is not an irreducible polynomial of degree " +
                                           std::to_string(degree));
  }
  // Tr is F_2-linear, so it is determined by its values on the basis x^j.
  for (unsigned j = 0; j < s_; ++j) {
    Elem acc = 0;
    Elem y = Elem{1} << j;
    for (unsigned i = 0; i < s_; ++i) {
      acc ^= y;
      y = mul_slow(y, y);
    }
    if (acc & 1u) trace_mask_ |= Elem{1} << j;
  }
  if (s_ <= kTableDegree) {
    const std::uint32_t q = order();
    auto t = std::make_shared<Tables>();
    const Elem g = find_generator(*this).gamma.value;
    t->exp.resize(2 * (q - 1));
    t->log.assign(q, 0);
    Elem x = 1;
    for (std::uint32_t i = 0; i < q - 1; ++i) {
      t->exp[i] = x;
      t->exp[i + q - 1] = x;
      t->log[x] = i;
      x = mul_slow(x, g);
    }
    tables_ = std::move(t);
  }
}

FieldCtx FieldCtx::standard(unsigned degree) { return FieldCtx(degree, default_modulus(degree)); }

Elem FieldCtx::mul_slow(Elem a, Elem b) const {
  std::uint64_t prod = 0;
  std::uint64_t aa = a;
  while (b != 0) {
    if (b & 1u) prod ^= aa;
    aa <<= 1;
    b >>= 1;
  }
  return static_cast<Elem>(poly_mod(prod, modulus_));
}

Elem FieldCtx::mul(Elem a, Elem b) const {
  if (a == 0 || b == 0) return 0;
  if (tables_) return tables_->exp[tables_->log[a] + tables_->log[b]];
  return mul_slow(a, b);
}

Elem FieldCtx::inv(Elem a) const {
  if (a == 0) throw Error(Errc::InvOfZero, "inverse of 0 in GF(2^" + std::to_string(s_) + ")");
  if (tables_) {
    const std::uint32_t l = tables_->log[a];
    return tables_->exp[l == 0 ? 0 : (order() - 1) - l];
  }
  return pow(a, order() - 2);
}

Elem FieldCtx::pow(Elem a, std::uint64_t e) const {
  Elem result = 1;
  Elem base = a;
  while (e != 0) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

int FieldCtx::trace(Elem a) const { return std::popcount(a & trace_mask_) & 1; }

std::uint64_t FieldCtx::multiplicative_order(Elem a) const {
  if (a == 0) throw Error(Errc::InvalidArgument, "0 has no multiplicative order");
  std::uint64_t ord = order() - 1;
  for (std::uint64_t p : prime_factors(order() - 1)) {
    while (ord % p == 0 && pow(a, ord / p) == 1) ord /= p;
  }
  return ord;
}

FieldElem make_elem(const FieldCtx& ctx, Elem value) {
  if (!ctx.contains(value)) {
    throw Error(Errc::InvalidArgument, "value " + std::to_string(value) + " outside GF(2^" +
                                           std::to_string(ctx.degree()) + ")");
  }
  return FieldElem{value, ctx.degree(), ctx.modulus()};
}

namespace {

void check_domain(const FieldCtx& ctx, const FieldElem& a) {
  if (a.degree != ctx.degree() || a.modulus != ctx.modulus()) {
    throw Error(Errc::DomainMismatch, "operand belongs to GF(2^" + std::to_string(a.degree) +
                                          ") mod " + std::to_string(a.modulus));
  }
  if (!ctx.contains(a.value)) throw Error(Errc::InvalidArgument, "operand out of range");
}

}  // namespace

FieldElem field_arith(const FieldCtx& ctx, FieldOp op, const FieldElem& a,
                      std::variant<FieldElem, std::uint64_t> b) {
  check_domain(ctx, a);
  switch (op) {
    case FieldOp::Add:
    case FieldOp::Mul: {
      const auto* rhs = std::get_if<FieldElem>(&b);
      if (rhs == nullptr) throw Error(Errc::InvalidArgument, "add/mul need an element operand");
      check_domain(ctx, *rhs);
      const Elem v = op == FieldOp::Add ? ctx.add(a.value, rhs->value) : ctx.mul(a.value, rhs->value);
      return make_elem(ctx, v);
    }
    case FieldOp::Inv:
      return make_elem(ctx, ctx.inv(a.value));
    case FieldOp::Pow: {
      const auto* e = std::get_if<std::uint64_t>(&b);
      if (e == nullptr) throw Error(Errc::InvalidArgument, "pow needs an integer exponent");
      return make_elem(ctx, ctx.pow(a.value, *e));
    }
  }
  throw Error(Errc::InvalidArgument, "unknown field operation");
}

int trace(const FieldCtx& ctx, const FieldElem& x) {
  check_domain(ctx, x);
  return ctx.trace(x.value);
}

Generator find_generator(const FieldCtx& ctx) {
  const std::uint64_t group = ctx.order() - 1;
  const auto factors = prime_factors(group);
  for (Elem g = 1; g < ctx.order(); ++g) {
    bool ok = true;
    for (std::uint64_t p : factors) {
      if (ctx.pow(g, group / p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return Generator{FieldElem{g, ctx.degree(), ctx.modulus()}};
  }
  throw Error(Errc::InvalidArgument, "field has no generator");  // unreachable for a field
}

}  // namespace nullcode
