#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace nullcode {

// Polynomial-basis coordinates of an element of GF(2^s); the x^0 coefficient
// sits in the least-significant bit.
using Elem = std::uint32_t;

/// Arithmetic context for GF(2^s), 1 <= s <= 31.
///
/// The modulus is an (s+1)-bit mask of an irreducible polynomial over F_2.
/// Contexts are immutable and cheap to copy (lookup tables are shared), so
/// they can be handed to any number of workers.
class FieldCtx {
 public:
  FieldCtx(unsigned degree, std::uint32_t modulus);

  // Uses the shipped modulus for s in {1,2,4,6,8,12}, otherwise the smallest
  // irreducible polynomial of degree s.
  static FieldCtx standard(unsigned degree);

  unsigned degree() const { return s_; }
  std::uint32_t modulus() const { return modulus_; }
  std::uint32_t order() const { return std::uint32_t{1} << s_; }
  bool contains(Elem a) const { return a < order(); }

  Elem add(Elem a, Elem b) const { return a ^ b; }
  Elem sub(Elem a, Elem b) const { return a ^ b; }
  Elem neg(Elem a) const { return a; }
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;
  // Absolute trace to F_2: x + x^2 + x^4 + ... + x^(2^(s-1)).
  int trace(Elem a) const;
  // Multiplicative order of a != 0.
  std::uint64_t multiplicative_order(Elem a) const;

  bool operator==(const FieldCtx& o) const { return s_ == o.s_ && modulus_ == o.modulus_; }
  bool operator!=(const FieldCtx& o) const { return !(*this == o); }

 private:
  struct Tables;

  Elem mul_slow(Elem a, Elem b) const;

  unsigned s_;
  std::uint32_t modulus_;
  std::uint32_t trace_mask_ = 0;
  std::shared_ptr<const Tables> tables_;
};

std::uint32_t default_modulus(unsigned degree);
bool is_irreducible(std::uint32_t poly, unsigned degree);
std::vector<std::uint64_t> prime_factors(std::uint64_t v);

/// An element tagged with the field it belongs to. The tag lets the checked
/// arithmetic entry point reject operands from a different field.
struct FieldElem {
  Elem value = 0;
  unsigned degree = 0;
  std::uint32_t modulus = 0;

  bool operator==(const FieldElem&) const = default;
};

FieldElem make_elem(const FieldCtx& ctx, Elem value);

struct Generator {
  FieldElem gamma;
};

enum class FieldOp { Add, Mul, Inv, Pow };

// Checked arithmetic. `b` is an element for add/mul, an exponent for pow and
// ignored for inv.
FieldElem field_arith(const FieldCtx& ctx, FieldOp op, const FieldElem& a,
                      std::variant<FieldElem, std::uint64_t> b = std::uint64_t{0});

int trace(const FieldCtx& ctx, const FieldElem& x);

// Smallest element whose multiplicative order is q - 1.
Generator find_generator(const FieldCtx& ctx);

}  // namespace nullcode
