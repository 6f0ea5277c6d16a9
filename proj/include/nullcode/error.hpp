#pragma once

#include <stdexcept>
#include <string>

namespace nullcode {

enum class Errc {
  InvOfZero,
  DomainMismatch,
  LengthMismatch,
  BudgetExceeded,
  DivisionByZero,
  BiasNotPowerOfTwo,
  EmptySet,
  BadDistribution,
  EmptySupport,
  DistinctnessViolated,
  EncodingOverflow,
  RetriesExhausted,
  SplitRequiresEvenN,
  ParseError,
  InvalidArgument,
};

const char* errc_name(Errc code);

// All library failures surface as this exception; code() identifies the
// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace nullcode
