#include "nullcode/error.hpp"

namespace nullcode {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvOfZero: return "InvOfZero";
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::BiasNotPowerOfTwo: return "BiasNotPowerOfTwo";
    case Errc::EmptySet: return "EmptySet";
    case Errc::BadDistribution: return "BadDistribution";
    case Errc::EmptySupport: return "EmptySupport";
    case Errc::DistinctnessViolated: return "DistinctnessViolated";
    case Errc::EncodingOverflow: return "EncodingOverflow";
    case Errc::RetriesExhausted: return "RetriesExhausted";
    case Errc::SplitRequiresEvenN: return "SplitRequiresEvenN";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

}  // namespace nullcode
