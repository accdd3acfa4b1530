#include "iwasawa/error.hpp"

namespace iwasawa {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotIntegral:
      return "NotIntegral";
    case ErrorKind::NonUnit:
      return "NonUnit";
    case ErrorKind::MixedContext:
      return "MixedContext";
    case ErrorKind::PrecisionTooLarge:
      return "PrecisionTooLarge";
    case ErrorKind::TruncationTooSmall:
      return "TruncationTooSmall";
    case ErrorKind::NotDistinguished:
      return "NotDistinguished";
    case ErrorKind::PrecisionExhausted:
      return "PrecisionExhausted";
    case ErrorKind::NotTorsion:
      return "NotTorsion";
    case ErrorKind::ParseError:
      return "ParseError";
    case ErrorKind::SingularCurve:
      return "SingularCurve";
    case ErrorKind::BadReduction:
      return "BadReduction";
    case ErrorKind::ConductorMismatch:
      return "ConductorMismatch";
    case ErrorKind::RootNumberMismatch:
      return "RootNumberMismatch";
    case ErrorKind::NonConvergence:
      return "NonConvergence";
    case ErrorKind::CoefficientSupplyExhausted:
      return "CoefficientSupplyExhausted";
    case ErrorKind::RecognitionFailed:
      return "RecognitionFailed";
    case ErrorKind::IncompleteTable:
      return "IncompleteTable";
    case ErrorKind::ContextMismatch:
      return "ContextMismatch";
    case ErrorKind::NotAUnit:
      return "NotAUnit";
    case ErrorKind::CompatFailed:
      return "CompatFailed";
    case ErrorKind::NotStabilized:
      return "NotStabilized";
    case ErrorKind::WrongReductionType:
      return "WrongReductionType";
    case ErrorKind::SingularSystem:
      return "SingularSystem";
    case ErrorKind::IoError:
      return "IoError";
    case ErrorKind::Usage:
      return "Usage";
  }
  return "Unknown";
}

}  // namespace iwasawa
