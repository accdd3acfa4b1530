#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iwasawa {

enum class ErrorKind {
  // padic_core
  NotIntegral,
  NonUnit,
  MixedContext,
  PrecisionTooLarge,
  // lambda_ring
  TruncationTooSmall,
  NotDistinguished,
  PrecisionExhausted,
  // module_model
  NotTorsion,
  // curve_engine
  ParseError,
  SingularCurve,
  BadReduction,
  ConductorMismatch,
  RootNumberMismatch,
  NonConvergence,
  // modsym_engine
  CoefficientSupplyExhausted,
  RecognitionFailed,
  IncompleteTable,
  ContextMismatch,
  // mazur_tate
  NotAUnit,
  CompatFailed,
  // signed_extract
  NotStabilized,
  WrongReductionType,
  SingularSystem,
  // analyzer / cli
  IoError,
  Usage,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. The kind is stable and is what
/// callers (and the CLI exit-code mapping) branch on; the message is for
/// humans.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace iwasawa
