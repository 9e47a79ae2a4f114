#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sncslice {

enum class ErrorCode {
  InvalidArgument,
  Overflow,
  StabilityViolated,
  NumericUnderflow,
  UnknownOption,
  EmptyScenario,
  MissingSlice,
  CellTooSmall,
  PreconditionInfeasible,
  UnknownFlow,
  ParseError,
  ValidationError,
  InvalidDimensions,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status or message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sncslice
