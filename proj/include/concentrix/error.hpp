#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace concentrix {

enum class ErrorCode {
  InvalidInput,
  NumericalFailure,
  ZeroMatrix,
  NotPsd,
  NotPd,
  DomainViolation,
  Overflow,
  DimMismatch,
  ShapeMismatch,
  TooFewSamples,
  ParameterRange,
  UnsupportedModel,
  ConstraintViolated,
  UsageError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const char* what) {
  if (!condition) fail(code, what);
}

}  // namespace concentrix
