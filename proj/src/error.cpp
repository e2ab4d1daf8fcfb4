#include "concentrix/error.hpp"

namespace concentrix {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::NotPd: return "NotPd";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ParameterRange: return "ParameterRange";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace concentrix
