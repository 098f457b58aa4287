#include "clsparse/error.hpp"

namespace clsparse {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySpace: return "EmptySpace";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::WeightSumNotOne: return "WeightSumNotOne";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::PLessThanOne: return "PLessThanOne";
    case ErrorCode::NonpositiveP: return "NonpositiveP";
    case ErrorCode::BadP: return "BadP";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::NormExceeded: return "NormExceeded";
    case ErrorCode::ZeroCoefficients: return "ZeroCoefficients";
    case ErrorCode::NotCentered: return "NotCentered";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::MaxAttemptsExceeded: return "MaxAttemptsExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

}  // namespace clsparse
