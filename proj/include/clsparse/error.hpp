#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clsparse {

enum class ErrorCode {
  EmptySpace,
  NegativeWeight,
  WeightSumNotOne,
  NonFinite,
  ShapeMismatch,
  PLessThanOne,
  NonpositiveP,
  BadP,
  BadEpsilon,
  NormExceeded,
  ZeroCoefficients,
  NotCentered,
  CapExceeded,
  TooFewSamples,
  IndexOutOfRange,
  MaxAttemptsExceeded,
  ParseError,
  ConfigError,
  IoError,
};

std::string_view error_name(ErrorCode code);

/// Every library failure is reported through this type; `code()` is stable
/// and the message names the violated invariant.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clsparse
