#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace paradigm {

enum class ErrorCode {
  // parameter validation
  NonFiniteParameter,
  NonPositiveC1,
  NonPositiveC2,
  AlphaNotBelowBeta,
  BetaAboveOne,
  NegativeFloor,
  BetaOneRequiresC2LessThanOne,
  BetaBelowOneRequiresPositiveFloor,
  POutOfRange,
  BetaMustBeBelowOne,
  BetaMustBeOne,
  CoefficientOutOfRange,
  // simulation
  InvalidArgument,
  NonFiniteWindow,
  HorizonTooLarge,
  GridMismatch,
  GridTooCoarse,
  NonPositiveState,
  // statistics
  EmptySample,
  SizeMismatch,
  DegenerateSample,
  TooFewPoints,
  NonPositiveValue,
  // experiments
  InvalidConfig,
  UnknownConfigKey,
  TooFewReplicates,
  HypothesisViolated,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code; every failure in the library
/// surfaces as one of these.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace paradigm
