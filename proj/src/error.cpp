#include "paradigm/error.hpp"

namespace paradigm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteParameter: return "NonFiniteParameter";
    case ErrorCode::NonPositiveC1: return "NonPositiveC1";
    case ErrorCode::NonPositiveC2: return "NonPositiveC2";
    case ErrorCode::AlphaNotBelowBeta: return "AlphaNotBelowBeta";
    case ErrorCode::BetaAboveOne: return "BetaAboveOne";
    case ErrorCode::NegativeFloor: return "NegativeFloor";
    case ErrorCode::BetaOneRequiresC2LessThanOne: return "BetaOneRequiresC2LessThanOne";
    case ErrorCode::BetaBelowOneRequiresPositiveFloor: return "BetaBelowOneRequiresPositiveFloor";
    case ErrorCode::POutOfRange: return "POutOfRange";
    case ErrorCode::BetaMustBeBelowOne: return "BetaMustBeBelowOne";
    case ErrorCode::BetaMustBeOne: return "BetaMustBeOne";
    case ErrorCode::CoefficientOutOfRange: return "CoefficientOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteWindow: return "NonFiniteWindow";
    case ErrorCode::HorizonTooLarge: return "HorizonTooLarge";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NonPositiveState: return "NonPositiveState";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownConfigKey: return "UnknownConfigKey";
    case ErrorCode::TooFewReplicates: return "TooFewReplicates";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace paradigm
