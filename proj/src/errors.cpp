#include "tunnelkit/errors.hpp"

namespace tunnelkit {

ErrorCategory category(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidConfig:
  case ErrorCode::InvalidSpec:
  case ErrorCode::DomainTooSmall:
  case ErrorCode::FitIllConditioned:
    return ErrorCategory::Config;
  case ErrorCode::QuadratureNonConvergence:
  case ErrorCode::GridTooCoarse:
    return ErrorCategory::Numerical;
  default:
    return ErrorCategory::Regime;
  }
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidConfig: return "InvalidConfig";
  case ErrorCode::InvalidSpec: return "InvalidSpec";
  case ErrorCode::DomainTooSmall: return "DomainTooSmall";
  case ErrorCode::FitIllConditioned: return "FitIllConditioned";
  case ErrorCode::FewerThanTwoMinima: return "FewerThanTwoMinima";
  case ErrorCode::TooManyMinima: return "TooManyMinima";
  case ErrorCode::DegenerateBarrier: return "DegenerateBarrier";
  case ErrorCode::NonConvexMinimum: return "NonConvexMinimum";
  case ErrorCode::EnergyAboveBarrier: return "EnergyAboveBarrier";
  case ErrorCode::EnergyBelowWellBottom: return "EnergyBelowWellBottom";
  case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
  case ErrorCode::OutOfSupportedRange: return "OutOfSupportedRange";
  case ErrorCode::DomainError: return "DomainError";
  case ErrorCode::RootNotBracketed: return "RootNotBracketed";
  case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
  case ErrorCode::GridTooCoarse: return "GridTooCoarse";
  }
  return "Unknown";
}

int exit_code(ErrorCategory cat) {
  switch (cat) {
  case ErrorCategory::Config: return 2;
  case ErrorCategory::Regime: return 3;
  case ErrorCategory::Numerical: return 4;
  }
  return 1;
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

} // namespace tunnelkit
