#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tunnelkit {

enum class ErrorCode {
  // configuration / input contract
  InvalidConfig,
  InvalidSpec,
  DomainTooSmall,
  FitIllConditioned,
  // the potential is outside the regime the formulas describe
  FewerThanTwoMinima,
  TooManyMinima,
  DegenerateBarrier,
  NonConvexMinimum,
  EnergyAboveBarrier,
  EnergyBelowWellBottom,
  LambdaOutOfRange,
  OutOfSupportedRange,
  DomainError,
  RootNotBracketed,
  // numerical non-convergence
  QuadratureNonConvergence,
  GridTooCoarse,
};

/// Coarse classification used for process exit codes.
enum class ErrorCategory { Config, Regime, Numerical };

ErrorCategory category(ErrorCode code);
std::string_view to_string(ErrorCode code);

/// Exit code contract of the command-line tool: 2 config, 3 regime, 4 numerical.
int exit_code(ErrorCategory cat);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message);

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return tunnelkit::category(code_); }

private:
  ErrorCode code_;
};

} // namespace tunnelkit
