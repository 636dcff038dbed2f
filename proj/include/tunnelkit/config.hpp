#pragma once

#include <optional>
#include <string>

#include "tunnelkit/action.hpp"
#include "tunnelkit/oracle.hpp"
#include "tunnelkit/potential.hpp"

namespace tunnelkit {

inline constexpr const char *kSchemaVersion = "tunnelkit/1";

/// Oracle grid as written in the config. Without x_min/x_max the domain is
/// sized from the well analysis.
struct OracleGridConfig {
  std::optional<double> x_min;
  std::optional<double> x_max;
  int n_points = 8001;
  bool richardson = true;
};

/// How a bias sweep changes the potential.
enum class SweepModel {
  /// Barrier, frequencies and well positions stay those of the base potential;
  /// tilde_eps enters through eps and E_bar only.
  FrozenBarrier,
  /// The bias is applied to the potential itself: a smooth step rising from
  /// the barrier top to the right minimum, or the tilde_eps parameter for the
  /// double oscillator.
  SmoothStep,
};

struct SweepConfig {
  std::string parameter = "tilde_eps";
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  SweepModel model = SweepModel::FrozenBarrier;
};

struct ValidityThresholds {
  double max_eps_over_hw = 0.2;
  double max_gamow = 1e-2;
  double max_lambda = 0.3;
  double max_bprime_ratio = 1e-3;
};

struct RunConfig {
  PotentialSpec potential;
  PhysConstants constants;
  AnalyzeOptions analysis;
  std::optional<OracleGridConfig> oracle_grid;
  std::optional<SweepConfig> sweep;
  QuadratureOptions quadrature;
  ValidityThresholds validity;
};

/// Parses a JSON config document. Throws Error(InvalidConfig / InvalidSpec)
/// naming the offending key.
RunConfig parse_config_text(const std::string &text);
RunConfig load_config(const std::string &path);

} // namespace tunnelkit
