#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tunnelkit/action.hpp"
#include "tunnelkit/config.hpp"
#include "tunnelkit/oracle.hpp"
#include "tunnelkit/potential.hpp"
#include "tunnelkit/splitting.hpp"

namespace tunnelkit {

/// Semiclassical validity indicators and the flags they raise.
struct Validity {
  double eps_over_hw = 0.0;  ///< |eps| / (hbar omega_L)
  double gamow = 0.0;        ///< exp(-I_bar)
  double lambda_L = 0.0;     ///< E_bar / V0
  double lambda_R = 0.0;     ///< (E_bar - tilde_eps) / (V0 - tilde_eps)
  double bprime_ratio = 0.0; ///< (2 b')^2 / Delta^2
  std::vector<std::string> flags;
};

Validity assess_validity(const WellAnalysis &levels, const SplittingResult &s,
                         const ValidityThresholds &t, double hbar);

struct AnalyzeReport {
  WellAnalysis well;
  ActionResult action;
  SplittingResult splitting;
  ParabolicDiagnostic parabolic;
  std::optional<DoubleOscillatorAction> closed_form;
  /// Small-E_bar expansion of the action; absent when its integrals fail.
  std::optional<AsymptoticActionParts> asymptotic_parts;
  double asymptotic_I = 0.0;
  std::optional<GridSpec> grid;
  std::optional<Spectrum> spectrum;
  double wkb_over_oracle = 0.0; ///< delta_E / oracle splitting, NaN without a grid
  Validity validity;
};

AnalyzeReport run_analyze(const RunConfig &cfg);

/// ln Delta = ln c0 + c1 x + c2 x^2 by ordinary least squares.
struct FitResult {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double rms_residual = 0.0; ///< root mean square residual of ln Delta
};

/// Throws FitIllConditioned for fewer than 5 points, a zero-width range or a
/// rank-deficient design matrix.
FitResult fit_log_quadratic(const std::vector<double> &x, const std::vector<double> &delta);

struct SweepRow {
  double tilde_eps = 0.0;
  WellAnalysis levels;
  SplittingResult splitting;
  std::optional<Spectrum> oracle;
  Validity validity;
};

struct SweepReport {
  SweepModel model = SweepModel::FrozenBarrier;
  std::vector<SweepRow> rows;
  FitResult fit;
  /// (k/4)(1/hbar w_L)(w_R - w_L)/w_R - I'(E_bar)/2 at tilde_eps = 0.
  double c1_analytic = 0.0;
  /// -dI/d(tilde_eps) at fixed E_bar from the change of the barrier itself;
  /// zero for the frozen-barrier model.
  double c1_barrier_term = 0.0;
  double c1_predicted = 0.0; ///< c1_analytic + c1_barrier_term
  int threads = 1;
};

/// Worker count for sweeps: TUNNELKIT_THREADS if set (must be a positive
/// integer), else the hardware concurrency, never more than `jobs`.
int sweep_threads(int jobs);

SweepReport run_sweep(const RunConfig &cfg);

struct OracleReport {
  GridSpec grid;
  Spectrum spectrum;
  /// True when the potential was analysed as a double well and energies are
  /// measured from the bottom of the lower well; false for raw energies.
  bool well_relative = false;
  double zero_shift = 0.0;
};

/// Needs an oracle_grid block. Double wells get domain checks and may omit
/// x_min/x_max; anything else needs an explicit interval.
OracleReport run_oracle(const RunConfig &cfg);

struct CompareRow {
  std::string method;
  double delta_E = 0.0;
  double rel_error = 0.0; ///< |delta_E - oracle| / oracle
};

struct CompareReport {
  std::vector<CompareRow> rows;
  Spectrum oracle;
  Validity validity;
};

CompareReport run_compare(const RunConfig &cfg);

} // namespace tunnelkit
