#pragma once

#include "tunnelkit/action.hpp"
#include "tunnelkit/potential.hpp"

namespace tunnelkit {

/// k = gamma - ln 2, the first-order coefficient of f(zeta) about zero.
double k_constant();

/// Gamma function on [0.25, 2.5]; throws OutOfSupportedRange elsewhere.
double gamma_fn(double z);

/// g(zeta) = sqrt(2 pi) (zeta + 1/2)^(zeta + 1/2) exp(-(zeta + 1/2)), zeta > -1/2.
double g_of_zeta(double zeta);

/// f(zeta) = cos(pi zeta) Gamma(1 - zeta) g(zeta) / (2 pi), |zeta| <= 0.4.
double f_of_zeta(double zeta);

/// First-order tunnelling amplitude
///   Delta = hbar sqrt(w_R w_L) / sqrt(e pi)
///           * (1 + (k/4) (eps / hbar w_L) (w_R - w_L) / w_R) * exp(-I_bar).
double delta_first_order(const WellAnalysis &w, double I_bar, double hbar);

/// The same amplitude with the bias correction dropped.
double delta_zeroth_order(const WellAnalysis &w, double I_bar, double hbar);

/// Level shifts of the doublet about E_bar from the quantisation condition
/// expanded to first order in zeta and in E - E_bar.
struct LevelShifts {
  double dE_plus = 0.0;
  double dE_minus = 0.0;
  double b_prime = 0.0;
  double u = 0.0;
  double delta = 0.0; ///< square root of the full Delta^2 (no expansion of the root)
};

LevelShifts level_shifts(const WellAnalysis &w, const ActionResult &action, double hbar);

/// sqrt(eps^2 + delta^2)
double level_splitting(double eps, double delta);

/// Roots of F(E) = zeta_L zeta_R - f(zeta_L) f(zeta_R) exp(-2 I(E)) bracketing E_bar.
struct QuantizationRoots {
  double E_plus = 0.0;
  double E_minus = 0.0;
  double dE_plus = 0.0;  ///< E_plus - E_bar
  double dE_minus = 0.0; ///< E_minus - E_bar
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  double zeta_L_plus = 0.0;
  double zeta_R_plus = 0.0;
  double zeta_L_minus = 0.0;
  double zeta_R_minus = 0.0;
};

/// Value of the quantisation function at E = E_bar + dE, with the Gamow action
/// taken from `barrier` and the level parameters (frequencies, bias) from `levels`.
double quantization_function(const DoubleWell &barrier, const WellAnalysis &levels, double dE,
                             const QuadratureOptions &q = {});

/// Solves the quantisation condition without expanding it. Brackets come from
/// the closed-form level shifts with a tenfold margin; throws RootNotBracketed
/// when the margin is not enough.
QuantizationRoots solve_quantization(const DoubleWell &barrier, const WellAnalysis &levels,
                                     const QuadratureOptions &q = {});

inline QuantizationRoots solve_quantization(const DoubleWell &well,
                                            const QuadratureOptions &q = {}) {
  return solve_quantization(well, well.analysis(), q);
}

/// Every route to the doublet at once.
struct SplittingResult {
  double delta = 0.0;            ///< first-order amplitude
  double delta_zeroth = 0.0;     ///< amplitude without the bias correction
  double delta_E = 0.0;          ///< sqrt(eps^2 + delta^2)
  double delta_E_quadratic = 0.0; ///< dE_minus - dE_plus from the level shifts
  double delta_E_transcendental = 0.0;
  double dE_plus = 0.0;
  double dE_minus = 0.0;
  double E_plus = 0.0;
  double E_minus = 0.0;
  double b_prime = 0.0;
  double u = 0.0;
  double delta_full = 0.0;
  double I_bar = 0.0;
  double I_slope = 0.0;
  QuantizationRoots transcendental;
};

/// Closed-form routes only; the transcendental fields are NaN.
SplittingResult closed_form_splitting(const WellAnalysis &levels, const ActionResult &action,
                                      double hbar);

SplittingResult compute_splitting(const DoubleWell &barrier, const WellAnalysis &levels,
                                  const ActionResult &action, const QuadratureOptions &q = {});

inline SplittingResult compute_splitting(const DoubleWell &well,
                                         const QuadratureOptions &q = {}) {
  return compute_splitting(well, well.analysis(),
                           evaluate_action(well, well.analysis().E_bar, q), q);
}

} // namespace tunnelkit
