#pragma once

#include <functional>
#include <utility>

#include "tunnelkit/potential.hpp"

namespace tunnelkit {

struct QuadratureOptions {
  double rel_tol = 1e-12;
  unsigned max_depth = 16;
};

struct TurningPoints {
  double a_bar = 0.0;
  double b_bar = 0.0;
};

/// Under-barrier action at energy E, split at the barrier maximum.
struct ActionResult {
  double E = 0.0;
  double a_bar = 0.0;
  double b_bar = 0.0;
  double I = 0.0;
  double I_slope = 0.0;
  double I_L = 0.0;
  double I_R = 0.0;
};

/// Inner (barrier-side) turning points V(a_bar) = V(b_bar) = E with
/// x_L < a_bar < x_m < b_bar < x_R.
TurningPoints turning_points(const DoubleWell &well, double E);

/// Outer turning points (V = E on the far wall of each well).
TurningPoints outer_turning_points(const DoubleWell &well, double E);

/// I(E) = (1/hbar) int_{a_bar}^{b_bar} sqrt(2m(V - E)) dx
double gamow_integral(const DoubleWell &well, double E, const QuadratureOptions &q = {});

/// dI/dE = -(1/hbar) int_{a_bar}^{b_bar} m / sqrt(2m(V - E)) dx  (always < 0)
double action_slope(const DoubleWell &well, double E, const QuadratureOptions &q = {});

/// (1/hbar) int_{a_bar}^{b_bar} m w(x) / sqrt(2m(V - E)) dx: the response of I(E)
/// to a perturbation V -> V + delta * w at fixed E is +delta times this.
double inverse_momentum_moment(const DoubleWell &well, double E,
                               const std::function<double(double)> &weight,
                               const QuadratureOptions &q = {});

ActionResult evaluate_action(const DoubleWell &well, double E, const QuadratureOptions &q = {});

/// Closed-form left/right actions of the biased double oscillator at E_bar.
struct DoubleOscillatorAction {
  double I_L = 0.0;
  double I_R = 0.0;
  double lambda_L = 0.0;
  double lambda_R = 0.0;
};

/// I_L = (V0 / hbar w_L) (sqrt(1 - l_L) - l_L ln((1 + sqrt(1 - l_L)) / sqrt(l_L))),
/// l_L = E_bar / V0; mirrored on the right with V0 - tilde_eps and
/// l_R = (E_bar - tilde_eps) / (V0 - tilde_eps). Throws LambdaOutOfRange unless
/// both lambdas lie in (0, 1].
DoubleOscillatorAction double_oscillator_action(const DoubleOscillator &params,
                                                const PhysConstants &consts, double E_bar,
                                                double tilde_eps);

/// dI/d(tilde_eps) at fixed E for the double oscillator. Only the right branch
/// depends on the bias: with L = ln((1 + sqrt(1 - l_R)) / sqrt(l_R)),
///   dI/d(tilde_eps) = (L - sqrt(1 - l_R)) / (hbar w_R).
double double_oscillator_bias_response(const DoubleOscillator &params,
                                       const PhysConstants &consts, double E,
                                       double tilde_eps);

/// Ingredients of the small-E_bar expansion of the left and right actions.
struct AsymptoticActionParts {
  double I_L0 = 0.0;
  double I_R0 = 0.0;
  double A_L = 0.0;
  double A_R = 0.0;
  double lambda_L = 0.0;
  double lambda_R = 0.0;
};

/// Returns the parts and
///   I_asym = I_L0 - (E/hbar w_L) [ln(2 (x_m - x_L) / sqrt(2E / m w_L^2)) + A_L + 1/2]
///          + I_R0 - (E'/hbar w_R)[ln(2 (x_R - x_m) / sqrt(2E' / m w_R^2)) + A_R + 1/2]
/// with E = E_bar and E' = E_bar - tilde_eps.
std::pair<AsymptoticActionParts, double> asymptotic_action(const DoubleWell &well,
                                                           const QuadratureOptions &q = {});

} // namespace tunnelkit
