#include "tunnelkit/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "roots.hpp"
#include "tunnelkit/errors.hpp"

namespace tunnelkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

} // namespace

double k_constant() { return std::numbers::egamma - std::numbers::ln2; }

double gamma_fn(double z) {
  if (!(z >= 0.25 && z <= 2.5))
    throw Error(ErrorCode::OutOfSupportedRange,
                "gamma_fn supports [0.25, 2.5], got " + std::to_string(z));
  return std::tgamma(z);
}

double g_of_zeta(double zeta) {
  if (!(zeta > -0.5))
    throw Error(ErrorCode::DomainError, "g(zeta) needs zeta > -1/2, got " + std::to_string(zeta));
  const double s = zeta + 0.5;
  return std::sqrt(2.0 * kPi) * std::exp(s * std::log(s) - s);
}

double f_of_zeta(double zeta) {
  if (!(std::abs(zeta) <= 0.4))
    throw Error(ErrorCode::DomainError,
                "f(zeta) is only meaningful for |zeta| <= 0.4, got " + std::to_string(zeta));
  return std::cos(kPi * zeta) * gamma_fn(1.0 - zeta) * g_of_zeta(zeta) / (2.0 * kPi);
}

double delta_zeroth_order(const WellAnalysis &w, double I_bar, double hbar) {
  return hbar * std::sqrt(w.omega_R * w.omega_L) / std::sqrt(kE * kPi) * std::exp(-I_bar);
}

double delta_first_order(const WellAnalysis &w, double I_bar, double hbar) {
  const double correction =
      k_constant() / 4.0 * (w.eps / (hbar * w.omega_L)) * (w.omega_R - w.omega_L) / w.omega_R;
  return delta_zeroth_order(w, I_bar, hbar) * (1.0 + correction);
}

LevelShifts level_shifts(const WellAnalysis &w, const ActionResult &action, double hbar) {
  const double k = k_constant();
  const double wl = w.omega_L, wr = w.omega_R;
  const double gamow2 = std::exp(-2.0 * action.I);
  LevelShifts out;
  out.u = 2.0 * action.I_slope - k * hbar * (wr + wl) / (hbar * hbar * wr * wl);
  out.b_prime = hbar * hbar * wl * wr * gamow2 * out.u / (8.0 * kPi * kE);
  const double delta2 = hbar * hbar * wr * wl * gamow2 / (kE * kPi) *
                        (1.0 + k * w.eps * (wr - wl) / (2.0 * hbar * wr * wl));
  out.delta = std::sqrt(delta2);
  const double root = std::sqrt(0.25 * w.eps * w.eps + 0.25 * delta2 + out.b_prime * out.b_prime);
  out.dE_plus = -out.b_prime - root;
  out.dE_minus = -out.b_prime + root;
  return out;
}

double level_splitting(double eps, double delta) { return std::hypot(eps, delta); }

double quantization_function(const DoubleWell &barrier, const WellAnalysis &levels, double dE,
                             const QuadratureOptions &q) {
  const double hbar = barrier.hbar();
  const double zl = (dE + 0.5 * levels.eps) / (hbar * levels.omega_L);
  const double zr = (dE - 0.5 * levels.eps) / (hbar * levels.omega_R);
  const double I = gamow_integral(barrier, levels.E_bar + dE, q);
  return zl * zr - f_of_zeta(zl) * f_of_zeta(zr) * std::exp(-2.0 * I);
}

QuantizationRoots solve_quantization(const DoubleWell &barrier, const WellAnalysis &levels,
                                     const QuadratureOptions &q) {
  const double hbar = barrier.hbar();
  const auto action = evaluate_action(barrier, levels.E_bar, q);
  const auto est = level_shifts(levels, action, hbar);
  const double half_eps = 0.5 * std::abs(levels.eps);
  const double scale = std::sqrt(half_eps * half_eps + 0.25 * est.delta * est.delta);

  auto F = [&](double dE) { return quantization_function(barrier, levels, dE, q); };

  // Between -|eps|/2 and +|eps|/2 the product zeta_L zeta_R is <= 0, so F < 0
  // there; the doublet roots sit just outside that interval. The outer end is
  // kept where f(zeta) is defined and below the barrier top.
  const double zeta_max = 0.4 * (1.0 - 1e-12);
  const double lowest = std::max(-zeta_max * hbar * levels.omega_L - 0.5 * levels.eps,
                                 -zeta_max * hbar * levels.omega_R + 0.5 * levels.eps);
  const double highest =
      std::min({zeta_max * hbar * levels.omega_L - 0.5 * levels.eps,
                zeta_max * hbar * levels.omega_R + 0.5 * levels.eps,
                (1.0 - 1e-6) * (barrier.analysis().V0 - levels.E_bar)});
  auto solve_side = [&](double estimate, double side) {
    const double inner = side * half_eps;
    const double distance = std::max(std::abs(estimate) - half_eps, 1e-6 * scale);
    const double outer = side < 0.0 ? std::max(inner - 11.0 * distance, lowest)
                                    : std::min(inner + 11.0 * distance, highest);
    if (!(side * (outer - inner) > 0.0))
      throw Error(ErrorCode::RootNotBracketed,
                  "no admissible energy range beside the doublet; |zeta| would exceed 0.4");
    const double f_inner = F(inner);
    const double f_outer = F(outer);
    if (!(f_outer > 0.0) || !(f_inner <= 0.0))
      throw Error(ErrorCode::RootNotBracketed,
                  "quantisation condition has no root within ten times the estimated shift "
                  "(F(inner) = " +
                      std::to_string(f_inner) + ", F(outer) = " + std::to_string(f_outer) +
                      "); the doublet is outside the semiclassical regime");
    const double lo = std::min(inner, outer), hi = std::max(inner, outer);
    const double tol = 1e-13 * scale;
    return side < 0.0 ? detail::bracketed_root(F, lo, hi, f_outer, f_inner, tol)
                      : detail::bracketed_root(F, lo, hi, f_inner, f_outer, tol);
  };

  QuantizationRoots r;
  r.dE_plus = solve_side(est.dE_plus, -1.0);
  r.dE_minus = solve_side(est.dE_minus, 1.0);
  r.E_plus = levels.E_bar + r.dE_plus;
  r.E_minus = levels.E_bar + r.dE_minus;
  r.residual_plus = F(r.dE_plus);
  r.residual_minus = F(r.dE_minus);
  r.zeta_L_plus = (r.dE_plus + 0.5 * levels.eps) / (hbar * levels.omega_L);
  r.zeta_R_plus = (r.dE_plus - 0.5 * levels.eps) / (hbar * levels.omega_R);
  r.zeta_L_minus = (r.dE_minus + 0.5 * levels.eps) / (hbar * levels.omega_L);
  r.zeta_R_minus = (r.dE_minus - 0.5 * levels.eps) / (hbar * levels.omega_R);
  return r;
}

SplittingResult closed_form_splitting(const WellAnalysis &levels, const ActionResult &action,
                                      double hbar) {
  SplittingResult s;
  s.I_bar = action.I;
  s.I_slope = action.I_slope;
  s.delta = delta_first_order(levels, action.I, hbar);
  s.delta_zeroth = delta_zeroth_order(levels, action.I, hbar);
  s.delta_E = level_splitting(levels.eps, s.delta);

  const auto shifts = level_shifts(levels, action, hbar);
  s.dE_plus = shifts.dE_plus;
  s.dE_minus = shifts.dE_minus;
  s.b_prime = shifts.b_prime;
  s.u = shifts.u;
  s.delta_full = shifts.delta;
  s.delta_E_quadratic = shifts.dE_minus - shifts.dE_plus;
  s.E_plus = levels.E_bar + shifts.dE_plus;
  s.E_minus = levels.E_bar + shifts.dE_minus;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.delta_E_transcendental = nan;
  s.transcendental = {nan, nan, nan, nan, nan, nan, nan, nan, nan, nan};
  return s;
}

SplittingResult compute_splitting(const DoubleWell &barrier, const WellAnalysis &levels,
                                  const ActionResult &action, const QuadratureOptions &q) {
  SplittingResult s = closed_form_splitting(levels, action, barrier.hbar());
  s.transcendental = solve_quantization(barrier, levels, q);
  s.delta_E_transcendental = s.transcendental.dE_minus - s.transcendental.dE_plus;
  return s;
}

} // namespace tunnelkit
