#include "tunnelkit/action.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "roots.hpp"
#include "tunnelkit/errors.hpp"

namespace tunnelkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// abs_floor accepts integrals that are legitimately ~0 (E at the barrier top),
// where only the absolute error matters
template <class F>
double integrate(F &&f, double lo, double hi, const QuadratureOptions &q, const char *what,
                 double abs_floor = 0.0) {
  double error = 0.0;
  double l1 = 0.0;
  const double result = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, lo, hi, q.max_depth, q.rel_tol, &error, &l1);
  if (!std::isfinite(result) ||
      (error > std::max(100.0 * q.rel_tol, 1e-9) * l1 && error > abs_floor))
    throw Error(ErrorCode::QuadratureNonConvergence,
                std::string(what) + ": estimated error " + fmt(error) + " for integral " +
                    fmt(result) + " (L1 norm " + fmt(l1) + ")");
  return result;
}

double root_tolerance(double a, double b) {
  return 1e-15 * std::abs(b - a) + 4.0 * kEps * std::max(std::abs(a), std::abs(b));
}

void check_energy(const WellAnalysis &w, double E) {
  if (!(E < w.V0))
    throw Error(ErrorCode::EnergyAboveBarrier,
                "E = " + std::to_string(E) + " is not below the barrier top " +
                    std::to_string(w.V0));
  if (!(E > std::max(0.0, w.tilde_eps)))
    throw Error(ErrorCode::EnergyBelowWellBottom,
                "E = " + std::to_string(E) + " lies below the bottom of a well");
}

// Integral over [x_t, x_end] (either orientation) of a kernel that depends on
// the classically forbidden depth V(x) - E, which vanishes at the turning point
// x_t. With x = x_t + dir s, s = t^2, the depth is written as s * q(s) so the
// square-root endpoint behaviour is handled analytically. Very close to the
// turning point q comes from the Taylor series of V to avoid cancellation.
//
// kernel(x, s, q) must return the integrand in t (it includes the Jacobian).
template <class Kernel>
double turning_point_integral(const DoubleWell &well, double x_t, double x_end, double E,
                              Kernel kernel, const QuadratureOptions &qopt,
                              const char *what, double abs_floor = 0.0) {
  const double span = std::abs(x_end - x_t);
  if (span == 0.0)
    return 0.0;
  const double dir = x_end > x_t ? 1.0 : -1.0;
  const auto d = well.derivatives(x_t);
  const double taylor_cut = 1e-3 * span;
  auto depth_ratio = [&](double x, double s) {
    const double series = dir * d[1] + s * (0.5 * d[2] + s * (dir * d[3] / 6.0 + s * d[4] / 24.0));
    if (s < taylor_cut)
      return series;
    const double direct = (well.V(x) - E) / s;
    return direct > 0.0 ? direct : series;
  };
  auto f = [&](double t) {
    const double s = t * t;
    const double x = x_t + dir * s;
    return kernel(x, s, std::max(depth_ratio(x, s), 0.0));
  };
  return integrate(f, 0.0, std::sqrt(span), qopt, what, abs_floor);
}

double action_half(const DoubleWell &well, double x_t, double x_end, double E,
                   const QuadratureOptions &q) {
  const double two_m = 2.0 * well.mass();
  // |p| dx = sqrt(2m s q) * 2t dt = 2 s sqrt(2m q) dt
  auto kernel = [two_m](double, double s, double ratio) { return 2.0 * s * std::sqrt(two_m * ratio); };
  return turning_point_integral(well, x_t, x_end, E, kernel, q, "gamow_integral",
                                1e-10 * well.hbar()) /
         well.hbar();
}

template <class Weight>
double moment_half(const DoubleWell &well, double x_t, double x_end, double E, Weight &&w,
                   const QuadratureOptions &q) {
  const double m = well.mass();
  // m / |p| dx = m / sqrt(2m s q) * 2t dt = 2m / sqrt(2m q) dt
  auto kernel = [m, &w](double x, double, double ratio) {
    return w(x) * 2.0 * m / std::sqrt(2.0 * m * ratio);
  };
  return turning_point_integral(well, x_t, x_end, E, kernel, q, "inverse_momentum_moment") /
         well.hbar();
}

double lambda_action(double lambda) {
  const double r = std::sqrt(1.0 - lambda);
  return r - lambda * std::log((1.0 + r) / std::sqrt(lambda));
}

} // namespace

TurningPoints turning_points(const DoubleWell &well, double E) {
  const auto &w = well.analysis();
  check_energy(w, E);
  auto f = [&](double x) { return well.V(x) - E; };
  const double a = detail::bracketed_root(f, w.x_L, w.x_m, -E, w.V0 - E,
                                          root_tolerance(w.x_L, w.x_m));
  const double b = detail::bracketed_root(f, w.x_m, w.x_R, w.V0 - E, w.tilde_eps - E,
                                          root_tolerance(w.x_m, w.x_R));
  return {a, b};
}

TurningPoints outer_turning_points(const DoubleWell &well, double E) {
  const auto &w = well.analysis();
  if (!(E > std::max(0.0, w.tilde_eps)))
    throw Error(ErrorCode::EnergyBelowWellBottom,
                "E = " + std::to_string(E) + " lies below the bottom of a well");
  auto f = [&](double x) { return well.V(x) - E; };
  const double step = w.x_R - w.x_L;
  auto search = [&](double from, double dir) {
    double d = step;
    for (int i = 0; i < 200; ++i, d *= 2.0) {
      const double x = from + dir * d;
      if (f(x) > 0.0) {
        const double lo = std::min(from, x), hi = std::max(from, x);
        return detail::bracketed_root(f, lo, hi, root_tolerance(lo, hi));
      }
    }
    throw Error(ErrorCode::DomainError, "potential does not confine at energy " +
                                            std::to_string(E));
  };
  return {search(w.x_L, -1.0), search(w.x_R, 1.0)};
}

double gamow_integral(const DoubleWell &well, double E, const QuadratureOptions &q) {
  const auto tp = turning_points(well, E);
  const double x_m = well.analysis().x_m;
  return action_half(well, tp.a_bar, x_m, E, q) + action_half(well, tp.b_bar, x_m, E, q);
}

double action_slope(const DoubleWell &well, double E, const QuadratureOptions &q) {
  return -inverse_momentum_moment(well, E, [](double) { return 1.0; }, q);
}

double inverse_momentum_moment(const DoubleWell &well, double E,
                               const std::function<double(double)> &weight,
                               const QuadratureOptions &q) {
  const auto tp = turning_points(well, E);
  const double x_m = well.analysis().x_m;
  return moment_half(well, tp.a_bar, x_m, E, weight, q) +
         moment_half(well, tp.b_bar, x_m, E, weight, q);
}

ActionResult evaluate_action(const DoubleWell &well, double E, const QuadratureOptions &q) {
  const auto tp = turning_points(well, E);
  const double x_m = well.analysis().x_m;
  ActionResult r;
  r.E = E;
  r.a_bar = tp.a_bar;
  r.b_bar = tp.b_bar;
  r.I_L = action_half(well, tp.a_bar, x_m, E, q);
  r.I_R = action_half(well, tp.b_bar, x_m, E, q);
  r.I = r.I_L + r.I_R;
  auto one = [](double) { return 1.0; };
  r.I_slope = -(moment_half(well, tp.a_bar, x_m, E, one, q) +
                moment_half(well, tp.b_bar, x_m, E, one, q));
  return r;
}

DoubleOscillatorAction double_oscillator_action(const DoubleOscillator &params,
                                                const PhysConstants &consts, double E_bar,
                                                double tilde_eps) {
  DoubleOscillatorAction out;
  out.lambda_L = E_bar / params.V0;
  out.lambda_R = (E_bar - tilde_eps) / (params.V0 - tilde_eps);
  for (double l : {out.lambda_L, out.lambda_R})
    if (!(l > 0.0 && l <= 1.0))
      throw Error(ErrorCode::LambdaOutOfRange,
                  "lambda = " + std::to_string(l) + " outside (0, 1]");
  out.I_L = params.V0 / (consts.hbar * params.omega_L) * lambda_action(out.lambda_L);
  out.I_R = (params.V0 - tilde_eps) / (consts.hbar * params.omega_R) *
            lambda_action(out.lambda_R);
  return out;
}

double double_oscillator_bias_response(const DoubleOscillator &params,
                                       const PhysConstants &consts, double E,
                                       double tilde_eps) {
  const double lambda = (E - tilde_eps) / (params.V0 - tilde_eps);
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw Error(ErrorCode::LambdaOutOfRange,
                "lambda = " + std::to_string(lambda) + " outside (0, 1]");
  const double r = std::sqrt(1.0 - lambda);
  const double log_term = std::log((1.0 + r) / std::sqrt(lambda));
  return (log_term - r) / (consts.hbar * params.omega_R);
}

std::pair<AsymptoticActionParts, double> asymptotic_action(const DoubleWell &well,
                                                           const QuadratureOptions &q) {
  const auto &w = well.analysis();
  const double m = well.mass();
  const double hbar = well.hbar();
  AsymptoticActionParts parts;
  parts.lambda_L = w.E_bar / w.V0;
  parts.lambda_R = (w.E_bar - w.tilde_eps) / (w.V0 - w.tilde_eps);

  auto depth = [&](double x, double floor) { return std::max(well.V(x) - floor, 0.0); };
  parts.I_L0 = integrate([&](double x) { return std::sqrt(2.0 * m * depth(x, 0.0)); }, w.x_L,
                         w.x_m, q, "I_L(0)") /
               hbar;
  parts.I_R0 = integrate([&](double x) { return std::sqrt(2.0 * m * depth(x, w.tilde_eps)); },
                         w.x_m, w.x_R, q, "I_R(0)") /
               hbar;

  // A = int [m w / sqrt(2m (V - V_min)) - 1/u] dx with u the distance to the
  // minimum. Writing V - V_min = m w^2 u^2/2 (1 + s(u)), the bracket is
  // ((1 + s)^(-1/2) - 1) / u, finite at u = 0. Near the minimum s comes from
  // the Taylor series s = c1 u + c2 u^2 to avoid cancellation in V - V_min.
  auto counterterm_integral = [&](double x_min, double x_far, double omega, double floor,
                                  double dir, const char *what) {
    const auto d = well.derivatives(x_min);
    const double c1 = dir * d[3] / (3.0 * d[2]);
    const double c2 = d[4] / (12.0 * d[2]);
    const double span = std::abs(x_far - x_min);
    const double cut = 1e-3 * span;
    const double half_k = 0.5 * m * omega * omega;
    auto f = [&](double u) {
      double s = u * (c1 + c2 * u);
      if (u >= cut) {
        const double v = well.V(x_min + dir * u) - floor;
        if (v > 0.0)
          s = v / (half_k * u * u) - 1.0;
      }
      const double r = std::sqrt(1.0 + s);
      return -s / (r * (1.0 + r) * u);
    };
    // only ~1e-8 absolute is reachable where V - V_min cancels
    return integrate(f, 0.0, span, q, what, 1e-8);
  };
  parts.A_L = counterterm_integral(w.x_L, w.x_m, w.omega_L, 0.0, 1.0, "A_L");
  parts.A_R = counterterm_integral(w.x_R, w.x_m, w.omega_R, w.tilde_eps, -1.0, "A_R");

  const double e_l = w.E_bar;
  const double e_r = w.E_bar - w.tilde_eps;
  const double I_L = parts.I_L0 - e_l / (hbar * w.omega_L) *
                                      (std::log(2.0 * (w.x_m - w.x_L) /
                                                std::sqrt(2.0 * e_l / (m * w.omega_L * w.omega_L))) +
                                       parts.A_L + 0.5);
  const double I_R = parts.I_R0 - e_r / (hbar * w.omega_R) *
                                      (std::log(2.0 * (w.x_R - w.x_m) /
                                                std::sqrt(2.0 * e_r / (m * w.omega_R * w.omega_R))) +
                                       parts.A_R + 0.5);
  return {parts, I_L + I_R};
}

} // namespace tunnelkit
