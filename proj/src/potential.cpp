#include "tunnelkit/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roots.hpp"
#include "tunnelkit/errors.hpp"

namespace tunnelkit {

namespace {

bool finite(double v) { return std::isfinite(v); }

std::vector<double> trimmed(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0)
    c.pop_back();
  return c;
}

// Horner's scheme carrying the first four derivatives.
std::array<double, 5> polynomial_derivatives(const std::vector<double> &c, double x) {
  std::array<double, 5> p{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    for (int k = 4; k >= 1; --k)
      p[k] = p[k] * x + p[k - 1];
    p[0] = p[0] * x + *it;
  }
  // p[k] holds V^(k) / k!
  p[2] *= 2.0;
  p[3] *= 6.0;
  p[4] *= 24.0;
  return p;
}

std::array<double, 5> step_derivatives(const BiasStep &b, double x) {
  const double width = b.x_to - b.x_from;
  const double t = (x - b.x_from) / width;
  if (t <= 0.0)
    return {0.0, 0.0, 0.0, 0.0, 0.0};
  if (t >= 1.0)
    return {b.amount, 0.0, 0.0, 0.0, 0.0};
  const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  const double s1 = 30.0 * t * t * (1.0 - t) * (1.0 - t);
  const double s2 = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
  const double s3 = 60.0 - 360.0 * t + 360.0 * t * t;
  const double s4 = -360.0 + 720.0 * t;
  return {b.amount * s, b.amount * s1 / width, b.amount * s2 / (width * width),
          b.amount * s3 / (width * width * width),
          b.amount * s4 / (width * width * width * width)};
}

} // namespace

void PhysConstants::validate() const {
  if (!finite(hbar) || hbar <= 0.0)
    throw Error(ErrorCode::InvalidSpec, "hbar must be positive and finite");
  if (!finite(mass) || mass <= 0.0)
    throw Error(ErrorCode::InvalidSpec, "mass must be positive and finite");
}

void validate(const PotentialSpec &spec) {
  std::visit(
      [](const auto &f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, BiasedQuartic>) {
          if (!finite(f.alpha) || !finite(f.a) || !finite(f.beta))
            throw Error(ErrorCode::InvalidSpec, "biased_quartic parameters must be finite");
          if (f.alpha <= 0.0 || f.a <= 0.0)
            throw Error(ErrorCode::InvalidSpec, "biased_quartic needs alpha > 0 and a > 0");
        } else if constexpr (std::is_same_v<T, DoubleOscillator>) {
          if (!finite(f.omega_L) || !finite(f.omega_R) || !finite(f.tilde_eps) ||
              !finite(f.V0))
            throw Error(ErrorCode::InvalidSpec, "double_oscillator parameters must be finite");
          if (f.omega_L <= 0.0 || f.omega_R <= 0.0)
            throw Error(ErrorCode::InvalidSpec, "double_oscillator frequencies must be positive");
          if (!(f.V0 > 0.0) || !(f.tilde_eps >= 0.0) || !(f.V0 > f.tilde_eps))
            throw Error(ErrorCode::InvalidSpec,
                        "double_oscillator needs V0 > tilde_eps >= 0 and V0 > 0");
        } else {
          for (double c : f.coeffs)
            if (!finite(c))
              throw Error(ErrorCode::InvalidSpec, "polynomial coefficients must be finite");
          const auto c = trimmed(f.coeffs);
          if (c.size() < 3 || (c.size() - 1) % 2 != 0 || c.back() <= 0.0)
            throw Error(ErrorCode::InvalidSpec,
                        "polynomial must have even degree >= 2 and a positive leading "
                        "coefficient");
        }
      },
      spec.family);
  if (spec.bias) {
    const auto &b = *spec.bias;
    if (!finite(b.amount) || !finite(b.x_from) || !finite(b.x_to) || b.x_from == b.x_to)
      throw Error(ErrorCode::InvalidSpec, "bias step needs finite values and x_from != x_to");
  }
}

Potential::Potential(PotentialSpec spec, PhysConstants consts)
    : spec_(std::move(spec)), consts_(consts) {
  consts_.validate();
  validate(spec_);
  if (auto *poly = std::get_if<Polynomial>(&spec_.family))
    poly->coeffs = trimmed(poly->coeffs);
  if (const auto *osc = std::get_if<DoubleOscillator>(&spec_.family)) {
    const double m = consts_.mass;
    osc_x_L_ = -std::sqrt(2.0 * osc->V0 / (m * osc->omega_L * osc->omega_L));
    osc_x_R_ = std::sqrt(2.0 * (osc->V0 - osc->tilde_eps) / (m * osc->omega_R * osc->omega_R));
  }
}

std::array<double, 5> Potential::derivatives(double x) const {
  std::array<double, 5> d = std::visit(
      [&](const auto &f) -> std::array<double, 5> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, BiasedQuartic>) {
          const double a2 = f.a * f.a;
          const double q = x * x - a2;
          return {f.alpha * q * q + f.beta * x, 4.0 * f.alpha * x * q + f.beta,
                  f.alpha * (12.0 * x * x - 4.0 * a2), 24.0 * f.alpha * x, 24.0 * f.alpha};
        } else if constexpr (std::is_same_v<T, DoubleOscillator>) {
          const double m = consts_.mass;
          if (x <= 0.0) {
            const double k = m * f.omega_L * f.omega_L;
            const double u = x - osc_x_L_;
            return {0.5 * k * u * u, k * u, k, 0.0, 0.0};
          }
          const double k = m * f.omega_R * f.omega_R;
          const double u = x - osc_x_R_;
          return {f.tilde_eps + 0.5 * k * u * u, k * u, k, 0.0, 0.0};
        } else {
          return polynomial_derivatives(f.coeffs, x);
        }
      },
      spec_.family);
  if (spec_.bias) {
    const auto s = step_derivatives(*spec_.bias, x);
    for (std::size_t k = 0; k < d.size(); ++k)
      d[k] += s[k];
  }
  return d;
}

std::pair<double, double> Potential::critical_point_window() const {
  double radius = std::visit(
      [&](const auto &f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, BiasedQuartic>) {
          return 1.0 + std::max(f.a * f.a, std::abs(f.beta) / (4.0 * f.alpha));
        } else if constexpr (std::is_same_v<T, DoubleOscillator>) {
          return 1.0 + std::max(-osc_x_L_, osc_x_R_);
        } else {
          // Cauchy bound on the roots of V'
          const auto &c = f.coeffs;
          const std::size_t n = c.size() - 1;
          const double lead = static_cast<double>(n) * c[n];
          double r = 0.0;
          for (std::size_t i = 1; i < n; ++i)
            r = std::max(r, std::abs(static_cast<double>(i) * c[i]) / lead);
          return 1.0 + r;
        }
      },
      spec_.family);
  double lo = -radius, hi = radius;
  if (spec_.bias) {
    lo = std::min({lo, spec_.bias->x_from, spec_.bias->x_to});
    hi = std::max({hi, spec_.bias->x_from, spec_.bias->x_to});
  }
  return {lo, hi};
}

double evaluate(const PotentialSpec &spec, const PhysConstants &consts, double x) {
  return Potential(spec, consts).value(x);
}

double evaluate_d1(const PotentialSpec &spec, const PhysConstants &consts, double x) {
  return Potential(spec, consts).d1(x);
}

double evaluate_d2(const PotentialSpec &spec, const PhysConstants &consts, double x) {
  return Potential(spec, consts).d2(x);
}

double zero_point_bias(double tilde_eps, double omega_L, double omega_R, double hbar) {
  return tilde_eps + hbar * (omega_R - omega_L) / 2.0;
}

double mean_energy(double tilde_eps, double omega_L, double omega_R, double hbar) {
  return hbar * (omega_L + omega_R) / 4.0 + tilde_eps / 2.0;
}

WellAnalysis with_bias(WellAnalysis analysis, double tilde_eps, double hbar) {
  analysis.tilde_eps = tilde_eps;
  analysis.eps = zero_point_bias(tilde_eps, analysis.omega_L, analysis.omega_R, hbar);
  analysis.E_bar = mean_energy(tilde_eps, analysis.omega_L, analysis.omega_R, hbar);
  return analysis;
}

DoubleWell::DoubleWell(Potential potential, WellAnalysis analysis)
    : potential_(std::move(potential)), analysis_(analysis),
      sign_(analysis.mirrored ? -1.0 : 1.0) {}

std::array<double, 5> DoubleWell::derivatives(double x) const {
  auto d = potential_.derivatives(sign_ * x);
  d[0] -= analysis_.zero_shift;
  d[1] *= sign_;
  d[3] *= sign_;
  return d;
}

double DoubleWell::V(double x) const {
  return potential_.value(sign_ * x) - analysis_.zero_shift;
}

double DoubleWell::dV(double x) const { return sign_ * potential_.d1(sign_ * x); }

double DoubleWell::d2V(double x) const { return potential_.d2(sign_ * x); }

bool DoubleWell::is_double_oscillator() const {
  return std::holds_alternative<DoubleOscillator>(potential_.spec().family) &&
         !potential_.spec().bias;
}

namespace {

struct CriticalPoint {
  double x;
  bool minimum;
};

DoubleWell analyze_double_oscillator(Potential potential) {
  const auto &osc = std::get<DoubleOscillator>(potential.spec().family);
  const double m = potential.consts().mass;
  const double hbar = potential.consts().hbar;
  WellAnalysis w;
  w.x_L = -std::sqrt(2.0 * osc.V0 / (m * osc.omega_L * osc.omega_L));
  w.x_R = std::sqrt(2.0 * (osc.V0 - osc.tilde_eps) / (m * osc.omega_R * osc.omega_R));
  w.x_m = 0.0;
  w.omega_L = osc.omega_L;
  w.omega_R = osc.omega_R;
  w.V0 = osc.V0;
  w = with_bias(w, osc.tilde_eps, hbar);
  if (w.V0 <= w.E_bar)
    throw Error(ErrorCode::DegenerateBarrier,
                "barrier height " + std::to_string(w.V0) + " does not exceed E_bar " +
                    std::to_string(w.E_bar));
  return DoubleWell(std::move(potential), w);
}

} // namespace

DoubleWell analyze(const PotentialSpec &spec, const PhysConstants &consts,
                   const AnalyzeOptions &options) {
  Potential potential(spec, consts);
  if (std::holds_alternative<DoubleOscillator>(spec.family) && !spec.bias)
    return analyze_double_oscillator(std::move(potential));

  const auto [lo, hi] = options.window.value_or(potential.critical_point_window());
  if (!(hi > lo))
    throw Error(ErrorCode::InvalidConfig, "scan window must satisfy lo < hi");
  const int n = std::max(options.scan_points, 16);
  const double width = hi - lo;

  std::vector<double> xs(n), slope(n);
  double v_min = potential.value(lo), v_max = v_min;
  for (int i = 0; i < n; ++i) {
    xs[i] = lo + width * static_cast<double>(i) / static_cast<double>(n - 1);
    const auto d = potential.derivatives(xs[i]);
    slope[i] = d[1];
    v_min = std::min(v_min, d[0]);
    v_max = std::max(v_max, d[0]);
  }

  const double tol = 1e-13 * std::max(width, 1.0);
  auto dv = [&](double x) { return potential.d1(x); };
  std::vector<CriticalPoint> points;
  for (int i = 0; i + 1 < n; ++i) {
    const double s0 = slope[i], s1 = slope[i + 1];
    if (s0 == 0.0) {
      if (i == 0)
        continue;
      const double before = slope[i - 1];
      if (before < 0.0 && s1 > 0.0)
        points.push_back({xs[i], true});
      else if (before > 0.0 && s1 < 0.0)
        points.push_back({xs[i], false});
      continue;
    }
    if (s1 == 0.0 || (s0 < 0.0) == (s1 < 0.0))
      continue;
    const double x = detail::bracketed_root(dv, xs[i], xs[i + 1], s0, s1, tol);
    points.push_back({x, s0 < 0.0});
  }

  std::vector<double> minima, maxima;
  for (const auto &p : points)
    (p.minimum ? minima : maxima).push_back(p.x);
  if (minima.size() < 2)
    throw Error(ErrorCode::FewerThanTwoMinima,
                "found " + std::to_string(minima.size()) + " minimum/minima in [" +
                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
  if (minima.size() > 2)
    throw Error(ErrorCode::TooManyMinima,
                "found " + std::to_string(minima.size()) + " minima; only double wells are supported");

  const double xa = minima[0], xb = minima[1];
  double xm = 0.0;
  bool have_max = false;
  for (double x : maxima)
    if (x > xa && x < xb) {
      xm = x;
      have_max = true;
    }
  if (!have_max)
    throw Error(ErrorCode::DegenerateBarrier, "no barrier maximum between the minima");

  // curvature scale of the scanned window, for degenerate-extremum detection
  const double curvature_floor = 1e-10 * std::max(v_max - v_min, 1e-300) / (width * width);
  for (double x : minima)
    if (potential.d2(x) <= curvature_floor)
      throw Error(ErrorCode::NonConvexMinimum,
                  "V'' <= 0 at the minimum near x = " + std::to_string(x));
  if (-potential.d2(xm) <= curvature_floor)
    throw Error(ErrorCode::DegenerateBarrier, "V'' >= 0 at the barrier maximum");

  using Orientation = AnalyzeOptions::Orientation;
  // minima equal to rounding are left as labelled
  const double level_tol = 1e-12 * (std::abs(potential.value(xm)) + std::abs(potential.value(xa)));
  const bool mirror = options.orientation == Orientation::Mirror ||
                      (options.orientation == Orientation::Auto &&
                       potential.value(xb) < potential.value(xa) - level_tol);
  const double m = consts.mass;
  WellAnalysis w;
  w.mirrored = mirror;
  if (mirror) {
    w.x_L = -xb;
    w.x_R = -xa;
    w.x_m = -xm;
    w.zero_shift = potential.value(xb);
    w.omega_L = std::sqrt(potential.d2(xb) / m);
    w.omega_R = std::sqrt(potential.d2(xa) / m);
    w.tilde_eps = potential.value(xa) - w.zero_shift;
  } else {
    w.x_L = xa;
    w.x_R = xb;
    w.x_m = xm;
    w.zero_shift = potential.value(xa);
    w.omega_L = std::sqrt(potential.d2(xa) / m);
    w.omega_R = std::sqrt(potential.d2(xb) / m);
    w.tilde_eps = potential.value(xb) - w.zero_shift;
  }
  w.V0 = potential.value(xm) - w.zero_shift;
  w = with_bias(w, w.tilde_eps, consts.hbar);
  if (w.V0 <= w.E_bar)
    throw Error(ErrorCode::DegenerateBarrier,
                "barrier height " + std::to_string(w.V0) + " does not exceed E_bar " +
                    std::to_string(w.E_bar) + "; the semiclassical treatment does not apply");
  return DoubleWell(std::move(potential), w);
}

ParabolicDiagnostic parabolic_diagnostic(const DoubleWell &well, double a_bar,
                                         double b_bar) {
  const auto &w = well.analysis();
  const auto dl = well.derivatives(w.x_L);
  const auto dr = well.derivatives(w.x_R);
  return {std::abs(dl[3] * (a_bar - w.x_L)) / (3.0 * dl[2]),
          std::abs(dr[3] * (w.x_R - b_bar)) / (3.0 * dr[2])};
}

Polynomial mirrored(const Polynomial &poly) {
  Polynomial out = poly;
  for (std::size_t i = 1; i < out.coeffs.size(); i += 2)
    out.coeffs[i] = -out.coeffs[i];
  return out;
}

} // namespace tunnelkit
