#include "tunnelkit/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include <Eigen/Dense>

#include "tunnelkit/errors.hpp"

namespace tunnelkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Grid in working coordinates. Explicit bounds in the config refer to the raw
// x axis and are mirrored along with the potential.
GridSpec working_grid(const OracleGridConfig &cfg, const DoubleWell &well) {
  if (!cfg.x_min)
    return automatic_grid(well, cfg.n_points, cfg.richardson);
  GridSpec g;
  g.n_points = cfg.n_points;
  g.richardson = cfg.richardson;
  if (well.analysis().mirrored) {
    g.x_min = -*cfg.x_max;
    g.x_max = -*cfg.x_min;
  } else {
    g.x_min = *cfg.x_min;
    g.x_max = *cfg.x_max;
  }
  return g;
}

GridSpec raw_grid(GridSpec g, const DoubleWell &well) {
  if (well.analysis().mirrored) {
    const double lo = g.x_min;
    g.x_min = -g.x_max;
    g.x_max = -lo;
  }
  return g;
}

const OracleGridConfig &require_grid(const RunConfig &cfg) {
  if (!cfg.oracle_grid)
    throw Error(ErrorCode::InvalidConfig, "missing key 'oracle_grid'");
  return *cfg.oracle_grid;
}

double smoothstep(double t) {
  if (t <= 0.0)
    return 0.0;
  if (t >= 1.0)
    return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

AnalyzeOptions orientation_of(const RunConfig &cfg, const DoubleWell &base) {
  AnalyzeOptions opts = cfg.analysis;
  opts.orientation = base.analysis().mirrored ? AnalyzeOptions::Orientation::Mirror
                                              : AnalyzeOptions::Orientation::Preserve;
  return opts;
}

// The physical potential with working-coordinate bias tilde_eps. Smooth
// families get a step rising from the barrier top to the right minimum, which
// leaves both wells and the barrier top in place.
PotentialSpec biased_spec(const RunConfig &cfg, const DoubleWell &base, double tilde_eps) {
  PotentialSpec spec = cfg.potential;
  if (auto *osc = std::get_if<DoubleOscillator>(&spec.family)) {
    osc->tilde_eps = tilde_eps;
    return spec;
  }
  if (spec.bias)
    throw Error(ErrorCode::InvalidConfig,
                "a sweep that rebuilds the potential cannot add its bias step on top of "
                "'potential.bias'");
  const auto &w = base.analysis();
  spec.bias = BiasStep{tilde_eps - w.tilde_eps, base.to_raw(w.x_m), base.to_raw(w.x_R)};
  return spec;
}

DoubleWell biased_well(const RunConfig &cfg, const DoubleWell &base, double tilde_eps) {
  return analyze(biased_spec(cfg, base, tilde_eps), cfg.constants, orientation_of(cfg, base));
}

// -dI/d(tilde_eps) at fixed E_bar, for the potential at tilde_eps = 0.
double barrier_term(const RunConfig &cfg, const DoubleWell &base) {
  const double hbar = cfg.constants.hbar;
  if (const auto *osc = std::get_if<DoubleOscillator>(&cfg.potential.family)) {
    DoubleOscillator zero = *osc;
    zero.tilde_eps = 0.0;
    const double E = mean_energy(0.0, zero.omega_L, zero.omega_R, hbar);
    return -double_oscillator_bias_response(zero, cfg.constants, E, 0.0);
  }
  const DoubleWell well = biased_well(cfg, base, 0.0);
  const auto &w = well.analysis();
  auto step = [&](double x) { return smoothstep((x - w.x_m) / (w.x_R - w.x_m)); };
  return -inverse_momentum_moment(well, w.E_bar, step, cfg.quadrature);
}

// Outside the semiclassical regime the transcendental root may not exist; the
// closed-form routes are still reported and the row is flagged.
SplittingResult splitting_routes(const DoubleWell &barrier, const WellAnalysis &levels,
                                 const ActionResult &action, const QuadratureOptions &q,
                                 bool &transcendental_ok) {
  try {
    transcendental_ok = true;
    return compute_splitting(barrier, levels, action, q);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::RootNotBracketed && e.code() != ErrorCode::DomainError)
      throw;
    transcendental_ok = false;
    return closed_form_splitting(levels, action, barrier.hbar());
  }
}

// The double oscillator's slope jumps at the barrier top, where the WKB
// condition fails; its actions are still well defined, so it is only flagged.
void flag_kink(const RunConfig &cfg, Validity &v) {
  if (std::holds_alternative<DoubleOscillator>(cfg.potential.family))
    v.flags.emplace_back("double_oscillator_kink");
}

} // namespace

Validity assess_validity(const WellAnalysis &levels, const SplittingResult &s,
                         const ValidityThresholds &t, double hbar) {
  Validity v;
  v.eps_over_hw = std::abs(levels.eps) / (hbar * levels.omega_L);
  v.gamow = std::exp(-s.I_bar);
  v.lambda_L = levels.E_bar / levels.V0;
  v.lambda_R = (levels.E_bar - levels.tilde_eps) / (levels.V0 - levels.tilde_eps);
  v.bprime_ratio = 4.0 * s.b_prime * s.b_prime / (s.delta_full * s.delta_full);
  if (v.eps_over_hw > t.max_eps_over_hw)
    v.flags.emplace_back("eps_over_hw");
  if (v.gamow > t.max_gamow)
    v.flags.emplace_back("gamow");
  if (std::max(v.lambda_L, v.lambda_R) > t.max_lambda)
    v.flags.emplace_back("lambda");
  if (!(v.bprime_ratio <= t.max_bprime_ratio))
    v.flags.emplace_back("b_prime");
  return v;
}

AnalyzeReport run_analyze(const RunConfig &cfg) {
  const DoubleWell well = analyze(cfg.potential, cfg.constants, cfg.analysis);
  AnalyzeReport r;
  r.well = well.analysis();
  r.action = evaluate_action(well, r.well.E_bar, cfg.quadrature);
  bool solved = false;
  r.splitting = splitting_routes(well, r.well, r.action, cfg.quadrature, solved);
  r.parabolic = parabolic_diagnostic(well, r.action.a_bar, r.action.b_bar);
  if (const auto *osc = std::get_if<DoubleOscillator>(&cfg.potential.family);
      osc && !cfg.potential.bias)
    r.closed_form = double_oscillator_action(*osc, cfg.constants, r.well.E_bar, r.well.tilde_eps);
  r.validity = assess_validity(r.well, r.splitting, cfg.validity, cfg.constants.hbar);
  if (!solved)
    r.validity.flags.emplace_back("transcendental");
  flag_kink(cfg, r.validity);
  try {
    const auto [parts, I_asym] = asymptotic_action(well, cfg.quadrature);
    r.asymptotic_parts = parts;
    r.asymptotic_I = I_asym;
  } catch (const Error &) {
  }
  r.wkb_over_oracle = kNaN;
  if (cfg.oracle_grid) {
    const GridSpec g = working_grid(*cfg.oracle_grid, well);
    r.spectrum = eigen_lowest_two(well, g);
    r.grid = raw_grid(g, well);
    r.wkb_over_oracle = r.splitting.delta_E / r.spectrum->splitting;
  }
  return r;
}

FitResult fit_log_quadratic(const std::vector<double> &x, const std::vector<double> &delta) {
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 5 || delta.size() != x.size())
    throw Error(ErrorCode::FitIllConditioned,
                "the quadratic fit needs at least 5 sweep points, got " + std::to_string(n));
  double scale = 0.0;
  for (double v : x)
    scale = std::max(scale, std::abs(v));
  if (!(scale > 0.0))
    throw Error(ErrorCode::FitIllConditioned, "sweep range has zero width");
  // columns in x / scale keep the design matrix well scaled
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(delta[i] > 0.0))
      throw Error(ErrorCode::FitIllConditioned, "Delta must be positive to fit ln Delta");
    const double t = x[i] / scale;
    A(i, 0) = 1.0;
    A(i, 1) = t;
    A(i, 2) = t * t;
    y(i) = std::log(delta[i]);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 3)
    throw Error(ErrorCode::FitIllConditioned,
                "sweep points do not determine a quadratic (need at least 3 distinct values)");
  const Eigen::Vector3d c = qr.solve(y);
  FitResult f;
  f.c0 = std::exp(c(0));
  f.c1 = c(1) / scale;
  f.c2 = c(2) / (scale * scale);
  f.rms_residual = std::sqrt((A * c - y).squaredNorm() / static_cast<double>(n));
  return f;
}

int sweep_threads(int jobs) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char *env = std::getenv("TUNNELKIT_THREADS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw Error(ErrorCode::InvalidConfig,
                  std::string("TUNNELKIT_THREADS must be a positive integer, got '") + env + "'");
    n = static_cast<int>(std::min<long>(v, 1 << 16));
  }
  return std::max(1, std::min(n, jobs));
}

SweepReport run_sweep(const RunConfig &cfg) {
  if (!cfg.sweep)
    throw Error(ErrorCode::InvalidConfig, "missing key 'sweep'");
  const SweepConfig &sw = *cfg.sweep;
  if (sw.steps < 5)
    throw Error(ErrorCode::FitIllConditioned,
                "the quadratic fit needs at least 5 sweep steps, got " + std::to_string(sw.steps));
  if (sw.from == sw.to)
    throw Error(ErrorCode::FitIllConditioned, "sweep range has zero width (from == to)");

  const DoubleWell base = analyze(cfg.potential, cfg.constants, cfg.analysis);
  const double hbar = cfg.constants.hbar;
  const bool physical_needed = sw.model == SweepModel::SmoothStep || cfg.oracle_grid.has_value();

  SweepReport report;
  report.model = sw.model;
  report.rows.resize(static_cast<std::size_t>(sw.steps));
  std::vector<std::exception_ptr> errors(report.rows.size());

  auto compute_row = [&](std::size_t i) {
    SweepRow &row = report.rows[i];
    const double t = static_cast<double>(i) / static_cast<double>(sw.steps - 1);
    row.tilde_eps = i + 1 == report.rows.size() ? sw.to : sw.from + (sw.to - sw.from) * t;
    std::optional<DoubleWell> physical;
    if (physical_needed)
      physical.emplace(biased_well(cfg, base, row.tilde_eps));
    const DoubleWell &barrier = sw.model == SweepModel::SmoothStep ? *physical : base;
    row.levels = sw.model == SweepModel::SmoothStep
                     ? physical->analysis()
                     : with_bias(base.analysis(), row.tilde_eps, hbar);
    const auto action = evaluate_action(barrier, row.levels.E_bar, cfg.quadrature);
    bool solved = false;
    row.splitting = splitting_routes(barrier, row.levels, action, cfg.quadrature, solved);
    row.validity = assess_validity(row.levels, row.splitting, cfg.validity, hbar);
    if (!solved)
      row.validity.flags.emplace_back("transcendental");
    flag_kink(cfg, row.validity);
    if (cfg.oracle_grid)
      row.oracle = eigen_lowest_two(*physical, working_grid(*cfg.oracle_grid, *physical));
  };

  report.threads = sweep_threads(sw.steps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < report.rows.size(); i = next++) {
      try {
        compute_row(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (report.threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < report.threads; ++k)
      pool.emplace_back(worker);
    for (auto &th : pool)
      th.join();
  }
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);

  std::vector<double> xs, deltas;
  for (const auto &row : report.rows) {
    xs.push_back(row.tilde_eps);
    deltas.push_back(row.splitting.delta);
  }
  report.fit = fit_log_quadratic(xs, deltas);

  const WellAnalysis zero = with_bias(base.analysis(), 0.0, hbar);
  const double slope = action_slope(base, zero.E_bar, cfg.quadrature);
  report.c1_analytic = k_constant() / 4.0 / (hbar * zero.omega_L) *
                           (zero.omega_R - zero.omega_L) / zero.omega_R -
                       0.5 * slope;
  report.c1_barrier_term = sw.model == SweepModel::SmoothStep ? barrier_term(cfg, base) : 0.0;
  report.c1_predicted = report.c1_analytic + report.c1_barrier_term;
  return report;
}

OracleReport run_oracle(const RunConfig &cfg) {
  const OracleGridConfig &grid = require_grid(cfg);
  OracleReport r;
  std::optional<DoubleWell> well;
  try {
    well.emplace(analyze(cfg.potential, cfg.constants, cfg.analysis));
  } catch (const Error &e) {
    if (e.category() != ErrorCategory::Regime)
      throw;
    if (!grid.x_min)
      throw Error(ErrorCode::InvalidConfig,
                  "'oracle_grid' needs x_min and x_max when the potential is not a double well (" +
                      std::string(e.what()) + ")");
  }
  if (well) {
    const GridSpec g = working_grid(grid, *well);
    r.spectrum = eigen_lowest_two(*well, g);
    r.grid = raw_grid(g, *well);
    r.well_relative = true;
    r.zero_shift = well->analysis().zero_shift;
  } else {
    r.grid = GridSpec{*grid.x_min, *grid.x_max, grid.n_points, grid.richardson};
    r.spectrum = eigen_lowest_two(cfg.potential, cfg.constants, r.grid);
  }
  return r;
}

CompareReport run_compare(const RunConfig &cfg) {
  require_grid(cfg);
  const AnalyzeReport a = run_analyze(cfg);
  const double oracle = a.spectrum->splitting;
  const double eps = a.well.eps;
  auto row = [&](std::string name, double dE) {
    return CompareRow{std::move(name), dE, std::abs(dE - oracle) / oracle};
  };
  CompareReport c;
  c.rows.push_back(row("zeroth_order", level_splitting(eps, a.splitting.delta_zeroth)));
  c.rows.push_back(row("first_order", a.splitting.delta_E));
  c.rows.push_back(row("transcendental", a.splitting.delta_E_transcendental));
  c.rows.push_back(row("oracle", oracle));
  c.oracle = *a.spectrum;
  c.validity = a.validity;
  return c;
}

} // namespace tunnelkit
