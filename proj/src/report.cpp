#include "tunnelkit/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace tunnelkit {

namespace {

using nlohmann::ordered_json;

ordered_json num(double x) {
  if (!std::isfinite(x))
    return nullptr;
  return x;
}

std::string join_flags(const std::vector<std::string> &flags) {
  std::string out;
  for (const auto &f : flags) {
    if (!out.empty())
      out += '|';
    out += f;
  }
  return out;
}

ordered_json to_json(const WellAnalysis &w) {
  return {{"x_L", num(w.x_L)},         {"x_R", num(w.x_R)},       {"x_m", num(w.x_m)},
          {"omega_L", num(w.omega_L)}, {"omega_R", num(w.omega_R)}, {"tilde_eps", num(w.tilde_eps)},
          {"eps", num(w.eps)},         {"E_bar", num(w.E_bar)},   {"V0", num(w.V0)},
          {"zero_shift", num(w.zero_shift)}, {"mirrored", w.mirrored}};
}

ordered_json to_json(const ActionResult &a) {
  return {{"E", num(a.E)},     {"a_bar", num(a.a_bar)}, {"b_bar", num(a.b_bar)},
          {"I", num(a.I)},     {"I_L", num(a.I_L)},     {"I_R", num(a.I_R)},
          {"I_slope", num(a.I_slope)}};
}

ordered_json to_json(const SplittingResult &s) {
  const auto &t = s.transcendental;
  return {{"delta", num(s.delta)},
          {"delta_zeroth", num(s.delta_zeroth)},
          {"delta_E", num(s.delta_E)},
          {"delta_E_quadratic", num(s.delta_E_quadratic)},
          {"delta_E_transcendental", num(s.delta_E_transcendental)},
          {"dE_plus", num(s.dE_plus)},
          {"dE_minus", num(s.dE_minus)},
          {"E_plus", num(s.E_plus)},
          {"E_minus", num(s.E_minus)},
          {"b_prime", num(s.b_prime)},
          {"u", num(s.u)},
          {"I_bar", num(s.I_bar)},
          {"I_slope", num(s.I_slope)},
          {"transcendental",
           {{"E_plus", num(t.E_plus)},
            {"E_minus", num(t.E_minus)},
            {"dE_plus", num(t.dE_plus)},
            {"dE_minus", num(t.dE_minus)},
            {"residual_plus", num(t.residual_plus)},
            {"residual_minus", num(t.residual_minus)},
            {"zeta_L_plus", num(t.zeta_L_plus)},
            {"zeta_R_plus", num(t.zeta_R_plus)},
            {"zeta_L_minus", num(t.zeta_L_minus)},
            {"zeta_R_minus", num(t.zeta_R_minus)}}}};
}

ordered_json to_json(const Validity &v) {
  return {{"eps_over_hw", num(v.eps_over_hw)},
          {"gamow", num(v.gamow)},
          {"lambda_L", num(v.lambda_L)},
          {"lambda_R", num(v.lambda_R)},
          {"bprime_ratio", num(v.bprime_ratio)},
          {"warn_flags", v.flags}};
}

ordered_json to_json(const GridSpec &g) {
  return {{"x_min", num(g.x_min)},
          {"x_max", num(g.x_max)},
          {"n_points", g.n_points},
          {"richardson", g.richardson}};
}

ordered_json to_json(const Spectrum &s) {
  ordered_json levels = ordered_json::array();
  for (const auto &l : s.levels)
    levels.push_back({{"n_points", l.n_points},
                      {"h", num(l.h)},
                      {"E0", num(l.E0)},
                      {"E1", num(l.E1)},
                      {"splitting", num(l.E1 - l.E0)}});
  return {{"E0", num(s.E0)},
          {"E1", num(s.E1)},
          {"splitting", num(s.splitting)},
          {"est_error", num(s.est_error)},
          {"splitting_est_error", num(s.splitting_est_error)},
          {"grid_levels", levels}};
}

ordered_json to_json(const FitResult &f) {
  return {{"c0", num(f.c0)}, {"c1", num(f.c1)}, {"c2", num(f.c2)},
          {"rms_residual", num(f.rms_residual)}};
}

std::string csv_row(double tilde_eps, const WellAnalysis &w, const SplittingResult &s,
                    const std::optional<Spectrum> &oracle, const Validity &v) {
  const double nan = std::nan("");
  const double fields[] = {tilde_eps,
                           w.eps,
                           w.E_bar,
                           s.I_bar,
                           s.I_slope,
                           s.delta,
                           s.delta_E,
                           s.E_plus,
                           s.E_minus,
                           s.transcendental.dE_plus,
                           s.transcendental.dE_minus,
                           oracle ? oracle->E0 : nan,
                           oracle ? oracle->E1 : nan,
                           oracle ? oracle->splitting : nan};
  std::string out;
  for (double x : fields) {
    out += format_number(x);
    out += ',';
  }
  out += join_flags(v.flags);
  out += '\n';
  return out;
}

const char *model_name(SweepModel m) {
  return m == SweepModel::FrozenBarrier ? "frozen_barrier" : "smooth_step";
}

ordered_json sweep_summary(const SweepReport &r) {
  return {{"model", model_name(r.model)},
          {"fit", to_json(r.fit)},
          {"c1_analytic", num(r.c1_analytic)},
          {"c1_barrier_term", num(r.c1_barrier_term)},
          {"c1_predicted", num(r.c1_predicted)},
          {"c1_relative_deviation", num(std::abs(r.fit.c1 - r.c1_predicted) /
                                        std::abs(r.c1_predicted))}};
}

std::string dump(const ordered_json &j) { return j.dump(2) + "\n"; }

} // namespace

std::string format_number(double x) {
  if (!std::isfinite(x))
    return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string render_analyze(const AnalyzeReport &r, Format f) {
  if (f == Format::Csv)
    return std::string(kCsvHeader) + "\n" +
           csv_row(r.well.tilde_eps, r.well, r.splitting, r.spectrum, r.validity);
  ordered_json j;
  j["command"] = "analyze";
  j["well"] = to_json(r.well);
  j["action"] = to_json(r.action);
  j["splitting"] = to_json(r.splitting);
  j["parabolic_diagnostic"] = {{"left", num(r.parabolic.left)},
                               {"right", num(r.parabolic.right)}};
  if (r.closed_form)
    j["closed_form_action"] = {{"I_L", num(r.closed_form->I_L)},
                               {"I_R", num(r.closed_form->I_R)},
                               {"lambda_L", num(r.closed_form->lambda_L)},
                               {"lambda_R", num(r.closed_form->lambda_R)}};
  if (r.asymptotic_parts) {
    const auto &a = *r.asymptotic_parts;
    j["asymptotic_action"] = {{"I_L0", num(a.I_L0)},
                              {"I_R0", num(a.I_R0)},
                              {"A_L", num(a.A_L)},
                              {"A_R", num(a.A_R)},
                              {"lambda_L", num(a.lambda_L)},
                              {"lambda_R", num(a.lambda_R)},
                              {"I_asym", num(r.asymptotic_I)},
                              {"I_asym_minus_I", num(r.asymptotic_I - r.action.I)}};
  }
  if (r.spectrum) {
    j["oracle_grid"] = to_json(*r.grid);
    j["oracle"] = to_json(*r.spectrum);
    j["wkb_over_oracle"] = num(r.wkb_over_oracle);
  }
  j["validity"] = to_json(r.validity);
  j["warn_flags"] = r.validity.flags;
  return dump(j);
}

std::string render_sweep(const SweepReport &r, Format f) {
  if (f == Format::Csv) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto &row : r.rows)
      out += csv_row(row.tilde_eps, row.levels, row.splitting, row.oracle, row.validity);
    return out;
  }
  ordered_json j{{"command", "sweep"}};
  j.update(sweep_summary(r));
  ordered_json rows = ordered_json::array();
  for (const auto &row : r.rows) {
    ordered_json o{{"tilde_eps", num(row.tilde_eps)},
                   {"levels", to_json(row.levels)},
                   {"splitting", to_json(row.splitting)},
                   {"validity", to_json(row.validity)},
                   {"warn_flags", row.validity.flags}};
    if (row.oracle)
      o["oracle"] = to_json(*row.oracle);
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  return dump(j);
}

std::string render_fit_summary(const SweepReport &r) { return sweep_summary(r).dump() + "\n"; }

std::string render_oracle(const OracleReport &r, Format f) {
  if (f == Format::Csv) {
    std::string out = "grid,n_points,E0,E1,splitting,est_error\n";
    for (const auto &l : r.spectrum.levels)
      out += "h=" + format_number(l.h) + "," + std::to_string(l.n_points) + "," +
             format_number(l.E0) + "," + format_number(l.E1) + "," +
             format_number(l.E1 - l.E0) + ",\n";
    if (r.grid.richardson)
      out += "richardson,," + format_number(r.spectrum.E0) + "," +
             format_number(r.spectrum.E1) + "," + format_number(r.spectrum.splitting) + "," +
             format_number(r.spectrum.est_error) + "\n";
    return out;
  }
  ordered_json j;
  j["command"] = "oracle";
  j["grid"] = to_json(r.grid);
  j["energy_reference"] = r.well_relative ? "lower_well_bottom" : "raw";
  j["zero_shift"] = num(r.zero_shift);
  j["spectrum"] = to_json(r.spectrum);
  return dump(j);
}

std::string render_compare(const CompareReport &r, Format f) {
  if (f == Format::Csv) {
    std::string out = "method,delta_E,rel_error_vs_oracle,warn_flags\n";
    for (const auto &row : r.rows)
      out += row.method + "," + format_number(row.delta_E) + "," +
             format_number(row.rel_error) + "," + join_flags(r.validity.flags) + "\n";
    return out;
  }
  ordered_json rows = ordered_json::array();
  for (const auto &row : r.rows)
    rows.push_back({{"method", row.method},
                    {"delta_E", num(row.delta_E)},
                    {"rel_error_vs_oracle", num(row.rel_error)}});
  ordered_json j{{"command", "compare"},
                 {"rows", rows},
                 {"oracle", to_json(r.oracle)},
                 {"validity", to_json(r.validity)},
                 {"warn_flags", r.validity.flags}};
  return dump(j);
}

} // namespace tunnelkit
