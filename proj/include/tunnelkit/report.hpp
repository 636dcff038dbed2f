#pragma once

#include <string>

#include "tunnelkit/commands.hpp"

namespace tunnelkit {

enum class Format { Csv, Json };

/// Header shared by the analyze and sweep CSV outputs.
inline constexpr const char *kCsvHeader =
    "tilde_eps,eps,E_bar,I_bar,I_slope,delta,delta_E,E_plus,E_minus,dE_trans_plus,"
    "dE_trans_minus,oracle_E0,oracle_E1,oracle_split,warn_flags";

/// 17 significant digits; NaN and infinities become an empty field.
std::string format_number(double x);

std::string render_analyze(const AnalyzeReport &r, Format f);
/// CSV gives the rows only; JSON adds the fit and the analytic slope.
std::string render_sweep(const SweepReport &r, Format f);
/// One-line JSON summary of the fit, printed beside the CSV rows.
std::string render_fit_summary(const SweepReport &r);
std::string render_oracle(const OracleReport &r, Format f);
std::string render_compare(const CompareReport &r, Format f);

} // namespace tunnelkit
