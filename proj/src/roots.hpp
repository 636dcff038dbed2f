#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "tunnelkit/errors.hpp"

namespace tunnelkit::detail {

/// Root of f in [lo, hi] where f(lo) and f(hi) have opposite signs (or one of
/// them is zero). Iterates until the bracket is narrower than abs_tol.
template <class F>
double bracketed_root(F &&f, double lo, double hi, double f_lo, double f_hi,
                      double abs_tol, ErrorCode on_failure = ErrorCode::RootNotBracketed) {
  if (f_lo == 0.0)
    return lo;
  if (f_hi == 0.0)
    return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0))
    throw Error(on_failure, "function does not change sign on [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  std::uintmax_t max_iter = 300;
  auto tol = [abs_tol](double a, double b) { return std::abs(b - a) <= abs_tol; };
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
  return 0.5 * (a + b);
}

template <class F>
double bracketed_root(F &&f, double lo, double hi, double abs_tol,
                      ErrorCode on_failure = ErrorCode::RootNotBracketed) {
  return bracketed_root(f, lo, hi, f(lo), f(hi), abs_tol, on_failure);
}

} // namespace tunnelkit::detail
