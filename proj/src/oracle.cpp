#include "tunnelkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "tunnelkit/action.hpp"
#include "tunnelkit/errors.hpp"

namespace tunnelkit {

namespace {

// The doublet splitting can be many orders of magnitude below the norm of the
// finite-difference operator, so Sturm counts run in quad precision.
#if defined(__SIZEOF_FLOAT128__)
using wide = __float128;
#else
using wide = long double;
#endif

struct Lowest {
  wide E0;
  wide E1;
};

class SturmTridiagonal {
public:
  SturmTridiagonal(std::vector<wide> diag, wide off)
      : diag_(std::move(diag)), off2_(off * off) {}

  int count_below(wide lambda) const {
    int count = 0;
    wide d = 1;
    const wide tiny = static_cast<wide>(std::numeric_limits<double>::min());
    for (std::size_t i = 0; i < diag_.size(); ++i) {
      d = diag_[i] - lambda - (i == 0 ? wide(0) : off2_ / d);
      if (d == 0)
        d = -tiny;
      if (d < 0)
        ++count;
    }
    return count;
  }

  // Lowest two eigenvalues by bisection on the Sturm count.
  Lowest lowest_two(wide lo, wide hi) const {
    wide lo0 = lo, hi0 = hi, lo1 = lo, hi1 = hi;
    auto bisect = [&](wide &a, wide &b, int index) {
      for (int it = 0; it < 400; ++it) {
        const wide mid = (a + b) / 2;
        if (mid <= a || mid >= b)
          break;
        const int c = count_below(mid);
        if (index == 0) {
          if (c >= 2)
            hi1 = std::min(hi1, mid);
          else
            lo1 = std::max(lo1, mid);
        }
        if (c > index)
          b = mid;
        else
          a = mid;
      }
      return (a + b) / 2;
    };
    const wide e0 = bisect(lo0, hi0, 0);
    lo1 = std::max(lo1, lo0);
    const wide e1 = bisect(lo1, hi1, 1);
    return {e0, e1};
  }

private:
  std::vector<wide> diag_;
  wide off2_;
};

Lowest solve_lattice(const std::function<double(double)> &V, double hbar, double mass,
                     long long j_first, int n, double h) {
  const wide kinetic = static_cast<wide>(hbar) * hbar / (static_cast<wide>(mass) * h * h);
  std::vector<wide> diag(n);
  double v_min = std::numeric_limits<double>::infinity();
  double v_max = -v_min;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(j_first + i) * h;
    const double v = V(x);
    if (!std::isfinite(v))
      throw Error(ErrorCode::DomainError, "potential is not finite at x = " + std::to_string(x));
    v_min = std::min(v_min, v);
    v_max = std::max(v_max, v);
    diag[i] = kinetic + static_cast<wide>(v);
  }
  const wide off = -kinetic / 2;
  SturmTridiagonal t(std::move(diag), off);
  // The discrete kinetic operator is positive semidefinite and bounded by
  // 2 hbar^2 / (m h^2), which brackets the whole spectrum.
  return t.lowest_two(static_cast<wide>(v_min), static_cast<wide>(v_max) + 2 * kinetic);
}

Spectrum solve(const std::function<double(double)> &V, const PhysConstants &consts,
               const GridSpec &grid) {
  grid.validate();
  const double h = (grid.x_max - grid.x_min) / (grid.n_points - 1);
  const long long j_first = std::llround(grid.x_min / h);
  const Lowest coarse = solve_lattice(V, consts.hbar, consts.mass, j_first, grid.n_points, h);

  Spectrum s;
  s.levels.push_back({grid.n_points, h, static_cast<double>(coarse.E0),
                      static_cast<double>(coarse.E1)});
  if (!grid.richardson) {
    s.E0 = static_cast<double>(coarse.E0);
    s.E1 = static_cast<double>(coarse.E1);
    s.splitting = static_cast<double>(coarse.E1 - coarse.E0);
    s.est_error = std::numeric_limits<double>::quiet_NaN();
    s.splitting_est_error = std::numeric_limits<double>::quiet_NaN();
    return s;
  }

  const Lowest fine =
      solve_lattice(V, consts.hbar, consts.mass, 2 * j_first, 2 * grid.n_points - 1, h / 2);
  s.levels.push_back({2 * grid.n_points - 1, h / 2, static_cast<double>(fine.E0),
                      static_cast<double>(fine.E1)});
  const wide split_coarse = coarse.E1 - coarse.E0;
  const wide split_fine = fine.E1 - fine.E0;
  const wide e0 = (4 * fine.E0 - coarse.E0) / 3;
  const wide e1 = (4 * fine.E1 - coarse.E1) / 3;
  const wide split = (4 * split_fine - split_coarse) / 3;

  const double change = std::abs(static_cast<double>(split_fine - split_coarse));
  if (change > 0.1 * std::abs(static_cast<double>(split_fine)))
    throw Error(ErrorCode::GridTooCoarse,
                "halving the grid step changed the splitting from " +
                    std::to_string(static_cast<double>(split_coarse)) + " to " +
                    std::to_string(static_cast<double>(split_fine)));

  s.E0 = static_cast<double>(e0);
  s.E1 = static_cast<double>(e1);
  s.splitting = static_cast<double>(split);
  s.est_error = std::max(std::abs(static_cast<double>(fine.E0 - coarse.E0)),
                         std::abs(static_cast<double>(fine.E1 - coarse.E1))) /
                3.0;
  s.splitting_est_error = change / 3.0;
  return s;
}

double airy_length(const DoubleWell &well, double x) {
  const double hbar = well.hbar();
  return std::cbrt(hbar * hbar / (2.0 * well.mass() * std::abs(well.dV(x))));
}

} // namespace

void GridSpec::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
    throw Error(ErrorCode::InvalidConfig, "grid needs finite x_min < x_max");
  if (n_points < 64)
    throw Error(ErrorCode::InvalidConfig,
                "grid needs at least 64 points, got " + std::to_string(n_points));
}

Spectrum eigen_lowest_two(const PotentialSpec &spec, const PhysConstants &consts,
                          const GridSpec &grid) {
  const Potential potential(spec, consts);
  return solve([&](double x) { return potential.value(x); }, consts, grid);
}

Spectrum eigen_lowest_two(const DoubleWell &well, const GridSpec &grid) {
  grid.validate();
  check_domain(well, grid);
  return solve([&](double x) { return well.V(x); }, well.consts(), grid);
}

void check_domain(const DoubleWell &well, const GridSpec &grid) {
  const auto outer = outer_turning_points(well, well.analysis().E_bar);
  const double need_left = outer.a_bar - 5.0 * airy_length(well, outer.a_bar);
  const double need_right = outer.b_bar + 5.0 * airy_length(well, outer.b_bar);
  if (grid.x_min > need_left || grid.x_max < need_right)
    throw Error(ErrorCode::DomainTooSmall,
                "grid [" + std::to_string(grid.x_min) + ", " + std::to_string(grid.x_max) +
                    "] must cover [" + std::to_string(need_left) + ", " +
                    std::to_string(need_right) + "] to hold the doublet tails");
}

GridSpec automatic_grid(const DoubleWell &well, int n_points, bool richardson) {
  const auto &w = well.analysis();
  const double E = w.E_bar + 10.0 * well.hbar() * std::max(w.omega_L, w.omega_R);
  const auto outer = outer_turning_points(well, E);
  GridSpec g;
  g.x_min = outer.a_bar - 5.0 * airy_length(well, outer.a_bar);
  g.x_max = outer.b_bar + 5.0 * airy_length(well, outer.b_bar);
  // snap nearly symmetric domains so mirror-symmetric potentials get a
  // mirror-symmetric grid
  if (std::abs(g.x_min + g.x_max) <= 1e-9 * (g.x_max - g.x_min)) {
    const double r = std::max(-g.x_min, g.x_max);
    g.x_min = -r;
    g.x_max = r;
  }
  g.n_points = n_points;
  g.richardson = richardson;
  return g;
}

} // namespace tunnelkit
