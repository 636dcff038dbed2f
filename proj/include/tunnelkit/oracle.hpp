#pragma once

#include <vector>

#include "tunnelkit/potential.hpp"

namespace tunnelkit {

/// Finite-difference grid. Nodes sit on the lattice x = j h anchored at the
/// origin, h = (x_max - x_min) / (n_points - 1), so a symmetric interval gives
/// a mirror-symmetric grid and x = 0 is always a node. The wavefunction
/// vanishes one step beyond the first and last node.
struct GridSpec {
  double x_min = -1.0;
  double x_max = 1.0;
  int n_points = 8001;
  bool richardson = true;

  void validate() const;
};

/// Unextrapolated eigenvalues on one grid.
struct GridLevel {
  int n_points = 0;
  double h = 0.0;
  double E0 = 0.0;
  double E1 = 0.0;
};

struct Spectrum {
  double E0 = 0.0;
  double E1 = 0.0;
  double splitting = 0.0;
  /// Largest change of E0, E1 under grid halving divided by 3 (the Richardson
  /// error estimate); NaN without Richardson extrapolation.
  double est_error = 0.0;
  /// Same estimate for the splitting alone.
  double splitting_est_error = 0.0;
  /// The grid itself, then the halved grid when Richardson is on.
  std::vector<GridLevel> levels;
};

/// Lowest two eigenvalues of -hbar^2/(2m) d^2/dx^2 + V on the grid, energies on
/// the raw potential's scale. Throws GridTooCoarse when Richardson is enabled
/// and halving h changes the splitting by more than 10%.
Spectrum eigen_lowest_two(const PotentialSpec &spec, const PhysConstants &consts,
                          const GridSpec &grid);

/// Same for an analysed double well; energies are measured from V(x_L) = 0 and
/// positions are working coordinates. Throws DomainTooSmall if the grid does
/// not clear both outer turning points at E_bar by five Airy lengths.
Spectrum eigen_lowest_two(const DoubleWell &well, const GridSpec &grid);

void check_domain(const DoubleWell &well, const GridSpec &grid);

/// Interval reaching past the outer turning points at E_bar + 10 hbar omega,
/// plus five Airy lengths.
GridSpec automatic_grid(const DoubleWell &well, int n_points = 8001, bool richardson = true);

} // namespace tunnelkit
