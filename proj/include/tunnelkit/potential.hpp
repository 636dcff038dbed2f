#pragma once

#include <array>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace tunnelkit {

struct PhysConstants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const;
};

/// V(x) = alpha (x^2 - a^2)^2 + beta x
struct BiasedQuartic {
  double alpha = 1.0;
  double a = 1.0;
  double beta = 0.0;
};

/// Two parabolas joined at x = 0:
///   V(x) = m omega_L^2 (x - x_L)^2 / 2            for x <= 0
///   V(x) = tilde_eps + m omega_R^2 (x - x_R)^2 / 2 for x >= 0
/// with x_L < 0 < x_R fixed by V(0) = V0 on both branches. The first derivative
/// jumps at x = 0; evaluation exactly at the origin uses the left branch.
struct DoubleOscillator {
  double omega_L = 1.0;
  double omega_R = 1.0;
  double tilde_eps = 0.0;
  double V0 = 1.0;
};

/// V(x) = sum_i coeffs[i] x^i
struct Polynomial {
  std::vector<double> coeffs;
};

/// Smooth C2 step added on top of a family: amount * S(t) with
/// t = (x - x_from) / (x_to - x_from), S(t) = 10t^3 - 15t^4 + 6t^5 on [0, 1],
/// 0 before and 1 after. S has vanishing first and second derivatives at both
/// ends, so wells placed at x_from and x_to keep their position and curvature.
struct BiasStep {
  double amount = 0.0;
  double x_from = 0.0;
  double x_to = 1.0;
};

using PotentialFamily = std::variant<BiasedQuartic, DoubleOscillator, Polynomial>;

struct PotentialSpec {
  PotentialFamily family;
  std::optional<BiasStep> bias;
};

/// Throws Error(InvalidSpec) if the family parameters break their invariants.
void validate(const PotentialSpec &spec);

/// Evaluates a validated spec and its first four derivatives analytically.
class Potential {
public:
  Potential(PotentialSpec spec, PhysConstants consts);

  double value(double x) const { return derivatives(x)[0]; }
  double d1(double x) const { return derivatives(x)[1]; }
  double d2(double x) const { return derivatives(x)[2]; }

  /// {V, V', V'', V''', V''''} at x.
  std::array<double, 5> derivatives(double x) const;

  const PotentialSpec &spec() const { return spec_; }
  const PhysConstants &consts() const { return consts_; }

  /// Interval guaranteed to contain every critical point of the family.
  std::pair<double, double> critical_point_window() const;

private:
  PotentialSpec spec_;
  PhysConstants consts_;
  // DoubleOscillator minima, fixed by the matching constraint at x = 0
  double osc_x_L_ = 0.0;
  double osc_x_R_ = 0.0;
};

double evaluate(const PotentialSpec &spec, const PhysConstants &consts, double x);
double evaluate_d1(const PotentialSpec &spec, const PhysConstants &consts, double x);
double evaluate_d2(const PotentialSpec &spec, const PhysConstants &consts, double x);

/// Everything the tunnelling formulas need to know about the two wells.
/// Positions are in working coordinates (see DoubleWell) and energies are
/// measured from the bottom of the left well.
struct WellAnalysis {
  double x_L = 0.0;
  double x_R = 0.0;
  double x_m = 0.0;
  double omega_L = 0.0;
  double omega_R = 0.0;
  double tilde_eps = 0.0;
  double eps = 0.0;
  double E_bar = 0.0;
  double V0 = 0.0;
  double zero_shift = 0.0;
  bool mirrored = false;
};

/// eps = tilde_eps + hbar (omega_R - omega_L) / 2
double zero_point_bias(double tilde_eps, double omega_L, double omega_R, double hbar);

/// E_bar = hbar (omega_L + omega_R) / 4 + tilde_eps / 2
double mean_energy(double tilde_eps, double omega_L, double omega_R, double hbar);

/// Same wells, different bias: recomputes eps and E_bar for a new tilde_eps.
WellAnalysis with_bias(WellAnalysis analysis, double tilde_eps, double hbar);

struct AnalyzeOptions {
  /// Scan interval; defaults to Potential::critical_point_window().
  std::optional<std::pair<double, double>> window;
  int scan_points = 4096;
  /// Auto mirrors when the right well is lower; Preserve keeps the caller's
  /// labelling and Mirror always flips it.
  enum class Orientation { Auto, Preserve, Mirror };
  Orientation orientation = Orientation::Auto;
};

/// A double-well potential in working coordinates: the raw potential is
/// mirrored (x -> -x) when needed so that the left well is the lower one, and
/// shifted so that V(x_L) = 0.
class DoubleWell {
public:
  DoubleWell(Potential potential, WellAnalysis analysis);

  double V(double x) const;
  double dV(double x) const;
  double d2V(double x) const;
  /// {V, V', V'', V''', V''''} in working coordinates.
  std::array<double, 5> derivatives(double x) const;

  double to_raw(double x) const { return sign_ * x; }

  const WellAnalysis &analysis() const { return analysis_; }
  const Potential &potential() const { return potential_; }
  const PhysConstants &consts() const { return potential_.consts(); }
  double hbar() const { return potential_.consts().hbar; }
  double mass() const { return potential_.consts().mass; }
  bool is_double_oscillator() const;

private:
  Potential potential_;
  WellAnalysis analysis_;
  double sign_ = 1.0;
};

/// Locates both minima and the barrier maximum, normalises the zero of energy
/// and labels the wells. Throws FewerThanTwoMinima, TooManyMinima,
/// NonConvexMinimum or DegenerateBarrier.
DoubleWell analyze(const PotentialSpec &spec, const PhysConstants &consts,
                   const AnalyzeOptions &options = {});

/// Ratio of the cubic to the quadratic Taylor term of V about each minimum,
/// evaluated at the inner turning points. Small values mean the parabolic
/// approximation near the wells holds out to the turning points.
struct ParabolicDiagnostic {
  double left = 0.0;
  double right = 0.0;
};

ParabolicDiagnostic parabolic_diagnostic(const DoubleWell &well, double a_bar,
                                         double b_bar);

/// Mirror image x -> -x of a polynomial.
Polynomial mirrored(const Polynomial &poly);

} // namespace tunnelkit
