#include "doctest.h"

#include <cmath>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "tunnelkit/errors.hpp"
#include "tunnelkit/potential.hpp"

using namespace tunnelkit;

namespace {

PotentialSpec quartic(double alpha, double a, double beta) {
  return {BiasedQuartic{alpha, a, beta}, std::nullopt};
}

PotentialSpec poly(std::vector<double> c) { return {Polynomial{std::move(c)}, std::nullopt}; }

ErrorCode code_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidConfig;
}

} // namespace

TEST_CASE("biased quartic values") {
  const PhysConstants c;
  const auto q = quartic(1.0, 1.0, 0.0);
  CHECK(evaluate(q, c, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(evaluate(q, c, 1.0) == doctest::Approx(0.0));
  CHECK(evaluate(q, c, -1.0) == doctest::Approx(0.0));
  CHECK(evaluate_d1(q, c, 1.0) == doctest::Approx(0.0));
  CHECK(evaluate_d2(q, c, 1.0) == doctest::Approx(8.0));
}

TEST_CASE("analytic derivatives match finite differences") {
  const PhysConstants c;
  const std::vector<PotentialSpec> specs = {
      quartic(2.5, 1.3, 0.4),
      poly({0.3, -0.2, -4.0, 0.5, 1.0, 0.1, 0.2}),
      {DoubleOscillator{1.0, 1.4, 0.1, 6.0}, std::nullopt},
      {BiasedQuartic{3.0, 1.0, 0.0}, BiasStep{0.2, 0.0, 1.0}},
  };
  for (const auto &s : specs) {
    const Potential p(s, c);
    for (double x : {-1.7, -0.9, -0.3, 0.35, 0.8, 1.6}) {
      const double h = 1e-5;
      const auto d = p.derivatives(x);
      for (int k = 1; k <= 4; ++k) {
        const double fd = (p.derivatives(x + h)[k - 1] - p.derivatives(x - h)[k - 1]) / (2 * h);
        CHECK(d[k] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("double oscillator branches") {
  const PhysConstants c;
  const DoubleOscillator d{1.0, 1.5, 0.2, 5.0};
  const PotentialSpec s{d, std::nullopt};
  const double x_L = -std::sqrt(2.0 * d.V0) / d.omega_L;
  const double x_R = std::sqrt(2.0 * (d.V0 - d.tilde_eps)) / d.omega_R;
  CHECK(evaluate(s, c, x_L) == doctest::Approx(0.0));
  CHECK(evaluate(s, c, x_R) == doctest::Approx(d.tilde_eps));
  // continuous at the junction, slope jumps
  CHECK(evaluate(s, c, 0.0) == doctest::Approx(d.V0));
  CHECK(evaluate(s, c, 1e-12) == doctest::Approx(d.V0));
  // x = 0 belongs to the left branch
  CHECK(evaluate_d1(s, c, 0.0) == doctest::Approx(-d.omega_L * d.omega_L * x_L));
  CHECK(evaluate_d1(s, c, 1e-12) == doctest::Approx(-d.omega_R * d.omega_R * x_R));
}

TEST_CASE("symmetric quartic analysis") {
  // With hbar = 1 the zero-point energy sqrt(8)/2 exceeds the unit barrier.
  const auto spec = quartic(1.0, 1.0, 0.0);
  CHECK(code_of([&] { analyze(spec, {}); }) == ErrorCode::DegenerateBarrier);
  CHECK(mean_energy(0.0, std::sqrt(8.0), std::sqrt(8.0), 1.0) == doctest::Approx(std::sqrt(8.0) / 2.0));

  const double hbar = 0.1;
  const DoubleWell w = analyze(spec, {hbar, 1.0});
  const auto &a = w.analysis();
  CHECK(a.x_L == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(a.x_R == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.x_m == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(a.omega_L == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
  CHECK(a.omega_R == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
  CHECK(std::abs(a.tilde_eps) < 1e-13);
  CHECK(std::abs(a.eps) < 1e-12);
  CHECK(a.E_bar == doctest::Approx(hbar * std::sqrt(8.0) / 2.0).epsilon(1e-12));
  CHECK(a.V0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(a.mirrored);
}

TEST_CASE("double oscillator parameters round-trip") {
  const DoubleOscillator d{0.8, 1.3, 0.15, 9.0};
  const DoubleWell w = analyze({d, std::nullopt}, {});
  const auto &a = w.analysis();
  CHECK(a.omega_L == d.omega_L);
  CHECK(a.omega_R == d.omega_R);
  CHECK(a.tilde_eps == d.tilde_eps);
  CHECK(a.V0 == d.V0);
  CHECK(a.x_m == 0.0);
  CHECK(w.V(a.x_L) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("tilted quartic bias against direct minimisation") {
  // 3(x^2 - 1)^2 + 0.15(x + 1)
  const PhysConstants c;
  const auto spec = poly({3.15, 0.15, -6.0, 0.0, 3.0});
  const DoubleWell w = analyze(spec, c);
  auto V = [&](double x) { return evaluate(spec, c, x); };
  const int bits = 50;
  const auto left = boost::math::tools::brent_find_minima(V, -1.5, -0.5, bits);
  const auto right = boost::math::tools::brent_find_minima(V, 0.5, 1.5, bits);
  const double reference = right.second - left.second;
  CHECK(w.analysis().tilde_eps == doctest::Approx(reference).epsilon(1e-9));
  // 2 beta up to O(beta^2 / alpha) corrections
  CHECK(w.analysis().tilde_eps == doctest::Approx(0.3).epsilon(1e-4));
}

TEST_CASE("analysis invariants on random specs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const PhysConstants c{0.1, 1.3};
  for (int i = 0; i < 40; ++i) {
    PotentialSpec spec = i % 2 == 0 ? quartic(1.0 + 20.0 * u(rng), 0.5 + u(rng), 2.0 * u(rng) - 1.0)
                                    : poly({0.0, 0.4 * u(rng) - 0.2, -3.0 - u(rng), 0.3 * u(rng),
                                            1.0, 0.1 * u(rng), 0.05});
    DoubleWell w = analyze(spec, c);
    const auto &a = w.analysis();
    const double scale = std::max(a.V0, c.hbar * a.omega_L);
    CHECK(a.x_L < a.x_m);
    CHECK(a.x_m < a.x_R);
    CHECK(std::abs(w.V(a.x_L)) <= 1e-9 * scale);
    CHECK(std::abs(w.V(a.x_R) - a.tilde_eps) <= 1e-9 * scale);
    CHECK(std::abs(w.V(a.x_m) - a.V0) <= 1e-9 * scale);
    CHECK(std::abs(w.dV(a.x_L)) <= 1e-8 * scale);
    CHECK(std::abs(w.dV(a.x_R)) <= 1e-8 * scale);
    CHECK(w.d2V(a.x_m) < 0.0);
    CHECK(a.tilde_eps >= -1e-12 * scale);
    CHECK(a.omega_L * a.omega_L * c.mass == doctest::Approx(w.d2V(a.x_L)).epsilon(1e-12));
    CHECK(a.omega_R * a.omega_R * c.mass == doctest::Approx(w.d2V(a.x_R)).epsilon(1e-12));
    // defining identities and their rearrangements
    CHECK(a.eps == doctest::Approx(a.tilde_eps + c.hbar * (a.omega_R - a.omega_L) / 2.0).epsilon(1e-14));
    CHECK(a.E_bar == doctest::Approx(c.hbar * (a.omega_L + a.omega_R) / 4.0 + a.tilde_eps / 2.0).epsilon(1e-15));
    CHECK(a.E_bar == doctest::Approx(c.hbar * a.omega_L / 2.0 + a.eps / 2.0).epsilon(1e-15));
    CHECK(a.E_bar - a.tilde_eps ==
          doctest::Approx(c.hbar * a.omega_R / 2.0 - a.eps / 2.0).epsilon(1e-14));
  }
}

TEST_CASE("mirroring a polynomial swaps the wells") {
  const PhysConstants c;
  const Polynomial p{{0.1, 0.3, -5.0, 0.4, 2.0, 0.05, 0.1}};
  const DoubleWell a = analyze({p, std::nullopt}, c);
  const DoubleWell b = analyze({mirrored(p), std::nullopt}, c);
  const auto &wa = a.analysis(), &wb = b.analysis();
  CHECK(wa.mirrored != wb.mirrored);
  CHECK(wb.tilde_eps == doctest::Approx(wa.tilde_eps).epsilon(1e-10));
  CHECK(wb.eps == doctest::Approx(wa.eps).epsilon(1e-10));
  CHECK(wb.E_bar == doctest::Approx(wa.E_bar).epsilon(1e-12));
  CHECK(wb.V0 == doctest::Approx(wa.V0).epsilon(1e-12));
  CHECK(wb.omega_L == doctest::Approx(wa.omega_L).epsilon(1e-12));
  CHECK(wb.x_L == doctest::Approx(wa.x_L).epsilon(1e-10));
}

TEST_CASE("orientation can be preserved") {
  // right well lower
  const auto spec = quartic(4.0, 1.0, -0.2);
  const DoubleWell auto_w = analyze(spec, {});
  CHECK(auto_w.analysis().mirrored);
  CHECK(auto_w.analysis().tilde_eps > 0.0);
  AnalyzeOptions keep;
  keep.orientation = AnalyzeOptions::Orientation::Preserve;
  const DoubleWell kept = analyze(spec, {}, keep);
  CHECK_FALSE(kept.analysis().mirrored);
  CHECK(kept.analysis().tilde_eps < 0.0);
  CHECK(kept.analysis().tilde_eps == doctest::Approx(-auto_w.analysis().tilde_eps));
}

TEST_CASE("bias step keeps well positions and curvatures") {
  const PhysConstants c;
  PotentialSpec spec = quartic(5.0, 1.0, 0.0);
  const DoubleWell base = analyze(spec, c);
  spec.bias = BiasStep{0.3, base.analysis().x_m, base.analysis().x_R};
  AnalyzeOptions keep;
  keep.orientation = AnalyzeOptions::Orientation::Preserve;
  const DoubleWell stepped = analyze(spec, c, keep);
  const auto &a = base.analysis(), &b = stepped.analysis();
  CHECK(b.x_R == doctest::Approx(a.x_R).epsilon(1e-12));
  CHECK(b.x_m == doctest::Approx(a.x_m).scale(1.0).epsilon(1e-12));
  CHECK(b.omega_R == doctest::Approx(a.omega_R).epsilon(1e-10));
  CHECK(b.V0 == doctest::Approx(a.V0).epsilon(1e-12));
  CHECK(b.tilde_eps == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("regime errors") {
  const PhysConstants c;
  CHECK(code_of([&] { analyze(poly({0.0, 0.0, 0.5}), c); }) == ErrorCode::FewerThanTwoMinima);
  // three wells: x^2 (x^2 - 1)^2 shifted
  CHECK(code_of([&] { analyze(poly({0.0, 0.0, 1.0, 0.0, -2.0, 0.0, 1.0}), c); }) ==
        ErrorCode::TooManyMinima);
  // barrier too low for the zero-point energy
  CHECK(code_of([&] { analyze(quartic(0.05, 1.0, 0.0), c); }) == ErrorCode::DegenerateBarrier);
  // flat-bottomed minima: x^8 - x^4 style is fine, but (x^2-1)^4 is not convex at x = +-1
  CHECK(code_of([&] { analyze(poly({1.0, 0.0, -4.0, 0.0, 6.0, 0.0, -4.0, 0.0, 1.0}), c); }) ==
        ErrorCode::NonConvexMinimum);
}

TEST_CASE("spec validation") {
  CHECK(code_of([] { validate(quartic(-1.0, 1.0, 0.0)); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { validate(quartic(1.0, 0.0, 0.0)); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { validate({DoubleOscillator{1.0, 1.0, 2.0, 1.0}, std::nullopt}); }) ==
        ErrorCode::InvalidSpec);
  CHECK(code_of([] { validate({DoubleOscillator{1.0, 1.0, -0.1, 1.0}, std::nullopt}); }) ==
        ErrorCode::InvalidSpec);
  CHECK(code_of([] { validate(poly({0.0, 0.0, 0.0, 1.0})); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { validate(poly({0.0, 0.0, -1.0})); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { PhysConstants{0.0, 1.0}.validate(); }) == ErrorCode::InvalidSpec);
  CHECK(category(ErrorCode::InvalidSpec) == ErrorCategory::Config);
  CHECK(exit_code(ErrorCategory::Config) == 2);
  CHECK(exit_code(ErrorCategory::Regime) == 3);
  CHECK(exit_code(ErrorCategory::Numerical) == 4);
}

TEST_CASE("parabolic diagnostic vanishes for the double oscillator") {
  const DoubleWell w = analyze({DoubleOscillator{1.0, 1.2, 0.1, 10.0}, std::nullopt}, {});
  const auto d = parabolic_diagnostic(w, -1.0, 1.0);
  CHECK(d.left == 0.0);
  CHECK(d.right == 0.0);
}
