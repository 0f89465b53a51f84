#include <doctest.h>

#include <cmath>
#include <numbers>

#include "exo/error.hpp"
#include "exo/geometry/bspline.hpp"
#include "exo/geometry/geometry.hpp"
#include "exo/model/roster.hpp"

using namespace exo::geometry;

namespace {

SyntheticGeometry small_model() {
  SyntheticGeometry g;
  g.mtus = {{0.25, -0.055, 0.010, 0.95}, {0.30, 0.080, -0.010, 0.85}, {0.12, -0.040, 0.0, 1.0}};
  return g;
}

}  // namespace

TEST_CASE("constant moment arm gives a linear length") {
  SyntheticGeometry g;
  g.mtus = {{0.2, -0.05, 0.0, 1.0}};
  const auto angles = uniform_grid(-0.5, 1.5, 9);
  const auto s = sample_geometry(g, angles);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    CHECK(s.lengths[0][i] == doctest::Approx(0.2 + 0.05 * angles[i]));
    CHECK(s.moment_arms[0][i] == doctest::Approx(-0.05));
  }
}

TEST_CASE("zero angle returns the rest length") {
  const auto g = small_model();
  const std::vector<double> zero = {-0.1, 0.0, 0.1};
  const auto s = sample_geometry(g, zero);
  for (std::size_t m = 0; m < g.mtus.size(); ++m) CHECK(s.lengths[m][1] == g.mtus[m].rest_length);
}

TEST_CASE("sampled moment arm equals minus the finite-difference length slope") {
  const auto g = small_model();
  const double h = 1e-5;
  for (double a = -0.5; a <= 1.55; a += 0.01) {
    for (const MtuGeometry& m : g.mtus) {
      const double fd = -(m.length(a + h) - m.length(a - h)) / (2.0 * h);
      CHECK(std::abs(fd - m.moment_arm(a)) < 1e-6);
    }
  }
}

TEST_CASE("collapsing lengths are rejected") {
  SyntheticGeometry g;
  g.mtus = {{0.05, 0.1, 0.0, 1.0}};
  CHECK_THROWS_AS(sample_geometry(g, default_angle_grid()), exo::ConfigError);
  g.mtus = {{0.05, 0.2, 0.0, 1.0}};
  CHECK_THROWS_AS(sample_geometry(g, default_angle_grid()), exo::ConfigError);
}

TEST_CASE("spline reproduces the quadratic family everywhere") {
  const auto g = small_model();
  const auto fit = fit_surrogate(sample_geometry(g, default_angle_grid()));
  const double lo = default_angle_grid().front(), hi = default_angle_grid().back();
  for (int k = 0; k <= 2000; ++k) {
    const double a = lo + (hi - lo) * k / 2000.0;
    for (std::size_t m = 0; m < g.mtus.size(); ++m) {
      const auto s = fit.eval(m, a);
      CHECK(std::abs(s.length - g.mtus[m].length(a)) <= 1e-6);
      CHECK(std::abs(s.moment_arm - g.mtus[m].moment_arm(a)) <= 1e-4);
    }
  }
}

TEST_CASE("minimal 8-node grid fits; 3 nodes and non-monotone grids fail") {
  const auto g = small_model();
  const auto eight = uniform_grid(-0.5, 1.5, 8);
  const auto fit = fit_surrogate(sample_geometry(g, eight));
  for (std::size_t i = 0; i < eight.size(); ++i) {
    CHECK(std::abs(fit.eval(0, eight[i]).length - g.mtus[0].length(eight[i])) <= 1e-5);
  }
  CHECK_THROWS_AS(fit_surrogate(sample_geometry(g, uniform_grid(0.0, 1.0, 3))), exo::DataError);

  auto grid = sample_geometry(g, eight);
  std::swap(grid.angles[3], grid.angles[4]);
  CHECK_THROWS_AS(fit_surrogate(grid), exo::DataError);
}

TEST_CASE("nodes are interpolated on a generic smooth profile") {
  GeometrySampleGrid grid;
  grid.angles = default_angle_grid();
  grid.lengths.resize(1);
  grid.moment_arms.resize(1);
  for (double a : grid.angles) {
    grid.lengths[0].push_back(0.2 + 0.03 * std::sin(2.0 * a) + 0.01 * a * a * a);
    grid.moment_arms[0].push_back(0.0);
  }
  const auto fit = fit_surrogate(grid);
  for (std::size_t i = 0; i < grid.angles.size(); ++i) {
    CHECK(std::abs(fit.eval(0, grid.angles[i]).length - grid.lengths[0][i]) <= 1e-5);
  }
}

TEST_CASE("extrapolation continues the boundary slope") {
  const auto g = small_model();
  const auto fit = fit_surrogate(sample_geometry(g, default_angle_grid()));
  const double hi = fit.knots().hi(), lo = fit.knots().lo();
  std::vector<double> len(3), arm(3);
  CHECK(fit.eval(hi + 0.2, len, arm));
  for (std::size_t m = 0; m < 3; ++m) {
    const auto edge = fit.eval(m, hi);
    CHECK(len[m] == doctest::Approx(edge.length - edge.moment_arm * 0.2).epsilon(1e-12));
    CHECK(arm[m] == doctest::Approx(edge.moment_arm).epsilon(1e-12));
  }
  CHECK(fit.eval(lo - 0.1, len, arm));
  CHECK_FALSE(fit.eval(0.3, len, arm));
}

TEST_CASE("batch evaluation equals pointwise evaluation") {
  const auto g = small_model();
  const auto fit = fit_surrogate(sample_geometry(g, default_angle_grid()));
  std::vector<double> angles;
  for (int k = 0; k < 1000; ++k) angles.push_back(-0.7 + 2.5 * k / 999.0);
  const auto batch = fit.eval_batch(angles);
  for (std::size_t k = 0; k < angles.size(); ++k) {
    for (std::size_t m = 0; m < 3; ++m) {
      const auto p = fit.eval(m, angles[k]);
      CHECK(batch[k][m].length == p.length);
      CHECK(batch[k][m].moment_arm == p.moment_arm);
    }
  }
}

TEST_CASE("basis functions form a partition of unity with zero-sum derivatives") {
  const CubicKnots knots(default_angle_grid());
  for (double a = knots.lo(); a <= knots.hi(); a += 0.013) {
    const auto b = knots.basis(a);
    CHECK(b.value[0] + b.value[1] + b.value[2] + b.value[3] == doctest::Approx(1.0));
    CHECK(std::abs(b.derivative[0] + b.derivative[1] + b.derivative[2] + b.derivative[3]) < 1e-9);
  }
}

TEST_CASE("trunk roster: 164 MTUs, tendon-excursion consistent over the full range") {
  const auto roster = exo::model::make_trunk_roster();
  REQUIRE(roster.size() == 164);
  const auto geom = roster.synthetic_geometry();
  const auto fit = fit_surrogate(sample_geometry(geom, default_angle_grid()));
  const double lo = fit.knots().lo(), hi = fit.knots().hi();
  const double h = 1e-6;
  std::vector<double> len(164), arm(164), lp(164), lm(164), tmp(164);
  double worst = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double a = lo + h + (hi - lo - 2 * h) * k / 400.0;
    fit.eval(a, len, arm);
    fit.eval(a + h, lp, tmp);
    fit.eval(a - h, lm, tmp);
    for (std::size_t m = 0; m < 164; ++m) {
      worst = std::max(worst, std::abs(arm[m] + (lp[m] - lm[m]) / (2 * h)));
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("extensors produce extension moments under tension") {
  const auto roster = exo::model::make_trunk_roster();
  for (const auto& m : roster.mtus) {
    const bool extensor = m.geometry.base_moment_arm < 0.0;
    // Extension moment of a positive force is -force * arm.
    if (extensor) CHECK(-100.0 * m.geometry.moment_arm(0.3) > 0.0);
  }
}
