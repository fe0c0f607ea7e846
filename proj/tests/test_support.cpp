#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "stairbot/support_assembly.hpp"

using namespace stairbot;
using namespace stairbot::support;

TEST_CASE("solve_gamma: identity at zero arm angle") {
  const SupportGeometry g;
  CHECK(solve_gamma(0.0, g) == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(std::abs(rad_to_deg(solve_gamma(0.0, g)) - 90.0) < 1e-9);
}

TEST_CASE("solve_gamma: matches the independent root oracle") {
  const SupportGeometry g;
  CHECK(std::abs(rad_to_deg(solve_gamma(deg_to_rad(40.0), g)) - oracle::kGamma40Deg) < 1e-9);
  CHECK(std::abs(rad_to_deg(solve_gamma(deg_to_rad(10.0), g)) - oracle::kGamma10Deg) < 1e-9);
  for (int d = 0; d <= 89; d += 7) {
    const double th = deg_to_rad(d);
    const auto ref = oracle::solve_gamma(th, g.b, g.h);
    REQUIRE(ref.has_value());
    CHECK(std::abs(solve_gamma(th, g) - static_cast<double>(*ref)) < 1e-10);
  }
}

TEST_CASE("solve_gamma: residual is tiny across the full grid") {
  const SupportGeometry g;
  for (int d = 0; d <= 90; ++d) {
    const double th = deg_to_rad(d);
    const double gam = solve_gamma(th, g);
    CHECK(std::abs(static_cast<double>(oracle::support_residual(th, gam, g.b, g.h))) <= 1e-9);
    CHECK(std::abs(angle_residual(th, gam, g)) <= 1e-9);
  }
}

TEST_CASE("solve_gamma: no root reports the bracket") {
  SupportGeometry g;
  // Short attachment: at theta = 90 deg the residual stays positive at both
  // bracket ends.
  g.b = 0.01;
  g.h = 1.0;
  bool threw = false;
  try {
    for (int d = 1; d <= 90; ++d) solve_gamma(deg_to_rad(d), g);
  } catch (const NoRootError& e) {
    threw = true;
    CHECK(e.bracket_lo() == doctest::Approx(deg_to_rad(1.0)));
    CHECK(e.bracket_hi() == doctest::Approx(deg_to_rad(179.0)));
  }
  CHECK(threw);
}

TEST_CASE("actuator_force: closed-form values") {
  const SupportGeometry g;
  const SupportLoad l;
  CHECK(actuator_force(0.0, kPi / 2, g, l) == doctest::Approx(0.56 * 120 * 9.81).epsilon(1e-12));
  CHECK(actuator_force(kPi / 2, solve_gamma(kPi / 2, g), g, l) == 0.0);

  SupportGeometry zero = g;
  zero.a = zero.b = 0.0;
  CHECK(actuator_force(0.3, 1.2, zero, l) == 0.0);

  SupportLoad heavy = l;
  heavy.mass = 2 * l.mass;
  CHECK(actuator_force(0.4, 1.1, g, heavy) ==
        doctest::Approx(2 * actuator_force(0.4, 1.1, g, l)).epsilon(1e-14));

  SupportLoad arm = l;
  arm.moment_arm = 0.5;
  CHECK(actuator_force(0.4, 1.1, g, arm) ==
        doctest::Approx(2 * actuator_force(0.4, 1.1, g, l)).epsilon(1e-14));
  CHECK_THROWS_AS(actuator_force(0.3, 0.0, g, l), SingularGammaError);
}

TEST_CASE("force_profile: grid handling and endpoints") {
  const SupportGeometry g;
  const SupportLoad l;
  std::vector<double> grid;
  for (int d = 0; d <= 90; ++d) grid.push_back(deg_to_rad(d));
  const auto p = force_profile(g, l, grid);
  REQUIRE(p.samples.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(p.samples[i].theta == grid[i]);
  CHECK(p.samples.front().force == doctest::Approx(659.232).epsilon(1e-12));
  CHECK(p.samples.front().gamma == doctest::Approx(kPi / 2));
  CHECK(p.samples.back().force == 0.0);
  CHECK(p.monotone_decreasing);

  const std::vector<double> only90{kPi / 2};
  CHECK(force_profile(g, l, only90).samples.at(0).force == 0.0);

  const std::vector<double> empty;
  CHECK_THROWS_WITH_AS(force_profile(g, l, empty), doctest::Contains("empty grid"),
                       PreconditionError);
  const std::vector<double> unsorted{0.2, 0.1};
  CHECK_THROWS_AS(force_profile(g, l, unsorted), PreconditionError);
}

TEST_CASE("check_structural") {
  SupportLoad l;
  l.safety_factor = 1.0;
  auto r = check_structural(1130.0, l);
  CHECK(r.pass);
  CHECK(r.margin == doctest::Approx(1.0));

  l.safety_factor = 1.25;
  r = check_structural(1130.0, l);
  CHECK_FALSE(r.pass);
  CHECK(r.margin == doctest::Approx(1130.0 / 1412.5));

  r = check_structural(0.0, l);
  CHECK(r.pass);
  CHECK(r.unbounded());
}

TEST_CASE("geometry validation") {
  SupportGeometry g;
  g.a = -1;
  CHECK_THROWS_AS(g.validate(), PreconditionError);
  SupportLoad l;
  l.safety_factor = 0.9;
  CHECK_THROWS_AS(l.validate(), PreconditionError);
}
