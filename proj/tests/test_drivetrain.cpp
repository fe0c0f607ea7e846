#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "stairbot/drivetrain.hpp"

using namespace stairbot;
using namespace stairbot::drivetrain;

namespace {

TrackParams params(double M) {
  TrackParams p;
  p.supported_mass = M;
  p.pulley_p1_mass = 0;
  p.pulley_p23_mass = 0;
  return p;
}

}  // namespace

TEST_CASE("torque_case against the force-balance oracle") {
  TrackParams p = params(105.0);
  p.pulley_p1_mass = 1.5;
  p.pulley_p23_mass = 0.7;
  for (double deg : {0.0, 10.0, 25.0, 40.0}) {
    p.theta = deg_to_rad(deg);
    for (double a : {0.0, 0.25, 0.5}) {
      p.accel = a;
      const double ref1 = static_cast<double>(oracle::torque_p1(
          p.supported_mass, p.pulley_p23_mass, p.pulley_p1_mass, p.radius_p1, a, p.gravity, p.theta));
      const double ref3 = static_cast<double>(
          oracle::torque_p23(p.supported_mass, p.pulley_p1_mass, p.radius_p23, a, p.gravity, p.theta));
      CHECK(torque_case(Pulley::P1, p) == doctest::Approx(ref1).epsilon(1e-12));
      CHECK(torque_case(Pulley::P3, p) == doctest::Approx(ref3).epsilon(1e-12));
      CHECK(torque_case(Pulley::P2, p) == torque_case(Pulley::P3, p));
    }
  }
}

TEST_CASE("reference torques with back-derived masses") {
  TrackParams p = params(105.0);
  CHECK(torque_case(Pulley::P1, p) == doctest::Approx(35.7302).epsilon(1e-5));
  CHECK(std::abs(torque_case(Pulley::P1, p) - 35.8) / 35.8 < 0.01);
  CHECK(torque_case(Pulley::P3, p) == doctest::Approx(25.7257).epsilon(1e-5));

  CHECK(mass_for_torque(Pulley::P1, p, 35.8) == doctest::Approx(oracle::kMassFor358P1).epsilon(1e-12));
  TrackParams stat = p;
  stat.accel = 0;
  CHECK(mass_for_torque(Pulley::P3, stat, 22.0) ==
        doctest::Approx(oracle::kMassFor22Static).epsilon(1e-12));

  const TrackParams p22 = params(oracle::kMassFor22Static);
  CHECK(min_static_torque(p22) == doctest::Approx(22.0).epsilon(1e-12));
}

TEST_CASE("torque properties") {
  TrackParams p = params(100.0);
  p.theta = 0;
  p.accel = 0;
  for (auto c : {Pulley::P1, Pulley::P2, Pulley::P3}) CHECK(torque_case(c, p) == 0.0);
  CHECK(min_static_torque(p) == 0.0);

  p = params(100.0);
  const double ratio = torque_case(Pulley::P1, p) / torque_case(Pulley::P3, p);
  CHECK(ratio == doctest::Approx(p.radius_p1 / p.radius_p23).epsilon(1e-14));

  TrackParams twice = params(200.0);
  CHECK(min_static_torque(twice) == doctest::Approx(2 * min_static_torque(p)));
  TrackParams a2 = p;
  a2.theta = 0;
  TrackParams a1 = a2;
  a2.accel = 0.5;
  a1.accel = 0.25;
  CHECK(torque_case(Pulley::P3, a2) == doctest::Approx(2 * torque_case(Pulley::P3, a1)));

  double prev = -1;
  for (int d = 0; d <= 40; ++d) {
    p.theta = deg_to_rad(d);
    const double t = torque_case(Pulley::P1, p);
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("track parameter validation") {
  TrackParams p;
  p.accel = 0.6;
  CHECK_THROWS_AS(p.validate(), PreconditionError);
  p = TrackParams{};
  p.theta = deg_to_rad(41);
  CHECK_THROWS_AS(p.validate(), PreconditionError);
  p = TrackParams{};
  p.radius_p1 = 0.03;
  CHECK_THROWS_AS(p.validate(), PreconditionError);
}

TEST_CASE("min_pinion_teeth") {
  CHECK(min_pinion_teeth(deg_to_rad(20), 1) == 18);
  CHECK(min_pinion_teeth(deg_to_rad(30), 1) == 8);
  CHECK(min_pinion_teeth(deg_to_rad(90), 1) == 2);
  for (double a = 10; a <= 35; a += 0.5) {
    for (double f : {0.8, 1.0, 1.25}) {
      const int n = min_pinion_teeth(deg_to_rad(a), f);
      const double s = std::sin(deg_to_rad(a));
      CHECK(s * s * n >= 2 * f - 1e-9);
      CHECK(s * s * (n - 1) < 2 * f);
    }
  }
}

TEST_CASE("gear geometry and contact ratio") {
  const auto g = GearDesign::standard(deg_to_rad(20), 1, 4, 18);
  CHECK(g.pitch_diameter_mm() == doctest::Approx(72.0));
  CHECK(g.base_radius_mm == doctest::Approx(36 * std::cos(deg_to_rad(20))));
  CHECK(g.outer_radius_mm == doctest::Approx(40.0));
  CHECK(contact_ratio(g) == doctest::Approx(oracle::kContactRatioN18).epsilon(1e-12));
  CHECK(contact_ratio(g) ==
        doctest::Approx(static_cast<double>(oracle::contact_ratio(18, 4, oracle::rad(20), 4))).epsilon(1e-12));
  CHECK(std::abs(contact_ratio(g) - 1.75) <= 0.01);

  const auto g8 = GearDesign::standard(deg_to_rad(30), 1, 4, 8);
  CHECK(contact_ratio(g8) == doctest::Approx(oracle::kContactRatioN8Alpha30).epsilon(1e-12));

  GearDesign bad = g;
  bad.outer_radius_mm = bad.base_radius_mm;
  CHECK_THROWS_AS(contact_ratio(bad), InvalidGeometryError);
}

TEST_CASE("tension orders") {
  using T = Tension;
  CHECK(tension_order(Pulley::P1) == std::array{T::T1, T::T2, T::T3});
  CHECK(tension_order(Pulley::P2) == std::array{T::T2, T::T3, T::T1});
  CHECK(tension_order(Pulley::P3) == std::array{T::T3, T::T1, T::T2});
}

TEST_CASE("motor margin") {
  const MotorSpec m;
  CHECK(m.mechanical_power() == doctest::Approx(329.44835).epsilon(1e-6));
  auto r = motor_margin(m, 25.4);
  CHECK(r.available == 44.0);
  CHECK(r.margin == doctest::Approx(44.0 / 25.4));
  CHECK(r.pass);
  r = motor_margin(m, 44.0);
  CHECK(r.margin == 1.0);
  CHECK(r.pass);
  CHECK_FALSE(motor_margin(m, 50.0).pass);
  CHECK_THROWS_AS(motor_margin(m, 0.0), PreconditionError);

  MotorSpec off = m;
  off.rated_power = 200;
  CHECK_THROWS_AS(off.validate(), PreconditionError);
}
