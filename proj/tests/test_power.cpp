#include <vector>

#include "doctest.h"
#include "stairbot/power.hpp"

using namespace stairbot;
using namespace stairbot::power;

TEST_CASE("motor current") {
  const PowerConfig cfg;
  const drivetrain::MotorSpec motor;
  CHECK(cfg.kt(motor) == doctest::Approx(22.0 / (320.0 / 24.0)));
  CHECK(motor_current(0.0, cfg, motor) == 0.0);
  const double i22 = motor_current(22.0, cfg, motor);
  CHECK(i22 == doctest::Approx(13.3333333333));
  CHECK(motor_current(44.0, cfg, motor) == doctest::Approx(2 * i22));
  CHECK(std::abs(i22 * cfg.drive_bank.voltage() - motor.rated_power) / motor.rated_power <= 0.05);
  PowerConfig fixed = cfg;
  fixed.torque_constant = 2.0;
  CHECK(motor_current(10.0, fixed, motor) == 5.0);
  CHECK_THROWS_AS(motor_current(-1.0, cfg, motor), PreconditionError);
}

TEST_CASE("banks") {
  const PowerConfig cfg;
  CHECK(cfg.drive_bank.voltage() == 24.0);
  CHECK(cfg.drive_bank.capacity() == 26.0);
  CHECK(cfg.actuator_bank.voltage() == 11.1);
  CHECK(cfg.actuator_bank.capacity() == doctest::Approx(5.4));
}

TEST_CASE("check_driver") {
  const PowerConfig cfg;
  const double dt = 0.01;
  const std::vector<double> flat(500, 40.0);
  auto r = check_driver(flat, dt, cfg);
  CHECK(r.pass);
  CHECK(r.max_avg_window == doctest::Approx(40.0));

  std::vector<double> spike(500, 10.0);
  spike[250] = 81.0;
  r = check_driver(spike, dt, cfg);
  CHECK_FALSE(r.pass);
  CHECK(r.peak == 81.0);

  // Triangle between 0 and 79 A, window-long periods so every 1 s mean is 39.5.
  std::vector<double> tri;
  for (int k = 0; k < 1000; ++k) {
    const int ph = k % 100;
    tri.push_back(ph < 50 ? 79.0 * ph / 50.0 : 79.0 * (100 - ph) / 50.0);
  }
  r = check_driver(tri, dt, cfg);
  CHECK(r.pass);
  CHECK(r.peak == doctest::Approx(79.0));
  CHECK(r.max_avg_window <= 40.0);

  std::vector<double> scaled = tri;
  for (auto& v : scaled) v *= 0.7;
  CHECK(check_driver(scaled, dt, cfg).pass);

  std::vector<double> hot(500, 20.0);
  for (int k = 100; k < 250; ++k) hot[k] = 70.0;
  CHECK_FALSE(check_driver(hot, dt, cfg).pass);
  CHECK_THROWS_AS(check_driver(std::vector<double>{}, dt, cfg), PreconditionError);
}

TEST_CASE("runtime") {
  const PowerConfig cfg;
  CHECK(runtime_estimate(26.0, cfg) == doctest::Approx(1.0));
  CHECK(runtime_estimate(13.0, cfg) == doctest::Approx(2.0));
  CHECK(runtime_estimate(7.0, cfg) == 2 * runtime_estimate(14.0, cfg));
  CHECK_THROWS_AS(runtime_estimate(0.0, cfg), PreconditionError);
}
