#include <vector>

#include "doctest.h"
#include "stairbot/kernels.hpp"

using namespace stairbot;

TEST_CASE("torque_scan: serial and OpenMP agree exactly") {
  sim::SimConfig cfg;
  cfg.dt = 2e-3;
  cfg.duration = 10.0;
  const sim::Staircase stairs;
  std::vector<double> torques;
  for (double t = 18.0; t <= 30.0; t += 1.5) torques.push_back(t);
  const auto a = kernels::serial::torque_scan(cfg, stairs, torques);
  const auto b = kernels::omp::torque_scan(cfg, stairs, torques);
  REQUIRE(a.size() == torques.size());
  REQUIRE(b.size() == torques.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CAPTURE(torques[i]);
    CHECK(a[i].torque == torques[i]);
    CHECK(a[i].completed == b[i].completed);
    CHECK(a[i].fall == b[i].fall);
    CHECK(a[i].final_v == b[i].final_v);
    CHECK(a[i].final_t == b[i].final_t);
  }
  // Completion is monotone in torque.
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i - 1].completed) CHECK(a[i].completed);
  CHECK_FALSE(a.front().completed);
  CHECK(a.back().completed);
}

TEST_CASE("min_torque_search matches the serial bisection") {
  sim::SimConfig cfg;
  cfg.dt = 2e-3;
  const sim::Staircase stairs;
  const double serial = sim::min_torque_sweep(cfg, stairs, 10.0);
  const double par = kernels::omp::min_torque_search(cfg, stairs, 10.0);
  CHECK(std::abs(serial - par) <= sim::kSweepResolution);
  CHECK(par == kernels::omp::min_torque_search(cfg, stairs, 10.0, 7));
  CHECK(std::abs(par - kernels::omp::min_torque_search(cfg, stairs, 10.0, 3)) <= sim::kSweepResolution);

  sim::SimConfig weak = cfg;
  weak.motor.rated_torque = 5.0;
  CHECK_THROWS_AS(kernels::omp::min_torque_search(weak, stairs, 10.0), UnclimbableError);
}
