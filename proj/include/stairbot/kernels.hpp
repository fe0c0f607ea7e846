#pragma once

// Data-parallel kernels. Each has a serial reference in `serial::` and an
// OpenMP version in `omp::` with the same contract; the test suite checks
// that they agree and bench/ compares their throughput.

#include <span>
#include <vector>

#include "stairbot/perception.hpp"
#include "stairbot/signal.hpp"
#include "stairbot/stair_sim.hpp"

namespace stairbot::kernels {

struct ScanResult {
  double torque;
  bool completed;
  bool fall;
  double final_v;
  double final_t;
};

namespace serial {

std::vector<signal::Sample> loess_smooth(std::span<const signal::Sample> series,
                                         const signal::LoessConfig& cfg);

/// Per-pixel minimum eigenvalue of the 3x3-summed structure tensor, row-major.
/// Pixels within two of the border score zero.
std::vector<double> corner_scores(const perception::Frame& f);

/// Runs one constant-torque climb per entry of `torques`, in order.
std::vector<ScanResult> torque_scan(const sim::SimConfig& cfg, const sim::Staircase& stairs,
                                    std::span<const double> torques);

}  // namespace serial

namespace omp {

std::vector<signal::Sample> loess_smooth(std::span<const signal::Sample> series,
                                         const signal::LoessConfig& cfg);

std::vector<double> corner_scores(const perception::Frame& f);

std::vector<ScanResult> torque_scan(const sim::SimConfig& cfg, const sim::Staircase& stairs,
                                    std::span<const double> torques);

/// Parallel alternative to sim::min_torque_sweep: each round evaluates a
/// fixed number of interior torques concurrently and keeps the bracket
/// around the first success. Thread count does not affect the result.
double min_torque_search(const sim::SimConfig& cfg, const sim::Staircase& stairs,
                         double duration, int points_per_round = 7);

}  // namespace omp

}  // namespace stairbot::kernels
