#include <sstream>

#include "stairbot/kernels.hpp"

namespace stairbot::kernels {

namespace {

ScanResult run_one(const sim::SimConfig& cfg, const sim::Staircase& stairs, double torque) {
  const sim::Trajectory tr =
      sim::run_climb(cfg, stairs, sim::TorqueSchedule::constant(torque), false);
  return {torque, tr.completed && !tr.fall, tr.fall, tr.final_v(), tr.final_t()};
}

}  // namespace

namespace serial {

std::vector<ScanResult> torque_scan(const sim::SimConfig& cfg, const sim::Staircase& stairs,
                                    std::span<const double> torques) {
  std::vector<ScanResult> out;
  out.reserve(torques.size());
  for (double t : torques) out.push_back(run_one(cfg, stairs, t));
  return out;
}

}  // namespace serial

namespace omp {

std::vector<ScanResult> torque_scan(const sim::SimConfig& cfg, const sim::Staircase& stairs,
                                    std::span<const double> torques) {
  std::vector<ScanResult> out(torques.size());
  const auto n = static_cast<long>(torques.size());
  // Runs differ a lot in length (early falls vs. full-duration crawls).
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = run_one(cfg, stairs, torques[idx]);
  }
  return out;
}

double min_torque_search(const sim::SimConfig& cfg, const sim::Staircase& stairs,
                         double duration, int points_per_round) {
  if (!(duration > 0)) throw PreconditionError("min_torque_search: duration must be > 0");
  if (points_per_round < 1) throw PreconditionError("min_torque_search: need >= 1 point");
  sim::SimConfig run_cfg = cfg;
  run_cfg.duration = duration;

  double hi = run_cfg.motor_limit_torque();
  const double ends[2] = {0.0, hi};
  const auto end_runs = torque_scan(run_cfg, stairs, ends);
  if (!end_runs[1].completed) {
    std::ostringstream os;
    os << "motor-limit torque " << hi << " N*m does not complete the climb within "
       << duration << " s";
    throw UnclimbableError(os.str());
  }
  if (end_runs[0].completed) return 0.0;

  double lo = 0.0;
  std::vector<double> probe(static_cast<std::size_t>(points_per_round));
  while (hi - lo > sim::kSweepResolution) {
    for (int i = 0; i < points_per_round; ++i) {
      probe[static_cast<std::size_t>(i)] = lo + (hi - lo) * (i + 1) / (points_per_round + 1);
    }
    const auto runs = torque_scan(run_cfg, stairs, probe);
    double new_lo = lo;
    double new_hi = hi;
    for (const auto& r : runs) {
      if (r.completed) {
        new_hi = r.torque;
        break;
      }
      new_lo = r.torque;
    }
    lo = new_lo;
    hi = new_hi;
  }
  return hi;
}

}  // namespace omp

}  // namespace stairbot::kernels
