#include "stairbot/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stairbot::power {

void PowerConfig::validate() const {
  for (const auto* b : {&drive_bank, &actuator_bank}) {
    if (!(b->cell_voltage > 0) || !(b->capacity_ah > 0) || b->count <= 0) {
      throw PreconditionError("power: battery parameters must be positive");
    }
  }
  if (!(logic_rail > 0) || !(driver_avg_limit > 0) || !(driver_peak_limit > 0) ||
      !(actuator_driver_limit > 0) || !(window_s > 0) || torque_constant < 0) {
    throw PreconditionError("power: limits must be positive");
  }
}

double PowerConfig::kt(const drivetrain::MotorSpec& motor) const {
  if (torque_constant > 0) return torque_constant;
  const double rated_current = motor.rated_power / drive_bank.voltage();
  return motor.rated_torque / rated_current;
}

double motor_current(double shaft_torque, const PowerConfig& cfg,
                     const drivetrain::MotorSpec& motor) {
  if (shaft_torque < 0) throw PreconditionError("motor_current: negative torque");
  return shaft_torque / cfg.kt(motor);
}

DriverCheck check_driver(std::span<const double> current, double sample_dt,
                         const PowerConfig& cfg) {
  if (current.empty()) throw PreconditionError("check_driver: empty profile");
  if (!(sample_dt > 0)) throw PreconditionError("check_driver: sample spacing must be > 0");

  const std::size_t n = current.size();
  const auto w = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(cfg.window_s / sample_dt)), 1, n);
  double peak = 0.0;
  for (double c : current) peak = std::max(peak, std::abs(c));

  // Each window is summed afresh so a flat profile at the limit stays exactly
  // at the limit (a running total drifts).
  double max_avg = -std::numeric_limits<double>::infinity();
  for (std::size_t start = 0; start + w <= n; ++start) {
    double sum = 0.0;
    for (std::size_t i = start; i < start + w; ++i) sum += current[i];
    max_avg = std::max(max_avg, sum / static_cast<double>(w));
  }
  const bool pass = max_avg <= cfg.driver_avg_limit && peak <= cfg.driver_peak_limit;
  return {pass, max_avg, peak};
}

double runtime_estimate(double avg_current, const PowerConfig& cfg) {
  if (!(avg_current > 0)) throw PreconditionError("runtime_estimate: current must be > 0");
  return cfg.drive_bank.capacity() / avg_current;
}

}  // namespace stairbot::power
