#pragma once

#include <span>

#include "stairbot/common.hpp"
#include "stairbot/drivetrain.hpp"

namespace stairbot::power {

struct BatteryBank {
  double cell_voltage;
  double capacity_ah;
  int count;
  bool series;

  double voltage() const { return series ? cell_voltage * count : cell_voltage; }
  double capacity() const { return series ? capacity_ah : capacity_ah * count; }
};

struct PowerConfig {
  BatteryBank drive_bank{12.0, 26.0, 2, true};        // lead-acid, 24 V bus
  BatteryBank actuator_bank{11.1, 2.7, 2, false};     // LiPo packs
  double logic_rail = 5.0;
  double driver_avg_limit = 40.0;   // A, per motor driver
  double driver_peak_limit = 80.0;  // A
  double actuator_driver_limit = 16.0;
  double window_s = 1.0;            // averaging window for the driver check
  double torque_constant = 0.0;     // N*m/A at the motor shaft; 0 = derive from motor

  void validate() const;
  /// Torque constant, derived from the motor's rated point when not set.
  double kt(const drivetrain::MotorSpec& motor) const;
};

/// Motor current for a shaft torque: I = torque / k_t.
double motor_current(double shaft_torque, const PowerConfig& cfg,
                     const drivetrain::MotorSpec& motor = {});

struct DriverCheck {
  bool pass;
  double max_avg_window;
  double peak;
};

/// Every window-long sliding mean must stay within the average limit and
/// every sample within the peak limit. Profiles shorter than the window are
/// judged on their overall mean.
DriverCheck check_driver(std::span<const double> current, double sample_dt,
                         const PowerConfig& cfg);

/// Ideal discharge time of the drive bank at a constant current, in hours.
double runtime_estimate(double avg_current, const PowerConfig& cfg);

}  // namespace stairbot::power
