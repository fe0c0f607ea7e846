#pragma once

#include <array>
#include <string>

#include "stairbot/common.hpp"

namespace stairbot::drivetrain {

enum class Pulley { P1, P2, P3 };

const char* to_string(Pulley p);
Pulley pulley_from_string(const std::string& s);

/// Per-track climbing parameters. P1 is the large rear pulley; P2 and P3
/// share a radius and mass.
struct TrackParams {
  double supported_mass = 96.913365587634701;  // kg borne by one track
  double pulley_p1_mass = 0.0;
  double pulley_p23_mass = 0.0;
  double radius_p1 = 0.05;
  double radius_p23 = 0.036;
  double theta = deg_to_rad(40.0);
  double accel = 0.5;
  double gravity = kStandardGravity;
  double max_theta = deg_to_rad(40.0);
  double max_accel = 0.5;

  void validate() const;
};

/// Drive torque per track when the given pulley is powered.
double torque_case(Pulley driver, const TrackParams& p);

/// Driving P3 at constant speed: r * M * g * sin(theta).
double min_static_torque(const TrackParams& p);

/// Supported mass M that makes torque_case(driver, p) hit `target_torque`.
/// Inverts the torque expression; pulley masses in `p` are honoured.
double mass_for_torque(Pulley driver, const TrackParams& p, double target_torque);

// --- gear geometry --------------------------------------------------------

/// Smallest pinion tooth count that avoids interference against a rack:
/// ceil(2f / sin^2(alpha)). Exact integers are not pushed up by rounding noise.
int min_pinion_teeth(double pressure_angle, double addendum_factor);

struct GearDesign {
  double pressure_angle = deg_to_rad(20.0);
  double addendum_factor = 1.0;
  double module_mm = 4.0;
  int teeth = 18;
  double addendum_mm = 4.0;
  double pitch_radius_mm = 36.0;
  double base_radius_mm = 36.0 * 0.93969262078590843;
  double outer_radius_mm = 40.0;

  /// Standard full-depth geometry from module, tooth count and addendum factor.
  static GearDesign standard(double pressure_angle, double addendum_factor,
                             double module_mm, int teeth);
  double pitch_diameter_mm() const { return 2.0 * pitch_radius_mm; }
};

/// Contact ratio of the pinion against a rack, with the addendum as the
/// rack-side approach term. Throws InvalidGeometryError if r_o <= r_b.
double contact_ratio(const GearDesign& g);

// --- belt tensions ---------------------------------------------------------

enum class Tension { T1, T2, T3 };
const char* to_string(Tension t);

/// Descending tension order of the three belt spans for a given driver.
std::array<Tension, 3> tension_order(Pulley driver);

// --- motor -----------------------------------------------------------------

struct MotorSpec {
  double rated_power = 320.0;  // W
  double rated_torque = 22.0;  // N*m
  double rated_speed = 143.0;  // rpm
  double reduction = 2.0;      // output torque / motor torque

  void validate() const;
  double mechanical_power() const { return rated_torque * rated_speed * 2.0 * kPi / 60.0; }
  double output_torque() const { return rated_torque * reduction; }
};

struct MotorMargin {
  double available;
  double margin;
  bool pass;
};

MotorMargin motor_margin(const MotorSpec& motor, double required_torque);

}  // namespace stairbot::drivetrain
