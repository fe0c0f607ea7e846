#include "stairbot/drivetrain.hpp"

#include <cmath>

namespace stairbot::drivetrain {

const char* to_string(Pulley p) {
  switch (p) {
    case Pulley::P1: return "P1";
    case Pulley::P2: return "P2";
    case Pulley::P3: return "P3";
  }
  return "?";
}

Pulley pulley_from_string(const std::string& s) {
  if (s == "P1") return Pulley::P1;
  if (s == "P2") return Pulley::P2;
  if (s == "P3") return Pulley::P3;
  throw PreconditionError("unknown pulley '" + s + "'");
}

const char* to_string(Tension t) {
  switch (t) {
    case Tension::T1: return "T1";
    case Tension::T2: return "T2";
    case Tension::T3: return "T3";
  }
  return "?";
}

void TrackParams::validate() const {
  if (!(radius_p1 > 0) || !(radius_p23 > 0)) {
    throw PreconditionError("track: pulley radii must be positive");
  }
  if (radius_p1 < radius_p23) {
    throw PreconditionError("track: P1 radius must be >= P2/P3 radius");
  }
  if (supported_mass < 0 || pulley_p1_mass < 0 || pulley_p23_mass < 0) {
    throw PreconditionError("track: masses must be non-negative");
  }
  if (theta < 0 || theta > max_theta + 1e-12) {
    throw PreconditionError("track: stair angle outside [0, max_theta]");
  }
  if (std::abs(accel) > max_accel + 1e-12) {
    throw PreconditionError("track: |accel| exceeds the acceleration limit");
  }
  if (!(gravity > 0)) {
    throw PreconditionError("track: gravity must be positive");
  }
}

double torque_case(Pulley driver, const TrackParams& p) {
  const double weight_along = p.supported_mass * p.gravity * std::sin(p.theta);
  if (driver == Pulley::P1) {
    const double inertia = p.supported_mass + p.pulley_p23_mass - p.pulley_p1_mass / 2.0;
    return p.radius_p1 * (inertia * p.accel + weight_along);
  }
  const double inertia = p.supported_mass + p.pulley_p1_mass;
  return p.radius_p23 * (inertia * p.accel + weight_along);
}

double min_static_torque(const TrackParams& p) {
  TrackParams q = p;
  q.accel = 0.0;
  return torque_case(Pulley::P3, q);
}

double mass_for_torque(Pulley driver, const TrackParams& p, double target_torque) {
  // torque is affine in M: torque = radius * (M * (a + g sin theta) + c).
  const double per_kg = p.accel + p.gravity * std::sin(p.theta);
  if (!(per_kg > 0)) {
    throw PreconditionError("mass_for_torque: torque does not depend on mass here");
  }
  double radius = p.radius_p23;
  double offset = p.pulley_p1_mass * p.accel;
  if (driver == Pulley::P1) {
    radius = p.radius_p1;
    offset = (p.pulley_p23_mass - p.pulley_p1_mass / 2.0) * p.accel;
  }
  return (target_torque / radius - offset) / per_kg;
}

int min_pinion_teeth(double pressure_angle, double addendum_factor) {
  if (!(pressure_angle > 0) || pressure_angle > kPi / 2 + 1e-12) {
    throw PreconditionError("min_pinion_teeth: pressure angle outside (0, 90] deg");
  }
  if (!(addendum_factor > 0)) {
    throw PreconditionError("min_pinion_teeth: addendum factor must be positive");
  }
  const double s = std::sin(pressure_angle);
  const double bound = 2.0 * addendum_factor / (s * s);
  // sin(30 deg) is 0.49999999999999994, which would turn an exact 8 into 9.
  return static_cast<int>(std::ceil(bound * (1.0 - 1e-12)));
}

GearDesign GearDesign::standard(double pressure_angle, double addendum_factor,
                                double module_mm, int teeth) {
  GearDesign g;
  g.pressure_angle = pressure_angle;
  g.addendum_factor = addendum_factor;
  g.module_mm = module_mm;
  g.teeth = teeth;
  g.addendum_mm = addendum_factor * module_mm;
  g.pitch_radius_mm = module_mm * teeth / 2.0;
  g.base_radius_mm = g.pitch_radius_mm * std::cos(pressure_angle);
  g.outer_radius_mm = g.pitch_radius_mm + g.addendum_mm;
  return g;
}

double contact_ratio(const GearDesign& g) {
  const double rb = g.base_radius_mm;
  const double ro = g.outer_radius_mm;
  if (!(ro > rb)) {
    throw InvalidGeometryError("contact_ratio: outer radius must exceed base radius");
  }
  const double alpha = g.pressure_angle;
  const double path = g.addendum_mm / std::sin(alpha) + std::sqrt(ro * ro - rb * rb) -
                      rb * std::tan(alpha);
  return g.teeth / (2.0 * kPi * rb) * path;
}

std::array<Tension, 3> tension_order(Pulley driver) {
  switch (driver) {
    case Pulley::P1: return {Tension::T1, Tension::T2, Tension::T3};
    case Pulley::P2: return {Tension::T2, Tension::T3, Tension::T1};
    case Pulley::P3: return {Tension::T3, Tension::T1, Tension::T2};
  }
  return {Tension::T1, Tension::T2, Tension::T3};
}

void MotorSpec::validate() const {
  if (!(rated_power > 0) || !(rated_torque > 0) || !(rated_speed > 0) || !(reduction > 0)) {
    throw PreconditionError("motor: ratings and reduction must be positive");
  }
  const double mech = mechanical_power();
  if (std::abs(mech - rated_power) > 0.05 * rated_power) {
    throw PreconditionError("motor: rated power inconsistent with torque*speed (>5%)");
  }
}

MotorMargin motor_margin(const MotorSpec& motor, double required_torque) {
  if (!(required_torque > 0)) {
    throw PreconditionError("motor_margin: required torque must be positive");
  }
  const double available = motor.output_torque();
  const double margin = available / required_torque;
  return {available, margin, margin >= 1.0};
}

}  // namespace stairbot::drivetrain
