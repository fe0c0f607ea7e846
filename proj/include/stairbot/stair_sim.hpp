#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stairbot/common.hpp"
#include "stairbot/drivetrain.hpp"

namespace stairbot::sim {

enum class Phase { Approach, Engage, Climb, Crest, Level };

const char* to_string(Phase p);

struct Staircase {
  double inclination = deg_to_rad(40.0);
  double step_rise = 0.25 * 0.83909963117728;
  double step_run = 0.25;
  double ramp_length = 0.72;     // along-slope length of the flight
  double approach_length = 0.0;  // flat run before the first nose

  static Staircase from_rise_run(double rise, double run, double ramp_length,
                                 double approach_length);
  static Staircase from_angle(double inclination, double run, double ramp_length,
                              double approach_length);
  void validate() const;
};

/// Geometry of the path followed by the track reference point. The pitch
/// ramps linearly from 0 to the stair angle over the engage segment, holds
/// on the flight, and ramps back to 0 over one track length past the last
/// nose. Heights are exact integrals of sin(pitch).
class PathProfile {
 public:
  PathProfile(const Staircase& stairs, double track_length);

  Phase phase_at(double s) const;
  double pitch_at(double s) const;
  double height_at(double s) const;
  /// Mean of sin(pitch) over [s0, s1]; the pitch at s0 when the span is empty.
  double mean_sin_pitch(double s0, double s1) const;

  bool has_stairs() const { return ramp_length_ > 0; }
  double engage_start() const { return engage_start_; }
  double climb_start() const { return climb_start_; }
  double crest_start() const { return crest_start_; }
  double level_start() const { return level_start_; }
  double inclination() const { return theta_; }

 private:
  double ramp_height(double x, double len) const;

  double theta_;
  double ramp_length_;
  double engage_len_;
  double crest_len_;
  double engage_start_;
  double climb_start_;
  double crest_start_;
  double level_start_;
};

struct PlateConfig {
  double rate_limit = 0.5;  // rad/s of relative plate lift
  double lever = 0.30;      // m, actuator lever arm about the plate hinge
  double stroke = 0.30 * 0.64278760968653925;  // m, enough for a 40 deg stair
  double tolerance = deg_to_rad(1.0);

  double max_lift() const;
};

struct SimConfig {
  double dt = 1e-3;
  double duration = 10.0;
  double rolling_resist_coeff = 0.0;
  drivetrain::TrackParams track;
  drivetrain::MotorSpec motor;
  double ground_speed_cap = 3.0;
  double stair_speed_cap = 0.1;
  double max_accel = 0.5;
  double track_length = 0.25;
  double backroll_tolerance = 0.02;  // m/s of reverse speed tolerated before a fall
  PlateConfig plate;

  void validate() const;
  double inertia() const { return track.supported_mass + track.pulley_p1_mass; }
  double motor_limit_torque() const { return motor.output_torque(); }
};

struct SimState {
  Phase phase = Phase::Approach;
  double t = 0.0;
  double s = 0.0;
  double v = 0.0;
  double pitch = 0.0;          // chassis pitch, rad
  double plate_lift = 0.0;     // actuator-driven plate rotation relative to chassis
  double plate_angle = 0.0;    // absolute plate angle vs horizontal
  double actuator_ext = 0.0;   // m, per front actuator
  double track_torque = 0.0;   // N*m applied per track
};

struct StepResult {
  SimState state;
  bool fall = false;
  bool actuator_saturated = false;
  bool speed_limited = false;
};

/// One semi-implicit Euler step under a commanded per-track torque. The
/// command is clipped to the motor limit; when the speed or acceleration cap
/// binds, the recorded torque is the one that produces the capped motion.
StepResult step(const SimState& state, double torque_cmd, const SimConfig& cfg,
                const PathProfile& path);

inline StepResult step(const SimState& state, double torque_cmd, const SimConfig& cfg,
                       const Staircase& stairs) {
  return step(state, torque_cmd, cfg, PathProfile(stairs, cfg.track_length));
}

/// Piecewise-constant torque over time; knots sorted by time.
class TorqueSchedule {
 public:
  TorqueSchedule() = default;
  explicit TorqueSchedule(std::vector<std::pair<double, double>> knots);
  static TorqueSchedule constant(double torque) { return TorqueSchedule({{0.0, torque}}); }

  double at(double t) const;
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_{{0.0, 0.0}};
};

struct SimEvent {
  double t;
  std::string kind;  // "phase", "fall", "actuator_saturation"
  std::string detail;
};

struct Trajectory {
  std::vector<SimState> states;
  std::vector<SimEvent> events;
  std::vector<Phase> phases_visited;
  double peak_torque = 0.0;
  double max_plate_error_in_climb = 0.0;
  bool completed = false;
  bool fall = false;
  bool actuator_saturation = false;
  double final_v() const { return states.empty() ? 0.0 : states.back().v; }
  double final_t() const { return states.empty() ? 0.0 : states.back().t; }
};

/// Runs from rest at s = 0 until the robot reaches level ground past the
/// flight (completed), falls back, or the configured duration elapses.
Trajectory run_climb(const SimConfig& cfg, const Staircase& stairs,
                     const TorqueSchedule& schedule, bool record_states = true);

/// Smallest constant per-track torque (bisection to 0.05 N*m) that completes
/// the climb within `duration` without a fall. Throws UnclimbableError if the
/// motor-limit torque does not suffice.
double min_torque_sweep(const SimConfig& cfg, const Staircase& stairs, double duration);

inline constexpr double kSweepResolution = 0.05;

/// Rolling-resistance coefficient that makes quasi-static climbing on the
/// full slope need `target_torque` per track.
double calibrate_rolling_resistance(const SimConfig& cfg, const Staircase& stairs,
                                    double target_torque);

}  // namespace stairbot::sim
