#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stairbot/control.hpp"
#include "stairbot/drivetrain.hpp"
#include "stairbot/power.hpp"
#include "stairbot/stair_sim.hpp"
#include "stairbot/support_assembly.hpp"

namespace stairbot::app {

struct GearSpec {
  double pressure_angle = deg_to_rad(20.0);
  double addendum_factor = 1.0;
  double module_mm = 4.0;
};

/// Everything a CLI run needs, loaded from one JSON file. Physical keys carry
/// unit suffixes (`_m`, `_kg`, `_deg`, ...); unknown keys are rejected.
struct Scenario {
  std::string name = "default";

  support::SupportGeometry support_geometry;
  support::SupportLoad support_load;
  std::vector<double> theta_grid;  // rad
  double peak_hinge_load = 1130.0;

  drivetrain::TrackParams track;
  std::vector<double> torque_grid;  // rad, stair angles for the torque table
  GearSpec gear;

  sim::Staircase staircase;
  sim::SimConfig sim;
  sim::TorqueSchedule schedule = sim::TorqueSchedule::constant(33.0);
  double sweep_duration = 10.0;
  double sweep_step = 0.5;  // N*m spacing of the sweep table

  power::PowerConfig power;
  control::ControlConfig control;
  signal::LoessConfig loess;

  double hfov = deg_to_rad(53.5);
  double fb_threshold = 1.0;
  int frame_width = 96;
  int frame_height = 96;

  std::optional<std::string> event_log;
  std::optional<std::string> eeg_replay;
  std::optional<std::string> sonar_replay;
  std::string outputs_dir = "out";

  void validate() const;
};

/// Parses scenario JSON text. Relative input paths resolve against `base_dir`.
/// Throws ConfigError with the offending key path.
Scenario parse_scenario(const std::string& json_text, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

/// Built-in defaults (no file).
Scenario default_scenario();

}  // namespace stairbot::app
