#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stairbot/perception.hpp"
#include "stairbot/signal.hpp"

namespace stairbot::control {

enum class Mode { Keypad, Eeg, Voice, Tracking };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct KeyPress {
  char key;
};
struct VoiceCommand {
  std::string symbol;  // FORWARD, BACK, LEFT, RIGHT, STOP, RAISE, LOWER
};
struct EegUpdate {
  signal::EegRecord record;
};
struct TouchTarget {
  double x, y;
};
struct SonarUpdate {
  perception::SonarTriple triple;
};
struct TrackUpdate {
  std::optional<double> bearing;  // rad, positive right; empty when the point is lost
};

using EventPayload =
    std::variant<KeyPress, VoiceCommand, EegUpdate, TouchTarget, SonarUpdate, TrackUpdate>;

struct ControlEvent {
  double t = 0.0;
  EventPayload payload;
};

/// Normalized effort command for the two track motors and the seat actuator.
struct DriveCommand {
  double left = 0.0;
  double right = 0.0;
  double posture_rate = 0.0;
  Mode mode = Mode::Keypad;

  bool operator==(const DriveCommand&) const = default;
};

struct ControlConfig {
  double drive_effort = 0.5;  // keypad and voice forward/reverse
  double turn_effort = 0.5;   // keypad and voice spin
  double cruise_effort = 0.3; // visual tracking
  double tracking_gain = 1.5; // per rad of bearing
  double speed_scale = 3.0;   // m/s at full effort
  double max_accel = 0.5;     // m/s^2
  signal::PostureConfig posture;
  std::size_t eeg_window = 9;
  double sonar_threshold = 0.5;
  double sonar_max_range = 4.0;
};

/// Clockwise-positive turn rate mixing: left = v + omega, right = v - omega,
/// each clamped to [-1, 1].
std::pair<double, double> mix_differential(double v, double omega);

/// Coarse direction of travel of a command. Reverse and stationary commands
/// have no heading cell.
enum class Heading { Left = -2, DiagLeft = -1, Straight = 0, DiagRight = 1, Right = 2 };

std::optional<Heading> heading_of(const DriveCommand& cmd);
/// Sonar cell (sensor mask) a heading drives into.
std::uint8_t heading_cell(Heading h);
const char* to_string(Heading h);

/// Keeps `desired` if its heading cell is free, otherwise substitutes the
/// first free heading in the order straight, diag-right, diag-left, right,
/// left, at the same effort magnitude. Everything occupied stops the drive.
DriveCommand avoidance_policy(const perception::RegionOccupancy& occ,
                              const DriveCommand& desired);

/// Proportional steering toward the tracked point at cruise effort; stops
/// when the point is lost.
DriveCommand tracking_controller(std::optional<double> bearing, const ControlConfig& cfg);

struct ArbiterState {
  Mode mode = Mode::Keypad;
  double last_t = 0.0;
  double last_command_t = 0.0;
  DriveCommand last_command;
  perception::RegionOccupancy occupancy;
  signal::PostureState posture = signal::PostureState::Holding;
  std::vector<signal::Sample> eeg_window;
  bool tracking_target = false;
};

struct ArbiterOutput {
  ArbiterState state;
  std::optional<DriveCommand> command;
  std::optional<std::string> diagnostic;
  bool mode_changed = false;
  bool avoidance_intervened = false;
};

/// Pure transition of the mode arbiter. Keypad keys: 8/2/4/6 drive, 5 stop,
/// A/B/C toggle EEG/voice/tracking (pressing the active mode's key returns to
/// keypad), D stops everything and returns to keypad.
ArbiterOutput arbiter_step(const ArbiterState& state, const ControlEvent& event,
                           const ControlConfig& cfg);

// --- scenario replay --------------------------------------------------------

struct TimedCommand {
  double t;
  DriveCommand command;
};

struct TeleopSummary {
  std::map<Mode, double> mode_time;  // seconds spent in each mode
  std::size_t commands = 0;
  std::size_t avoidance_interventions = 0;
  std::size_t diagnostics = 0;
  Mode final_mode = Mode::Keypad;
};

struct TeleopResult {
  std::vector<TimedCommand> commands;
  std::vector<std::string> link_lines;
  std::vector<std::string> diagnostics;
  TeleopSummary summary;
};

TeleopResult replay(const std::vector<ControlEvent>& events, const ControlConfig& cfg);

/// Parses one JSON-lines event `{"t": .., "type": .., "payload": {..}}`.
/// Throws ConfigError mentioning `line_no` on malformed input.
ControlEvent parse_event_line(const std::string& line, std::size_t line_no,
                              const ControlConfig& cfg);
std::vector<ControlEvent> parse_event_log(const std::string& text, const ControlConfig& cfg);

std::string format_command_json(const TimedCommand& c);

// Serial link between the low-level controller and the high-level processor:
// "MODE <mode>" and "CMD <left> <right> <posture>".
std::string format_mode_line(Mode m);
std::string format_cmd_line(const DriveCommand& c);
using LinkMessage = std::variant<Mode, DriveCommand>;
LinkMessage parse_link_line(const std::string& line);

}  // namespace stairbot::control
