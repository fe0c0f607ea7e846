#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stairbot/control.hpp"
#include "stairbot/scenario.hpp"

namespace stairbot::app {

/// Output files of one run, keyed by file name. Contents are built in memory
/// and written by a single writer once the run finishes.
struct Artifacts {
  std::map<std::string, std::string> files;
  int exit_code = 0;  // 0 success, 2 fall or unclimbable
  std::string summary;

  void merge(const Artifacts& other);
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitSimFailure = 2;

/// force_profile.csv, torque_vs_angle.csv, design_report.txt.
Artifacts run_design(const Scenario& sc);

/// trajectory.csv, sweep.csv, events.log.
Artifacts run_sim(const Scenario& sc);

/// sweep.csv and the minimum climbing torque only.
Artifacts run_sweep(const Scenario& sc);

/// commands.jsonl, link.txt, teleop_summary.txt. Requires inputs.event_log.
Artifacts run_teleop(const Scenario& sc);

/// Everything above plus the power section and a synthetic tracking demo
/// (frame_000.pgm, frame_001.pgm), combined into report.txt.
Artifacts run_report(const Scenario& sc, std::uint64_t seed);

/// Event log merged with the EEG and sonar replay files, ordered by time
/// (ties keep log, EEG, sonar order).
std::vector<control::ControlEvent> load_teleop_events(const Scenario& sc);

/// EEG replay CSV: header `t,attention,meditation`.
std::vector<control::ControlEvent> parse_eeg_replay(const std::string& text);
/// Sonar replay CSV: header `t,d_left,d_front,d_right`.
std::vector<control::ControlEvent> parse_sonar_replay(const std::string& text,
                                                      const control::ControlConfig& cfg);

void write_artifacts(const Artifacts& a, const std::string& dir);

std::string read_text_file(const std::string& path);

}  // namespace stairbot::app
