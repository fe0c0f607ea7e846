#include "stairbot/reports.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "stairbot/csv.hpp"
#include "stairbot/kernels.hpp"
#include "stairbot/perception.hpp"
#include "stairbot/power.hpp"

namespace stairbot::app {

namespace {

namespace fs = std::filesystem;
using io::fmt_num;

// Reference torques the design is checked against.
constexpr double kRefTorqueP1 = 35.8;
constexpr double kRefTorqueP3 = 25.0;
constexpr double kRefTorqueStatic = 22.0;

std::string deg(double rad) { return fmt_num(rad_to_deg(rad)); }

std::string order_text(drivetrain::Pulley driver) {
  const auto o = drivetrain::tension_order(driver);
  return std::string(to_string(o[0])) + " > " + to_string(o[1]) + " > " + to_string(o[2]);
}

std::vector<double> sweep_grid(const Scenario& sc) {
  std::vector<double> g;
  const double hi = sc.sim.motor_limit_torque();
  const int n = static_cast<int>(std::floor(hi / sc.sweep_step + 1e-9));
  for (int i = 0; i <= n; ++i) g.push_back(sc.sweep_step * i);
  if (g.back() < hi - 1e-9) g.push_back(hi);
  return g;
}

struct SweepOutcome {
  std::string csv;
  std::string log;
  bool unclimbable = false;
  double min_torque = 0.0;
};

SweepOutcome sweep(const Scenario& sc) {
  SweepOutcome out;
  sim::SimConfig cfg = sc.sim;
  cfg.duration = sc.sweep_duration;
  const auto grid = sweep_grid(sc);
  const auto runs = kernels::omp::torque_scan(cfg, sc.staircase, grid);

  std::ostringstream csv;
  io::CsvWriter w(csv, {"torque_Nm", "completed", "final_v"});
  for (const auto& r : runs) {
    w.row({fmt_num(r.torque), r.completed ? "1" : "0", fmt_num(r.final_v)});
  }
  out.csv = csv.str();

  std::ostringstream log;
  try {
    out.min_torque = kernels::omp::min_torque_search(cfg, sc.staircase, sc.sweep_duration);
    log << "min_torque_Nm " << fmt_num(out.min_torque) << " horizon_s "
        << fmt_num(sc.sweep_duration) << "\n";
  } catch (const UnclimbableError& e) {
    out.unclimbable = true;
    log << "unclimbable " << e.what() << "\n";
  }
  out.log = log.str();
  return out;
}

struct SimOutcome {
  Artifacts art;
  sim::Trajectory traj;
  SweepOutcome sweep;
};

SimOutcome simulate(const Scenario& sc) {
  SimOutcome o;
  o.traj = sim::run_climb(sc.sim, sc.staircase, sc.schedule, true);
  const auto& tr = o.traj;

  std::ostringstream csv;
  io::CsvWriter w(csv, {"t", "phase", "s", "v", "plate_angle_deg", "torque_Nm", "events"});
  std::size_t next_event = 0;
  const double half_dt = 0.5 * sc.sim.dt;
  for (const auto& st : tr.states) {
    std::string ev;
    while (next_event < tr.events.size() && tr.events[next_event].t <= st.t + half_dt) {
      if (!ev.empty()) ev += ';';
      ev += tr.events[next_event].kind;
      if (!tr.events[next_event].detail.empty() && tr.events[next_event].kind == "phase") {
        ev += ':' + tr.events[next_event].detail;
      }
      ++next_event;
    }
    w.row({fmt_num(st.t), to_string(st.phase), fmt_num(st.s), fmt_num(st.v),
           fmt_num(rad_to_deg(st.plate_angle)), fmt_num(st.track_torque), ev});
  }

  std::ostringstream log;
  log << "scenario " << sc.name << "\n";
  for (const auto& e : tr.events) {
    log << "t=" << fmt_num(e.t) << " " << e.kind;
    if (!e.detail.empty()) log << " " << e.detail;
    log << "\n";
  }
  double vmax = 0.0;
  for (const auto& st : tr.states) vmax = std::max(vmax, st.v);
  log << "peak_torque_Nm " << fmt_num(tr.peak_torque) << "\n";
  log << "max_v_mps " << fmt_num(vmax) << "\n";
  log << "max_plate_error_in_climb_deg " << fmt_num(rad_to_deg(tr.max_plate_error_in_climb))
      << "\n";
  o.sweep = sweep(sc);
  log << o.sweep.log;

  const char* outcome = tr.fall ? "fall" : tr.completed ? "completed" : "incomplete";
  log << "outcome " << outcome << " t=" << fmt_num(tr.final_t()) << "\n";

  o.art.files["trajectory.csv"] = csv.str();
  o.art.files["sweep.csv"] = o.sweep.csv;
  o.art.files["events.log"] = log.str();
  o.art.exit_code = (tr.fall || !tr.completed || o.sweep.unclimbable) ? kExitSimFailure : kExitOk;

  std::ostringstream sum;
  sum << "climb: " << outcome << " at t=" << fmt_num(tr.final_t()) << " s, peak torque "
      << fmt_num(tr.peak_torque) << " N*m, max speed " << fmt_num(vmax) << " m/s\n";
  if (o.sweep.unclimbable) {
    sum << "sweep: unclimbable within the motor limit\n";
  } else {
    sum << "sweep: minimum constant torque " << fmt_num(o.sweep.min_torque) << " N*m over "
        << fmt_num(sc.sweep_duration) << " s\n";
  }
  o.art.summary = sum.str();
  return o;
}

std::string power_section(const Scenario& sc, const sim::Trajectory& tr) {
  const auto& motor = sc.sim.motor;
  std::vector<double> current;
  current.reserve(tr.states.size());
  for (std::size_t i = 1; i < tr.states.size(); ++i) {
    const double shaft = std::abs(tr.states[i].track_torque) / motor.reduction;
    current.push_back(power::motor_current(shaft, sc.power, motor));
  }
  std::ostringstream os;
  os << "[power]\n";
  const double kt = sc.power.kt(motor);
  os << "drive bus: " << fmt_num(sc.power.drive_bank.voltage()) << " V, "
     << fmt_num(sc.power.drive_bank.capacity()) << " Ah\n";
  os << "torque constant: " << fmt_num(kt) << " N*m/A"
     << (sc.power.torque_constant > 0 ? " (configured)\n" : " (from rated point)\n");
  os << "current at rated torque: "
     << fmt_num(power::motor_current(motor.rated_torque, sc.power, motor)) << " A\n";
  if (current.empty()) {
    os << "no trajectory samples\n";
    return os.str();
  }
  const auto chk = power::check_driver(current, sc.sim.dt, sc.power);
  double sum = 0.0;
  for (double c : current) sum += c;
  const double avg = sum / static_cast<double>(current.size());
  const double duration = sc.sim.dt * static_cast<double>(current.size());
  os << "per-motor current over the run: mean " << fmt_num(avg) << " A, peak "
     << fmt_num(chk.peak) << " A, worst " << fmt_num(sc.power.window_s) << " s mean "
     << fmt_num(chk.max_avg_window) << " A\n";
  os << "driver limits " << fmt_num(sc.power.driver_avg_limit) << " A mean / "
     << fmt_num(sc.power.driver_peak_limit) << " A peak: " << (chk.pass ? "PASS" : "FAIL")
     << " (margin " << fmt_num(sc.power.driver_avg_limit / std::max(chk.max_avg_window, 1e-12))
     << " mean, " << fmt_num(sc.power.driver_peak_limit / std::max(chk.peak, 1e-12))
     << " peak)\n";
  // Both track motors draw from the drive bank.
  const double bank = 2.0 * avg;
  os << "drive bank draw (2 motors): " << fmt_num(bank) << " A, charge used "
     << fmt_num(bank * duration / 3600.0) << " Ah over " << fmt_num(duration) << " s\n";
  if (bank > 0) {
    os << "runtime at this draw: " << fmt_num(power::runtime_estimate(bank, sc.power))
       << " h\n";
  } else {
    os << "runtime at this draw: unbounded (no load)\n";
  }
  return os.str();
}

struct TrackingDemo {
  std::string text;
  perception::Frame f0, f1;
};

TrackingDemo tracking_demo(const Scenario& sc, std::uint64_t seed) {
  TrackingDemo d;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  const double dx = shift(rng);
  const double dy = shift(rng);
  const perception::SmoothTexture tex(seed);
  d.f0 = tex.render(sc.frame_width, sc.frame_height, 0.0, 0.0);
  d.f1 = tex.render(sc.frame_width, sc.frame_height, dx, dy);
  d.f1.set_timestamp(0.1);

  std::ostringstream os;
  os << "[tracking]\n";
  os << "seed " << seed << ", synthetic shift (" << fmt_num(dx) << ", " << fmt_num(dy)
     << ") px\n";
  const perception::Point2 touch{0.5 * (sc.frame_width - 1), 0.5 * (sc.frame_height - 1)};
  const auto corners = perception::detect_corners(d.f0, 200);
  os << "corners detected: " << corners.size() << "\n";
  if (corners.empty()) {
    os << "no corner to track\n";
    d.text = os.str();
    return d;
  }
  const auto start = perception::select_corner(corners, touch);
  const auto tp = perception::fb_track(d.f0, d.f1, {start, perception::TrackStatus::Tracking},
                                       sc.fb_threshold);
  os << "touch (" << fmt_num(touch.x) << ", " << fmt_num(touch.y) << ") -> corner ("
     << fmt_num(start.x) << ", " << fmt_num(start.y) << ")\n";
  std::optional<double> bearing;
  if (tp.status == perception::TrackStatus::Tracking) {
    const double ex = tp.position.x - start.x - dx;
    const double ey = tp.position.y - start.y - dy;
    bearing = perception::pixel_to_bearing(tp.position.x, sc.frame_width, sc.hfov);
    os << "tracked to (" << fmt_num(tp.position.x) << ", " << fmt_num(tp.position.y)
       << "), error " << fmt_num(std::hypot(ex, ey)) << " px\n";
    os << "bearing " << deg(*bearing) << " deg\n";
  } else {
    os << "point lost\n";
  }
  const auto cmd = control::tracking_controller(bearing, sc.control);
  os << "tracking command: " << control::format_cmd_line(cmd) << "\n";
  d.text = os.str();
  return d;
}

std::string format_summary(const control::TeleopSummary& s) {
  std::ostringstream os;
  os << "commands " << s.commands << "\n";
  os << "avoidance_interventions " << s.avoidance_interventions << "\n";
  os << "diagnostics " << s.diagnostics << "\n";
  os << "final_mode " << to_string(s.final_mode) << "\n";
  for (auto m : {control::Mode::Keypad, control::Mode::Eeg, control::Mode::Voice,
                 control::Mode::Tracking}) {
    const auto it = s.mode_time.find(m);
    os << "time_s " << to_string(m) << " " << fmt_num(it == s.mode_time.end() ? 0.0 : it->second)
       << "\n";
  }
  return os.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text, const std::string& what,
                                               const std::vector<std::string>& header) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::size_t n = 0;
  bool seen_header = false;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = io::split_csv_line(line);
    if (!seen_header) {
      if (cells != header) throw ConfigError(what + " line " + std::to_string(n) + ": bad header");
      seen_header = true;
      continue;
    }
    if (cells.size() != header.size()) {
      throw ConfigError(what + " line " + std::to_string(n) + ": expected " +
                        std::to_string(header.size()) + " columns");
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw ConfigError(what + ": not a number '" + s + "'");
  return v;
}

}  // namespace

void Artifacts::merge(const Artifacts& other) {
  for (const auto& [k, v] : other.files) files[k] = v;
  exit_code = std::max(exit_code, other.exit_code);
  summary += other.summary;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_artifacts(const Artifacts& a, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("outputs dir " + dir + ": " + ec.message());
  for (const auto& [name, body] : a.files) {
    const auto path = fs::path(dir) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << body;
  }
}

Artifacts run_design(const Scenario& sc) {
  Artifacts art;
  if (sc.theta_grid.empty()) throw ConfigError("robot.support.theta_grid_deg: empty grid");

  const auto prof = support::force_profile(sc.support_geometry, sc.support_load, sc.theta_grid);
  {
    std::ostringstream csv;
    io::CsvWriter w(csv, {"theta_deg", "gamma_deg", "force"});
    for (const auto& s : prof.samples) w.row({deg(s.theta), deg(s.gamma), fmt_num(s.force)});
    art.files["force_profile.csv"] = csv.str();
  }
  {
    std::ostringstream csv;
    io::CsvWriter w(csv, {"case", "theta_deg", "accel", "torque_Nm"});
    for (auto driver : {drivetrain::Pulley::P1, drivetrain::Pulley::P3}) {
      for (double th : sc.torque_grid) {
        drivetrain::TrackParams p = sc.track;
        p.theta = th;
        w.row({to_string(driver), deg(th), fmt_num(p.accel),
               fmt_num(drivetrain::torque_case(driver, p))});
      }
    }
    art.files["torque_vs_angle.csv"] = csv.str();
  }

  std::ostringstream r;
  r << "stairbot design report: " << sc.name << "\n\n";

  r << "[support]\n";
  const auto max_it = std::max_element(prof.samples.begin(), prof.samples.end(),
                                       [](const auto& a, const auto& b) { return a.force < b.force; });
  r << "theta grid: " << prof.samples.size() << " points, " << deg(prof.samples.front().theta)
    << " to " << deg(prof.samples.back().theta) << " deg\n";
  r << "actuator force: " << fmt_num(prof.samples.front().force) << " at "
    << deg(prof.samples.front().theta) << " deg, " << fmt_num(prof.samples.back().force)
    << " at " << deg(prof.samples.back().theta) << " deg, max " << fmt_num(max_it->force)
    << " at " << deg(max_it->theta) << " deg\n";
  r << "monotone decreasing: " << (prof.monotone_decreasing ? "yes" : "no") << "\n";
  const auto st = support::check_structural(sc.peak_hinge_load, sc.support_load);
  r << "structural: peak hinge load " << fmt_num(sc.peak_hinge_load) << " N x safety factor "
    << fmt_num(sc.support_load.safety_factor) << " = "
    << fmt_num(sc.peak_hinge_load * sc.support_load.safety_factor) << " N vs limit "
    << fmt_num(sc.support_load.hinge_shear_limit) << " N -> " << (st.pass ? "PASS" : "FAIL")
    << " (margin " << (st.unbounded() ? std::string("unbounded") : fmt_num(st.margin)) << ")\n\n";

  r << "[gear]\n";
  const int teeth = drivetrain::min_pinion_teeth(sc.gear.pressure_angle, sc.gear.addendum_factor);
  const auto g = drivetrain::GearDesign::standard(sc.gear.pressure_angle,
                                                  sc.gear.addendum_factor, sc.gear.module_mm, teeth);
  r << "pressure angle: " << deg(sc.gear.pressure_angle) << " deg, module "
    << fmt_num(sc.gear.module_mm) << " mm, addendum factor " << fmt_num(sc.gear.addendum_factor)
    << "\n";
  r << "min pinion teeth N: " << teeth << "\n";
  r << "pitch diameter d: " << fmt_num(g.pitch_diameter_mm()) << " mm\n";
  r << "contact ratio m_c: " << fmt_num(drivetrain::contact_ratio(g)) << "\n\n";

  r << "[belt tensions]\n";
  for (auto d : {drivetrain::Pulley::P1, drivetrain::Pulley::P2, drivetrain::Pulley::P3}) {
    r << to_string(d) << " driven: " << order_text(d) << "\n";
  }
  r << "\n";

  const auto& tp = sc.track;
  const double t1 = drivetrain::torque_case(drivetrain::Pulley::P1, tp);
  const double t3 = drivetrain::torque_case(drivetrain::Pulley::P3, tp);
  const double ts = drivetrain::min_static_torque(tp);
  r << "[drive torque per track]\n";
  r << "stair angle " << deg(tp.theta) << " deg, accel " << fmt_num(tp.accel)
    << " m/s^2, supported mass " << fmt_num(tp.supported_mass) << " kg\n";
  r << "P1 driven (R=" << fmt_num(tp.radius_p1) << " m): " << fmt_num(t1) << " N*m\n";
  r << "P3 driven (r=" << fmt_num(tp.radius_p23) << " m): " << fmt_num(t3) << " N*m\n";
  r << "constant-speed minimum (P3): " << fmt_num(ts) << " N*m\n\n";

  r << "[supported mass per reference torque]\n";
  drivetrain::TrackParams stat = tp;
  stat.accel = 0.0;
  stat.pulley_p23_mass = 0.0;
  const double m_p1 = drivetrain::mass_for_torque(drivetrain::Pulley::P1, tp, kRefTorqueP1);
  const double m_p3 = drivetrain::mass_for_torque(drivetrain::Pulley::P3, tp, kRefTorqueP3);
  const double m_st = drivetrain::mass_for_torque(drivetrain::Pulley::P3, stat, kRefTorqueStatic);
  r << fmt_num(kRefTorqueP1) << " N*m with P1 driven: M = " << fmt_num(m_p1) << " kg\n";
  r << fmt_num(kRefTorqueP3) << " N*m with P3 driven: M = " << fmt_num(m_p3) << " kg\n";
  r << fmt_num(kRefTorqueStatic) << " N*m at constant speed: M = " << fmt_num(m_st) << " kg\n";
  const double lo = std::min({m_p1, m_p3, m_st});
  const double hi = std::max({m_p1, m_p3, m_st});
  r << "spread: " << fmt_num(100.0 * (hi - lo) / lo)
    << " %; no single supported mass reproduces all three reference torques, so each is\n"
       "checked with its own mass\n\n";

  r << "[motor]\n";
  const auto& m = sc.sim.motor;
  r << "rated " << fmt_num(m.rated_power) << " W, " << fmt_num(m.rated_torque) << " N*m, "
    << fmt_num(m.rated_speed) << " rpm (mechanical " << fmt_num(m.mechanical_power())
    << " W)\n";
  r << "output torque through " << fmt_num(m.reduction) << ":1 reduction: "
    << fmt_num(m.output_torque()) << " N*m\n";
  for (auto [name, req] : {std::pair{"P1 driven", t1}, std::pair{"P3 driven", t3}}) {
    const auto mm = drivetrain::motor_margin(m, req);
    r << "margin, " << name << ": " << fmt_num(mm.margin) << " (" << (mm.pass ? "PASS" : "FAIL")
      << ")\n";
  }

  art.files["design_report.txt"] = r.str();
  std::ostringstream sum;
  sum << "design: N=" << teeth << ", d=" << fmt_num(g.pitch_diameter_mm())
      << " mm, m_c=" << fmt_num(drivetrain::contact_ratio(g)) << ", P1 torque " << fmt_num(t1)
      << " N*m, P3 torque " << fmt_num(t3) << " N*m\n";
  art.summary = sum.str();
  return art;
}

Artifacts run_sim(const Scenario& sc) { return simulate(sc).art; }

Artifacts run_sweep(const Scenario& sc) {
  Artifacts art;
  const auto s = sweep(sc);
  art.files["sweep.csv"] = s.csv;
  art.files["sweep.log"] = s.log;
  art.exit_code = s.unclimbable ? kExitSimFailure : kExitOk;
  art.summary = "sweep: " + s.log;
  return art;
}

std::vector<control::ControlEvent> parse_eeg_replay(const std::string& text) {
  std::vector<control::ControlEvent> out;
  for (const auto& c : csv_rows(text, "eeg replay", {"t", "attention", "meditation"})) {
    signal::EegRecord rec;
    rec.t = to_double(c[0], "eeg replay t");
    rec.attention = std::clamp(static_cast<int>(std::lround(to_double(c[1], "eeg replay attention"))), 1, 100);
    rec.meditation = std::clamp(static_cast<int>(std::lround(to_double(c[2], "eeg replay meditation"))), 1, 100);
    out.push_back({rec.t, control::EegUpdate{rec}});
  }
  return out;
}

std::vector<control::ControlEvent> parse_sonar_replay(const std::string& text,
                                                      const control::ControlConfig& cfg) {
  std::vector<control::ControlEvent> out;
  for (const auto& c : csv_rows(text, "sonar replay", {"t", "d_left", "d_front", "d_right"})) {
    perception::SonarTriple s;
    s.left = to_double(c[1], "sonar replay d_left");
    s.front = to_double(c[2], "sonar replay d_front");
    s.right = to_double(c[3], "sonar replay d_right");
    s.max_range = cfg.sonar_max_range;
    s.threshold = cfg.sonar_threshold;
    out.push_back({to_double(c[0], "sonar replay t"), control::SonarUpdate{s}});
  }
  return out;
}

std::vector<control::ControlEvent> load_teleop_events(const Scenario& sc) {
  if (!sc.event_log) throw ConfigError("inputs.event_log: required for teleop");
  auto events = control::parse_event_log(read_text_file(*sc.event_log), sc.control);
  if (sc.eeg_replay) {
    auto e = parse_eeg_replay(read_text_file(*sc.eeg_replay));
    events.insert(events.end(), e.begin(), e.end());
  }
  if (sc.sonar_replay) {
    auto e = parse_sonar_replay(read_text_file(*sc.sonar_replay), sc.control);
    events.insert(events.end(), e.begin(), e.end());
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.t < b.t; });
  return events;
}

Artifacts run_teleop(const Scenario& sc) {
  Artifacts art;
  const auto res = control::replay(load_teleop_events(sc), sc.control);
  std::string cmds;
  for (const auto& c : res.commands) cmds += control::format_command_json(c) + "\n";
  std::string link;
  for (const auto& l : res.link_lines) link += l + "\n";
  std::string summary = format_summary(res.summary);
  for (const auto& d : res.diagnostics) summary += "diagnostic " + d + "\n";
  art.files["commands.jsonl"] = cmds;
  art.files["link.txt"] = link;
  art.files["teleop_summary.txt"] = summary;
  art.summary = "teleop: " + std::to_string(res.summary.commands) + " commands, " +
                std::to_string(res.summary.avoidance_interventions) +
                " avoidance interventions, final mode " + to_string(res.summary.final_mode) +
                "\n";
  return art;
}

Artifacts run_report(const Scenario& sc, std::uint64_t seed) {
  Artifacts art = run_design(sc);
  SimOutcome sim = simulate(sc);
  art.merge(sim.art);
  if (sc.event_log) art.merge(run_teleop(sc));

  TrackingDemo demo = tracking_demo(sc, seed);
  {
    std::ostringstream a, b;
    perception::write_pgm(a, demo.f0);
    perception::write_pgm(b, demo.f1);
    art.files["frame_000.pgm"] = a.str();
    art.files["frame_001.pgm"] = b.str();
  }

  std::ostringstream r;
  r << "stairbot report: " << sc.name << "\n\n";
  r << "[summary]\n" << art.summary << "\n";
  r << art.files["design_report.txt"] << "\n";
  r << "[simulation]\n" << art.files["events.log"] << "\n";
  r << power_section(sc, sim.traj) << "\n";
  if (sc.event_log) r << "[teleop]\n" << art.files["teleop_summary.txt"] << "\n";
  r << demo.text;
  art.files["report.txt"] = r.str();
  return art;
}

}  // namespace stairbot::app
