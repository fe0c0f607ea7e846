#include "stairbot/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace stairbot::app {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Typed view over one JSON object that remembers which keys were read, so
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json* obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (obj_ && !obj_->is_object()) throw ConfigError(where() + "must be an object");
  }

  double num(const std::string& key, double fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(where(key) + "must be a number");
    return v->get<double>();
  }

  double positive(const std::string& key, double fallback) {
    const double v = num(key, fallback);
    if (!(v > 0)) throw ConfigError(where(key) + "must be > 0");
    return v;
  }

  double non_negative(const std::string& key, double fallback) {
    const double v = num(key, fallback);
    if (!(v >= 0)) throw ConfigError(where(key) + "must be >= 0");
    return v;
  }

  int integer(const std::string& key, int fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(where(key) + "must be an integer");
    return v->get<int>();
  }

  std::optional<std::string> str(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError(where(key) + "must be a string");
    return v->get<std::string>();
  }

  std::optional<std::vector<double>> num_list(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) throw ConfigError(where(key) + "must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number()) throw ConfigError(where(key) + "must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  const json* array(const std::string& key) {
    const json* v = take(key);
    if (v && !v->is_array()) throw ConfigError(where(key) + "must be an array");
    return v;
  }

  bool has(const std::string& key) const { return obj_ && obj_->contains(key); }

  Section child(const std::string& key) { return Section(take(key), join(key)); }

  void finish() const {
    if (!obj_) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + "unknown key");
    }
  }

  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  std::string where(const std::string& key = "") const {
    const std::string p = key.empty() ? path_ : join(key);
    return (p.empty() ? std::string("<root>") : p) + ": ";
  }

 private:
  const json* take(const std::string& key) {
    seen_.insert(key);
    if (!obj_ || !obj_->contains(key)) return nullptr;
    return &(*obj_)[key];
  }

  const json* obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename F>
void checked(const std::string& path, F&& f) {
  try {
    f();
  } catch (const PreconditionError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string resolve(const std::string& base, const std::string& p) {
  const fs::path path(p);
  if (path.is_absolute()) return p;
  return (fs::path(base) / path).lexically_normal().string();
}

std::vector<double> degree_grid(double from, double to, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround((to - from) / step));
  for (int i = 0; i <= n; ++i) out.push_back(deg_to_rad(from + step * i));
  return out;
}

}  // namespace

Scenario default_scenario() {
  Scenario s;
  s.theta_grid = degree_grid(0.0, 90.0, 1.0);
  s.torque_grid = degree_grid(0.0, 40.0, 1.0);
  return s;
}

void Scenario::validate() const {
  checked("robot.support", [&] {
    support_geometry.validate();
    support_load.validate();
  });
  if (theta_grid.empty()) throw ConfigError("robot.support.theta_grid_deg: empty grid");
  if (torque_grid.empty()) throw ConfigError("robot.track.torque_grid_deg: empty grid");
  checked("robot.track", [&] { track.validate(); });
  checked("robot.motor", [&] { sim.motor.validate(); });
  checked("staircase", [&] { staircase.validate(); });
  checked("sim", [&] { sim.validate(); });
  checked("robot.power", [&] { power.validate(); });
  checked("signal", [&] { loess.validate(); });
  for (const auto& [key, p] : {std::pair{"inputs.event_log", event_log},
                               std::pair{"inputs.eeg_replay", eeg_replay},
                               std::pair{"inputs.sonar_replay", sonar_replay}}) {
    if (p && !fs::exists(*p)) throw ConfigError(std::string(key) + ": file not found: " + *p);
  }
}

Scenario parse_scenario(const std::string& json_text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: invalid JSON (") + e.what() + ")");
  }
  Scenario s = default_scenario();
  Section top(&root, "");
  if (auto n = top.str("name")) s.name = *n;

  Section robot = top.child("robot");
  {
    Section sup = robot.child("support");
    auto& g = s.support_geometry;
    auto& l = s.support_load;
    g.a = sup.positive("a_m", g.a);
    g.b = sup.positive("b_m", g.b);
    g.h = sup.positive("h_m", g.h);
    l.mass = sup.positive("user_mass_kg", l.mass);
    l.gravity = sup.positive("gravity_mps2", l.gravity);
    l.safety_factor = sup.num("safety_factor", l.safety_factor);
    l.hinge_shear_limit = sup.positive("hinge_shear_limit_N", l.hinge_shear_limit);
    l.moment_arm = sup.positive("moment_arm_m", l.moment_arm);
    s.peak_hinge_load = sup.non_negative("peak_hinge_load_N", s.peak_hinge_load);
    if (auto grid = sup.num_list("theta_grid_deg")) {
      if (grid->empty()) throw ConfigError("robot.support.theta_grid_deg: empty grid");
      s.theta_grid.clear();
      for (double d : *grid) s.theta_grid.push_back(deg_to_rad(d));
    }
    sup.finish();
  }
  {
    Section tr = robot.child("track");
    auto& t = s.track;
    t.supported_mass = tr.positive("supported_mass_kg", t.supported_mass);
    t.pulley_p1_mass = tr.non_negative("pulley_p1_mass_kg", t.pulley_p1_mass);
    t.pulley_p23_mass = tr.non_negative("pulley_p23_mass_kg", t.pulley_p23_mass);
    t.radius_p1 = tr.positive("radius_p1_m", t.radius_p1);
    t.radius_p23 = tr.positive("radius_p23_m", t.radius_p23);
    t.theta = deg_to_rad(tr.non_negative("stair_angle_deg", rad_to_deg(t.theta)));
    t.accel = tr.num("accel_mps2", t.accel);
    t.gravity = tr.positive("gravity_mps2", t.gravity);
    t.max_theta = deg_to_rad(tr.positive("max_stair_angle_deg", rad_to_deg(t.max_theta)));
    t.max_accel = tr.positive("max_accel_mps2", t.max_accel);
    if (auto grid = tr.num_list("torque_grid_deg")) {
      if (grid->empty()) throw ConfigError("robot.track.torque_grid_deg: empty grid");
      s.torque_grid.clear();
      for (double d : *grid) s.torque_grid.push_back(deg_to_rad(d));
    }
    tr.finish();
  }
  {
    Section ge = robot.child("gear");
    s.gear.pressure_angle =
        deg_to_rad(ge.positive("pressure_angle_deg", rad_to_deg(s.gear.pressure_angle)));
    s.gear.addendum_factor = ge.positive("addendum_factor", s.gear.addendum_factor);
    s.gear.module_mm = ge.positive("module_mm", s.gear.module_mm);
    ge.finish();
  }
  {
    Section mo = robot.child("motor");
    auto& m = s.sim.motor;
    m.rated_power = mo.positive("rated_power_W", m.rated_power);
    m.rated_torque = mo.positive("rated_torque_Nm", m.rated_torque);
    m.rated_speed = mo.positive("rated_speed_rpm", m.rated_speed);
    m.reduction = mo.positive("reduction", m.reduction);
    mo.finish();
  }
  {
    Section po = robot.child("power");
    auto& p = s.power;
    p.drive_bank.cell_voltage = po.positive("drive_cell_voltage_V", p.drive_bank.cell_voltage);
    p.drive_bank.capacity_ah = po.positive("drive_cell_capacity_Ah", p.drive_bank.capacity_ah);
    p.drive_bank.count = po.integer("drive_cell_count", p.drive_bank.count);
    p.actuator_bank.cell_voltage =
        po.positive("actuator_cell_voltage_V", p.actuator_bank.cell_voltage);
    p.actuator_bank.capacity_ah =
        po.positive("actuator_cell_capacity_Ah", p.actuator_bank.capacity_ah);
    p.actuator_bank.count = po.integer("actuator_cell_count", p.actuator_bank.count);
    p.logic_rail = po.positive("logic_rail_V", p.logic_rail);
    p.driver_avg_limit = po.positive("driver_avg_limit_A", p.driver_avg_limit);
    p.driver_peak_limit = po.positive("driver_peak_limit_A", p.driver_peak_limit);
    p.actuator_driver_limit = po.positive("actuator_driver_limit_A", p.actuator_driver_limit);
    p.window_s = po.positive("window_s", p.window_s);
    p.torque_constant = po.non_negative("torque_constant_NmpA", p.torque_constant);
    po.finish();
  }
  {
    Section pl = robot.child("plate");
    auto& p = s.sim.plate;
    p.rate_limit = pl.positive("rate_limit_radps", p.rate_limit);
    p.lever = pl.positive("lever_m", p.lever);
    p.stroke = pl.non_negative("stroke_m", p.stroke);
    p.tolerance = deg_to_rad(pl.positive("tolerance_deg", rad_to_deg(p.tolerance)));
    pl.finish();
  }
  robot.finish();

  {
    Section st = top.child("staircase");
    const double run = st.positive("step_run_m", s.staircase.step_run);
    const double ramp = st.non_negative("ramp_length_m", s.staircase.ramp_length);
    const double approach = st.non_negative("approach_length_m", s.staircase.approach_length);
    const bool has_angle = st.has("inclination_deg");
    const bool has_rise = st.has("step_rise_m");
    if (has_angle) {
      const double deg = st.positive("inclination_deg", 40.0);
      s.staircase = sim::Staircase::from_angle(deg_to_rad(deg), run, ramp, approach);
      if (has_rise) {
        const double rise = st.positive("step_rise_m", s.staircase.step_rise);
        if (std::abs(std::atan2(rise, run) - s.staircase.inclination) > 1e-9) {
          throw ConfigError("staircase.step_rise_m: inconsistent with inclination_deg");
        }
      }
    } else {
      const double rise = st.positive("step_rise_m", s.staircase.step_rise);
      s.staircase = sim::Staircase::from_rise_run(rise, run, ramp, approach);
    }
    st.finish();
  }
  {
    Section si = top.child("sim");
    auto& c = s.sim;
    c.dt = si.positive("dt_s", c.dt);
    c.duration = si.positive("duration_s", c.duration);
    c.rolling_resist_coeff = si.non_negative("rolling_resist_coeff", c.rolling_resist_coeff);
    c.ground_speed_cap = si.positive("ground_speed_cap_mps", c.ground_speed_cap);
    c.stair_speed_cap = si.positive("stair_speed_cap_mps", c.stair_speed_cap);
    c.max_accel = si.positive("max_accel_mps2", c.max_accel);
    c.track_length = si.positive("track_length_m", c.track_length);
    c.backroll_tolerance = si.non_negative("backroll_tolerance_mps", c.backroll_tolerance);
    s.sweep_duration = si.positive("sweep_duration_s", s.sweep_duration);
    s.sweep_step = si.positive("sweep_step_Nm", s.sweep_step);
    if (const json* sched = si.array("torque_schedule")) {
      std::vector<std::pair<double, double>> knots;
      std::size_t i = 0;
      for (const auto& k : *sched) {
        Section ks(&k, si.join("torque_schedule[" + std::to_string(i++) + "]"));
        const double t = ks.non_negative("t_s", 0.0);
        const double tau = ks.num("torque_Nm", 0.0);
        ks.finish();
        knots.emplace_back(t, tau);
      }
      checked("sim.torque_schedule", [&] { s.schedule = sim::TorqueSchedule(knots); });
    }
    si.finish();
  }
  s.sim.track = s.track;
  {
    Section co = top.child("control");
    auto& c = s.control;
    c.drive_effort = co.positive("drive_effort", c.drive_effort);
    c.turn_effort = co.positive("turn_effort", c.turn_effort);
    c.cruise_effort = co.positive("cruise_effort", c.cruise_effort);
    c.tracking_gain = co.positive("tracking_gain_per_rad", c.tracking_gain);
    c.speed_scale = co.positive("speed_scale_mps", c.speed_scale);
    c.max_accel = co.positive("max_accel_mps2", c.max_accel);
    c.posture.raise_threshold = co.num("posture_raise_threshold", c.posture.raise_threshold);
    c.posture.lower_threshold = co.num("posture_lower_threshold", c.posture.lower_threshold);
    c.posture.rate = co.positive("posture_rate", c.posture.rate);
    c.eeg_window = static_cast<std::size_t>(co.integer("eeg_window", static_cast<int>(c.eeg_window)));
    c.sonar_threshold = co.positive("sonar_threshold_m", c.sonar_threshold);
    c.sonar_max_range = co.positive("sonar_max_range_m", c.sonar_max_range);
    if (!(c.posture.lower_threshold < c.posture.raise_threshold)) {
      throw ConfigError("control.posture_lower_threshold: must be below the raise threshold");
    }
    if (!(c.sonar_threshold < c.sonar_max_range)) {
      throw ConfigError("control.sonar_threshold_m: must be below sonar_max_range_m");
    }
    co.finish();
  }
  {
    Section pe = top.child("perception");
    s.hfov = deg_to_rad(pe.positive("hfov_deg", rad_to_deg(s.hfov)));
    s.fb_threshold = pe.positive("fb_threshold_px", s.fb_threshold);
    s.frame_width = pe.integer("frame_width_px", s.frame_width);
    s.frame_height = pe.integer("frame_height_px", s.frame_height);
    if (s.frame_width < 16 || s.frame_height < 16) {
      throw ConfigError("perception: frames must be at least 16x16 px");
    }
    pe.finish();
  }
  {
    Section sg = top.child("signal");
    s.loess.span = sg.positive("loess_span", s.loess.span);
    sg.finish();
  }
  {
    Section in = top.child("inputs");
    if (auto p = in.str("event_log")) s.event_log = resolve(base_dir, *p);
    if (auto p = in.str("eeg_replay")) s.eeg_replay = resolve(base_dir, *p);
    if (auto p = in.str("sonar_replay")) s.sonar_replay = resolve(base_dir, *p);
    in.finish();
  }
  if (auto o = top.str("outputs_dir")) s.outputs_dir = resolve(base_dir, *o);
  top.finish();

  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("scenario: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string base = fs::path(path).parent_path().string();
  return parse_scenario(ss.str(), base.empty() ? "." : base);
}

}  // namespace stairbot::app
