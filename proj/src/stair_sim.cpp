#include "stairbot/stair_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stairbot::sim {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Approach: return "Approach";
    case Phase::Engage: return "Engage";
    case Phase::Climb: return "Climb";
    case Phase::Crest: return "Crest";
    case Phase::Level: return "Level";
  }
  return "?";
}

Staircase Staircase::from_rise_run(double rise, double run, double ramp_length,
                                   double approach_length) {
  Staircase s;
  s.step_rise = rise;
  s.step_run = run;
  s.inclination = std::atan2(rise, run);
  s.ramp_length = ramp_length;
  s.approach_length = approach_length;
  return s;
}

Staircase Staircase::from_angle(double inclination, double run, double ramp_length,
                                double approach_length) {
  Staircase s;
  s.inclination = inclination;
  s.step_run = run;
  s.step_rise = run * std::tan(inclination);
  s.ramp_length = ramp_length;
  s.approach_length = approach_length;
  return s;
}

void Staircase::validate() const {
  if (!(step_rise > 0) || !(step_run > 0)) {
    throw PreconditionError("staircase: step rise and run must be positive");
  }
  if (std::abs(inclination - std::atan2(step_rise, step_run)) > 1e-9) {
    throw PreconditionError("staircase: inclination does not match atan(rise/run)");
  }
  if (!(inclination > 0) || inclination > deg_to_rad(40.0) + 1e-12) {
    throw PreconditionError("staircase: inclination outside (0, 40] deg");
  }
  if (ramp_length < 0 || approach_length < 0) {
    throw PreconditionError("staircase: lengths must be non-negative");
  }
}

PathProfile::PathProfile(const Staircase& stairs, double track_length)
    : theta_(stairs.inclination), ramp_length_(stairs.ramp_length) {
  engage_len_ = std::min(track_length, ramp_length_);
  crest_len_ = ramp_length_ > 0 ? track_length : 0.0;
  engage_start_ = stairs.approach_length;
  climb_start_ = engage_start_ + engage_len_;
  crest_start_ = engage_start_ + ramp_length_;
  level_start_ = crest_start_ + crest_len_;
}

Phase PathProfile::phase_at(double s) const {
  if (!has_stairs()) return s < engage_start_ ? Phase::Approach : Phase::Level;
  if (s < engage_start_) return Phase::Approach;
  if (s < climb_start_) return Phase::Engage;
  if (s < crest_start_) return Phase::Climb;
  if (s < level_start_) return Phase::Crest;
  return Phase::Level;
}

double PathProfile::pitch_at(double s) const {
  if (!has_stairs() || s <= engage_start_ || s >= level_start_) return 0.0;
  if (s < climb_start_) return theta_ * (s - engage_start_) / engage_len_;
  if (s < crest_start_) return theta_;
  return theta_ * (1.0 - (s - crest_start_) / crest_len_);
}

// Height gained over the first x metres of a ramp whose pitch rises linearly
// from 0 to theta over len.
double PathProfile::ramp_height(double x, double len) const {
  if (theta_ == 0 || len <= 0) return 0.0;
  return len / theta_ * (1.0 - std::cos(theta_ * x / len));
}

double PathProfile::height_at(double s) const {
  if (!has_stairs() || s <= engage_start_) return 0.0;
  const double engage_h = ramp_height(engage_len_, engage_len_);
  if (s < climb_start_) return ramp_height(s - engage_start_, engage_len_);
  const double climb_h = std::sin(theta_) * (crest_start_ - climb_start_);
  if (s < crest_start_) return engage_h + std::sin(theta_) * (s - climb_start_);
  // Crest mirrors the engage ramp: pitch falls from theta to 0 over crest_len.
  const double x = std::min(s, level_start_) - crest_start_;
  const double crest_h =
      crest_len_ / theta_ * (std::cos(theta_ * (1.0 - x / crest_len_)) - std::cos(theta_));
  return engage_h + climb_h + crest_h;
}

double PathProfile::mean_sin_pitch(double s0, double s1) const {
  const double ds = s1 - s0;
  if (std::abs(ds) < 1e-12) return std::sin(pitch_at(s0));
  return (height_at(s1) - height_at(s0)) / ds;
}

double PlateConfig::max_lift() const {
  return std::asin(std::clamp(stroke / lever, 0.0, 1.0));
}

void SimConfig::validate() const {
  if (!(dt > 0)) throw PreconditionError("sim: dt must be positive");
  if (!(duration >= dt)) throw PreconditionError("sim: duration must be >= dt");
  if (!(ground_speed_cap > 0) || !(stair_speed_cap > 0)) {
    throw PreconditionError("sim: speed caps must be positive");
  }
  if (!(max_accel > 0)) throw PreconditionError("sim: max accel must be positive");
  if (rolling_resist_coeff < 0) throw PreconditionError("sim: rolling resistance < 0");
  if (!(track_length > 0)) throw PreconditionError("sim: track length must be positive");
  if (!(inertia() > 0)) throw PreconditionError("sim: supported mass must be positive");
  if (!(plate.rate_limit > 0) || !(plate.lever > 0) || plate.stroke < 0) {
    throw PreconditionError("sim: invalid plate actuator parameters");
  }
  track.validate();
  motor.validate();
}

namespace {

double speed_cap_for(Phase phase, const PathProfile& path, const SimConfig& cfg) {
  switch (phase) {
    case Phase::Approach: return path.has_stairs() ? cfg.stair_speed_cap : cfg.ground_speed_cap;
    case Phase::Level: return cfg.ground_speed_cap;
    default: return cfg.stair_speed_cap;
  }
}

// Net along-path force once rolling resistance is applied against the motion
// (or against the impending motion when at rest).
double net_force(double drive, double rolling, double v) {
  if (v > 0) return drive - rolling;
  if (v < 0) return drive + rolling;
  if (drive > rolling) return drive - rolling;
  if (drive < -rolling) return drive + rolling;
  return 0.0;
}

}  // namespace

StepResult step(const SimState& state, double torque_cmd, const SimConfig& cfg,
                const PathProfile& path) {
  const auto& tp = cfg.track;
  const double r = tp.radius_p23;
  const double mass = tp.supported_mass;
  const double inertia = cfg.inertia();
  const double dt = cfg.dt;
  const double limit = cfg.motor_limit_torque();
  const double tau = std::clamp(torque_cmd, -limit, limit);
  const double force_cmd = tau / r;

  const double cap = speed_cap_for(state.phase, path, cfg);
  const double v_limit = std::min(cap, state.v + cfg.max_accel * dt);

  // The gravity term uses the mean slope over the step actually travelled, so
  // the potential-energy change is exact. Converges in a few sweeps since the
  // correction is O(dt^2).
  double v_new = state.v;
  double s_new = state.s + state.v * dt;
  double mean_sin = path.mean_sin_pitch(state.s, s_new);
  double rolling = 0.0;
  bool limited = false;
  for (int it = 0; it < 8; ++it) {
    const double mid = 0.5 * (state.s + s_new);
    rolling = cfg.rolling_resist_coeff * mass * tp.gravity * std::cos(path.pitch_at(mid));
    const double gravity = mass * tp.gravity * mean_sin;
    const double accel = net_force(force_cmd - gravity, rolling, state.v) / inertia;
    v_new = state.v + accel * dt;
    limited = v_new > v_limit;
    if (limited) v_new = v_limit;
    s_new = state.s + v_new * dt;
    const double next_sin = path.mean_sin_pitch(state.s, s_new);
    const bool done = std::abs(next_sin - mean_sin) < 1e-15;
    mean_sin = next_sin;
    if (done) break;
  }

  StepResult out;
  SimState& next = out.state;
  next.t = state.t + dt;
  next.s = s_new;
  next.v = v_new;
  next.phase = path.phase_at(s_new);
  if (limited) {
    // Torque that exactly realises the capped velocity change.
    const double gravity = mass * tp.gravity * mean_sin;
    const double needed = inertia * (v_new - state.v) / dt + gravity;
    const double roll = v_new > 0 ? rolling : (v_new < 0 ? -rolling : 0.0);
    next.track_torque = (needed + roll) * r;
  } else {
    next.track_torque = tau;
  }
  out.speed_limited = limited;
  out.fall = v_new < -cfg.backroll_tolerance;

  next.pitch = path.pitch_at(s_new);
  const double max_step = cfg.plate.rate_limit * dt;
  double lift = state.plate_lift + std::clamp(next.pitch - state.plate_lift, -max_step, max_step);
  const double max_lift = cfg.plate.max_lift();
  if (lift > max_lift) {
    lift = max_lift;
    out.actuator_saturated = next.pitch > max_lift + 1e-9;
  }
  lift = std::max(lift, 0.0);
  next.plate_lift = lift;
  next.plate_angle = next.pitch - lift;
  next.actuator_ext = cfg.plate.lever * std::sin(lift);
  return out;
}

TorqueSchedule::TorqueSchedule(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
  if (knots_.empty()) throw PreconditionError("torque schedule: no knots");
  if (knots_.front().first > 0) {
    throw PreconditionError("torque schedule: first knot must be at t <= 0");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i].first > knots_[i - 1].first)) {
      throw PreconditionError("torque schedule: knot times must increase");
    }
  }
}

double TorqueSchedule::at(double t) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                             [](double x, const auto& k) { return x < k.first; });
  if (it == knots_.begin()) return knots_.front().second;
  return std::prev(it)->second;
}

Trajectory run_climb(const SimConfig& cfg, const Staircase& stairs,
                     const TorqueSchedule& schedule, bool record_states) {
  const PathProfile path(stairs, cfg.track_length);
  Trajectory traj;
  SimState state;
  state.phase = Phase::Approach;
  traj.phases_visited.push_back(state.phase);
  if (record_states) traj.states.push_back(state);

  const auto steps = static_cast<long>(std::ceil(cfg.duration / cfg.dt - 1e-9));
  bool saturated = false;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    state.t = t;
    StepResult res = step(state, schedule.at(t), cfg, path);
    res.state.t = static_cast<double>(k + 1) * cfg.dt;
    traj.peak_torque = std::max(traj.peak_torque, std::abs(res.state.track_torque));

    if (res.state.phase != state.phase) {
      traj.events.push_back({res.state.t, "phase", to_string(res.state.phase)});
      if (std::find(traj.phases_visited.begin(), traj.phases_visited.end(),
                    res.state.phase) == traj.phases_visited.end()) {
        traj.phases_visited.push_back(res.state.phase);
      }
    }
    if (res.actuator_saturated && !saturated) {
      traj.events.push_back({res.state.t, "actuator_saturation", ""});
      traj.actuator_saturation = true;
    }
    saturated = res.actuator_saturated;
    if (res.state.phase == Phase::Climb) {
      traj.max_plate_error_in_climb =
          std::max(traj.max_plate_error_in_climb, std::abs(res.state.plate_angle));
    }

    state = res.state;
    if (record_states) traj.states.push_back(state);
    if (res.fall) {
      std::ostringstream os;
      os << "v=" << state.v << " m/s at s=" << state.s << " m";
      traj.events.push_back({state.t, "fall", os.str()});
      traj.fall = true;
      break;
    }
    if (state.phase == Phase::Level) {
      traj.completed = true;
      break;
    }
  }
  if (!record_states) traj.states.assign(1, state);
  return traj;
}

double min_torque_sweep(const SimConfig& cfg, const Staircase& stairs, double duration) {
  if (!(duration > 0)) throw PreconditionError("min_torque_sweep: duration must be > 0");
  SimConfig run_cfg = cfg;
  run_cfg.duration = duration;
  auto climbs = [&](double torque) {
    const Trajectory tr = run_climb(run_cfg, stairs, TorqueSchedule::constant(torque), false);
    return tr.completed && !tr.fall;
  };

  double hi = run_cfg.motor_limit_torque();
  if (!climbs(hi)) {
    std::ostringstream os;
    os << "motor-limit torque " << hi << " N*m does not complete the climb within "
       << duration << " s";
    throw UnclimbableError(os.str());
  }
  double lo = 0.0;
  if (climbs(lo)) return lo;
  while (hi - lo > kSweepResolution) {
    const double mid = 0.5 * (lo + hi);
    if (climbs(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double calibrate_rolling_resistance(const SimConfig& cfg, const Staircase& stairs,
                                    double target_torque) {
  const auto& tp = cfg.track;
  const double weight = tp.supported_mass * tp.gravity;
  const double grade = target_torque / tp.radius_p23 - weight * std::sin(stairs.inclination);
  if (grade < 0) {
    throw PreconditionError("calibrate_rolling_resistance: target below the gravity load");
  }
  return grade / (weight * std::cos(stairs.inclination));
}

}  // namespace stairbot::sim
