#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "stairbot/stair_sim.hpp"

using namespace stairbot;
using namespace stairbot::sim;

namespace {

double path_height(double s, const Staircase& st, double track) {
  return oracle::path_height(s, st.inclination, st.ramp_length, st.approach_length, track);
}

Staircase stairs40() { return Staircase::from_angle(deg_to_rad(40), 0.25, 0.72, 0.0); }

}  // namespace

TEST_CASE("staircase validation") {
  CHECK_NOTHROW(stairs40().validate());
  Staircase s = stairs40();
  s.step_rise *= 1.01;
  CHECK_THROWS_AS(s.validate(), PreconditionError);
  CHECK_THROWS_AS(Staircase::from_angle(deg_to_rad(45), 0.25, 1, 0).validate(), PreconditionError);
  const auto rr = Staircase::from_rise_run(0.17, 0.28, 1.0, 0.0);
  CHECK(rr.inclination == doctest::Approx(std::atan2(0.17, 0.28)));
}

TEST_CASE("path profile geometry") {
  const Staircase st = Staircase::from_angle(deg_to_rad(30), 0.3, 1.0, 0.5);
  const PathProfile p(st, 0.25);
  CHECK(p.phase_at(0.2) == Phase::Approach);
  CHECK(p.phase_at(0.6) == Phase::Engage);
  CHECK(p.phase_at(1.0) == Phase::Climb);
  CHECK(p.phase_at(1.6) == Phase::Crest);
  CHECK(p.phase_at(1.8) == Phase::Level);
  CHECK(p.pitch_at(1.0) == doctest::Approx(deg_to_rad(30)));
  for (double s = 0; s < 2.0; s += 0.037) {
    CHECK(p.height_at(s) == doctest::Approx(path_height(s, st, 0.25)).epsilon(1e-12));
  }
  // Mean slope over a span equals the height change over it.
  CHECK(p.mean_sin_pitch(0.55, 0.61) * 0.06 ==
        doctest::Approx(path_height(0.61, st, 0.25) - path_height(0.55, st, 0.25)).epsilon(1e-10));
}

TEST_CASE("step: static equilibrium on the slope") {
  SimConfig cfg;
  const Staircase st = stairs40();
  const PathProfile path(st, cfg.track_length);
  SimState s;
  s.s = 0.5;
  s.phase = Phase::Climb;
  s.pitch = st.inclination;
  const double tau = cfg.track.radius_p23 * cfg.track.supported_mass * cfg.track.gravity *
                     std::sin(st.inclination);
  for (int k = 0; k < 100; ++k) s = step(s, tau, cfg, path).state;
  CHECK(std::abs(s.v) < 1e-12);
  CHECK(s.s == doctest::Approx(0.5));
}

TEST_CASE("step: flat ground follows the constant-acceleration closed form") {
  SimConfig cfg;
  cfg.duration = 12.0;
  Staircase flat = stairs40();
  flat.ramp_length = 0;
  flat.approach_length = 100;
  const double a = 0.3;
  const double tau = a * cfg.inertia() * cfg.track.radius_p23;
  const auto tr = run_climb(cfg, flat, TorqueSchedule::constant(tau));
  for (std::size_t k = 0; k < tr.states.size(); k += 97) {
    const double t = tr.states[k].t;
    CHECK(std::abs(tr.states[k].v - std::min(cfg.ground_speed_cap, a * t)) < 1e-9);
  }
  CHECK(tr.states.back().v == doctest::Approx(3.0));
}

TEST_CASE("step: dt refinement") {
  SimConfig fine;
  fine.duration = 6.0;
  SimConfig coarse = fine;
  coarse.dt = 2 * fine.dt;
  const Staircase st = stairs40();
  const auto sched = TorqueSchedule::constant(30.0);
  const auto a = run_climb(fine, st, sched);
  const auto b = run_climb(coarse, st, sched);
  CHECK(b.states.size() - 1 == (a.states.size() - 1) / 2);
  CHECK(std::abs(a.states.back().s - b.states.back().s) < 5 * coarse.dt);
}

TEST_CASE("run_climb: degenerate staircase") {
  SimConfig cfg;
  Staircase st = stairs40();
  st.ramp_length = 0;
  st.approach_length = 0;
  const auto tr = run_climb(cfg, st, TorqueSchedule::constant(5.0));
  CHECK(tr.completed);
  CHECK(tr.phases_visited == std::vector<Phase>{Phase::Approach, Phase::Level});
}

TEST_CASE("run_climb: adequate torque completes with a level seat") {
  SimConfig cfg;
  cfg.duration = 15;
  const Staircase st = stairs40();
  drivetrain::TrackParams tp = cfg.track;
  tp.theta = st.inclination;
  const auto tr = run_climb(cfg, st, TorqueSchedule::constant(1.5 * drivetrain::min_static_torque(tp)));
  CHECK(tr.completed);
  CHECK_FALSE(tr.fall);
  CHECK(tr.phases_visited ==
        std::vector<Phase>{Phase::Approach, Phase::Engage, Phase::Climb, Phase::Crest, Phase::Level});
  CHECK(rad_to_deg(tr.max_plate_error_in_climb) <= 1.0);
  const double stroke = cfg.plate.stroke;
  for (const auto& s : tr.states) {
    CHECK(std::abs(s.plate_angle) <= st.inclination + 1e-12);
    CHECK(s.actuator_ext >= -1e-12);
    CHECK(s.actuator_ext <= stroke + 1e-12);
    const double cap = (s.phase == Phase::Level) ? cfg.ground_speed_cap : cfg.stair_speed_cap;
    CHECK(s.v <= cap + 1e-12);
  }
}

TEST_CASE("run_climb: no drive on the slope falls or stalls") {
  SimConfig cfg;
  const auto tr = run_climb(cfg, stairs40(), TorqueSchedule::constant(0.0));
  CHECK_FALSE(tr.completed);

  // Losing drive halfway up rolls the robot back.
  const auto tr2 = run_climb(cfg, stairs40(), TorqueSchedule({{0.0, 30.0}, {4.0, 0.0}}));
  CHECK(tr2.fall);
  CHECK_FALSE(tr2.completed);
  CHECK(std::any_of(tr2.events.begin(), tr2.events.end(), [](const SimEvent& e) { return e.kind == "fall"; }));
}

TEST_CASE("run_climb: short actuator stroke saturates") {
  SimConfig cfg;
  cfg.duration = 15;
  cfg.plate.stroke = cfg.plate.lever * std::sin(deg_to_rad(20));
  const auto tr = run_climb(cfg, stairs40(), TorqueSchedule::constant(33));
  CHECK(tr.actuator_saturation);
  CHECK(tr.completed);
}

TEST_CASE("run_climb: faster leveling tracks the slope more closely") {
  double prev = 1e9;
  for (double rate : {0.05, 0.15, 0.3}) {
    SimConfig cfg;
    cfg.duration = 15;
    cfg.plate.rate_limit = rate;
    const auto tr = run_climb(cfg, stairs40(), TorqueSchedule::constant(33));
    double integral = 0;
    for (const auto& s : tr.states) integral += std::abs(s.plate_angle) * cfg.dt;
    CHECK(integral < prev);
    prev = integral;
  }
}

TEST_CASE("run_climb: energy balance per step") {
  SimConfig cfg;
  cfg.duration = 15;
  const Staircase st = stairs40();
  const auto tr = run_climb(cfg, st, TorqueSchedule::constant(33));
  REQUIRE(tr.completed);
  const double I = cfg.inertia();
  const double Mg = cfg.track.supported_mass * cfg.track.gravity;
  const double r = cfg.track.radius_p23;
  for (std::size_t k = 1; k < tr.states.size(); ++k) {
    const auto& a = tr.states[k - 1];
    const auto& b = tr.states[k];
    const double work = b.track_torque / r * (b.s - a.s);
    const double dke = 0.5 * I * (b.v * b.v - a.v * a.v);
    const double dpe = Mg * (path_height(b.s, st, cfg.track_length) - path_height(a.s, st, cfg.track_length));
    const double scale = std::max({std::abs(work), std::abs(dke) + std::abs(dpe), 1e-12});
    CHECK(work - dke - dpe >= -1e-6 * scale);
  }
}

TEST_CASE("run_climb: deterministic") {
  SimConfig cfg;
  const auto a = run_climb(cfg, stairs40(), TorqueSchedule::constant(28));
  const auto b = run_climb(cfg, stairs40(), TorqueSchedule::constant(28));
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    CHECK(a.states[k].s == b.states[k].s);
    CHECK(a.states[k].v == b.states[k].v);
  }
}

TEST_CASE("min_torque_sweep") {
  SimConfig cfg;
  const Staircase st = stairs40();
  drivetrain::TrackParams tp = cfg.track;
  tp.theta = st.inclination;
  const double stat = drivetrain::min_static_torque(tp);
  const double tau = min_torque_sweep(cfg, st, 10.0);
  CHECK(tau >= stat - 1e-9);
  CHECK(tau <= 1.02 * stat + 0.1);

  SimConfig cal = cfg;
  cal.rolling_resist_coeff = calibrate_rolling_resistance(cfg, st, 25.4);
  CHECK(cal.rolling_resist_coeff == doctest::Approx(oracle::kCrrFor254).epsilon(1e-9));
  CHECK(std::abs(min_torque_sweep(cal, st, 10.0) - 25.4) / 25.4 <= 0.05);

  double prev = 0;
  for (double deg : {10.0, 25.0, 40.0}) {
    const Staircase s = Staircase::from_angle(deg_to_rad(deg), 0.25, 0.72, 0.0);
    const double t = min_torque_sweep(cfg, s, 10.0);
    CHECK(t >= prev);
    prev = t;
  }

  SimConfig weak = cfg;
  weak.motor.rated_torque = 8;
  weak.motor.rated_power = 8 * 143 * 2 * kPi / 60;
  CHECK_THROWS_AS(min_torque_sweep(weak, st, 10.0), UnclimbableError);
}

TEST_CASE("momentum carries a short flight below the static torque") {
  // A short flight with time to spare lets the approach speed carry the
  // robot over; the sweep result then dips under the static requirement.
  SimConfig cfg;
  const Staircase st = Staircase::from_angle(deg_to_rad(40), 0.25, 0.4, 0.0);
  drivetrain::TrackParams tp = cfg.track;
  tp.theta = st.inclination;
  const double stat = drivetrain::min_static_torque(tp);
  const double tau = min_torque_sweep(cfg, st, 10.0);
  CHECK(tau < stat);
  CHECK(tau > stat - 0.15);
}
