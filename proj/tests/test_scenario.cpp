#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "stairbot/scenario.hpp"

using namespace stairbot;
using app::parse_scenario;

TEST_CASE("scenario: empty object gives defaults") {
  const auto sc = parse_scenario("{}");
  const auto d = app::default_scenario();
  CHECK(sc.name == d.name);
  CHECK(sc.theta_grid.size() == 91);
  CHECK(sc.sim.dt == d.sim.dt);
  CHECK(sc.staircase.inclination == doctest::Approx(deg_to_rad(40)));
  CHECK(sc.sim.track.supported_mass == sc.track.supported_mass);
  CHECK_FALSE(sc.event_log.has_value());
}

TEST_CASE("scenario: shipped files load") {
  for (const char* f : {"climb_40deg", "climb_calibrated", "flat_ground", "teleop_demo"}) {
    CAPTURE(f);
    const auto sc = app::load_scenario(std::string(STAIRBOT_SOURCE_DIR "/scenarios/") + f + ".json");
    CHECK(sc.name == f);
  }
  const auto c = app::load_scenario(STAIRBOT_SOURCE_DIR "/scenarios/climb_40deg.json");
  CHECK(c.track.supported_mass == oracle::kMassFor22Static);
  CHECK(c.schedule.at(5.0) == 33.0);
}

TEST_CASE("scenario: unknown keys are rejected with their path") {
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"sim":{"dt":0.01}})"), doctest::Contains("sim.dt"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"robot":{"track":{"mass":1}}})"),
                       doctest::Contains("robot.track.mass"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"bogus":true})"), doctest::Contains("bogus"), ConfigError);
}

TEST_CASE("scenario: invalid values") {
  CHECK_THROWS_AS(parse_scenario("not json"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[]"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"sim":{"dt_s":-1}})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"sim":{"dt_s":"fast"}})"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"robot":{"support":{"theta_grid_deg":[]}}})"),
                       doctest::Contains("theta_grid_deg"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"robot":{"track":{"stair_angle_deg":41}}})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"perception":{"frame_width_px":8}})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"inputs":{"event_log":"/nonexistent/events.jsonl"}})"),
                  ConfigError);
  CHECK_THROWS_AS(app::load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("scenario: staircase by rise and run") {
  const auto sc = parse_scenario(R"({"staircase":{"step_rise_m":0.18,"step_run_m":0.28}})");
  CHECK(sc.staircase.inclination == doctest::Approx(std::atan2(0.18, 0.28)));
  CHECK_NOTHROW(parse_scenario(
      R"({"staircase":{"inclination_deg":30,"step_rise_m":0.14433756729740643,"step_run_m":0.25}})"));
  CHECK_THROWS_AS(parse_scenario(
                      R"({"staircase":{"inclination_deg":30,"step_rise_m":0.25,"step_run_m":0.25}})"),
                  ConfigError);
}
