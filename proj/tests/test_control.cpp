#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stairbot/control.hpp"
#include "stairbot/reports.hpp"
#include "stairbot/scenario.hpp"

using namespace stairbot;
using namespace stairbot::control;

namespace {

ControlEvent key(double t, char k) { return {t, KeyPress{k}}; }

DriveCommand straight(double s) { return {s, s, 0.0, Mode::Keypad}; }

perception::RegionOccupancy blocked(int mask) {
  return perception::RegionOccupancy(static_cast<std::uint8_t>(mask));
}

int classify(const DriveCommand& c) {
  if (c.left == 0 && c.right == 0) return 99;
  const auto h = heading_of(c);
  REQUIRE(h.has_value());
  switch (*h) {
    case Heading::Straight: return 0;
    case Heading::DiagRight: return 1;
    case Heading::DiagLeft: return -1;
    case Heading::Right: return 2;
    case Heading::Left: return -2;
  }
  return 100;
}

ControlConfig cfg0() { return ControlConfig{}; }

}  // namespace

TEST_CASE("mix_differential") {
  CHECK(mix_differential(1, 0) == std::pair{1.0, 1.0});
  CHECK(mix_differential(0, 1) == std::pair{1.0, -1.0});
  const auto [l, r] = mix_differential(0.8, 0.5);
  CHECK(l == 1.0);
  CHECK(r == doctest::Approx(0.3));
}

TEST_CASE("tracking_controller") {
  const auto c = cfg0();
  const auto s = tracking_controller(0.0, c);
  CHECK(s.left == doctest::Approx(c.cruise_effort));
  CHECK(s.right == doctest::Approx(c.cruise_effort));
  const auto lost = tracking_controller(std::nullopt, c);
  CHECK(lost.left == 0);
  CHECK(lost.right == 0);

  const auto a = tracking_controller(deg_to_rad(10), c);
  const auto b = tracking_controller(deg_to_rad(20), c);
  const double ta = 0.5 * (a.left - a.right), tb = 0.5 * (b.left - b.right);
  CHECK(tb == doctest::Approx(2 * ta));
  CHECK(ta > 0);  // target to the right turns right
  CHECK(tracking_controller(-0.3, c).right > tracking_controller(-0.3, c).left);
}

TEST_CASE("avoidance: straight request against the hand table") {
  for (int mask = 0; mask < 8; ++mask) {
    const auto out = avoidance_policy(blocked(mask), straight(0.5));
    CAPTURE(mask);
    CHECK(classify(out) == oracle::kStraightRequestTable[mask]);
    if (classify(out) != 99) CHECK(std::max(std::abs(out.left), std::abs(out.right)) == doctest::Approx(0.5));
  }
}

TEST_CASE("avoidance: never drives into an occupied cell") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 2000; ++i) {
    const int mask = static_cast<int>(rng() % 8);
    const DriveCommand want{u(rng), u(rng), 0.0, Mode::Keypad};
    const auto occ = blocked(mask);
    const auto out = avoidance_policy(occ, want);
    if (mask == 7) {
      CHECK(out.left == 0);
      CHECK(out.right == 0);
      continue;
    }
    if (const auto h = heading_of(out)) CHECK_FALSE(occ.occupied(heading_cell(*h)));
  }
  CHECK(avoidance_policy(blocked(0), straight(0.4)) == straight(0.4));
  const DriveCommand reverse{-0.4, -0.4, 0, Mode::Keypad};
  CHECK(avoidance_policy(blocked(2), reverse) == reverse);
}

TEST_CASE("avoidance: turning requests") {
  const DriveCommand spin_right{0.5, -0.5, 0, Mode::Keypad};
  // Right blocked: straight is the first free choice.
  CHECK(classify(avoidance_policy(blocked(4), spin_right)) == 0);
  // Right and front blocked: {F,R} is taken, {L,F} is free.
  CHECK(classify(avoidance_policy(blocked(6), spin_right)) == -1);
}

TEST_CASE("arbiter: keypad default and mode contracts") {
  const auto c = cfg0();
  ArbiterState st;
  auto o = arbiter_step(st, key(0.0, '8'), c);
  REQUIRE(o.command);
  CHECK(o.command->mode == Mode::Keypad);
  // Slew-limited from rest: direction forward, magnitude grows with time.
  o = arbiter_step(o.state, key(3.0, '8'), c);
  CHECK(o.command->left == doctest::Approx(c.drive_effort));
  CHECK(o.command->right == doctest::Approx(c.drive_effort));

  // EEG update while in Keypad: ignored.
  signal::EegRecord rec{3.5, 50, 100};
  auto e = arbiter_step(o.state, {3.5, EegUpdate{rec}}, c);
  CHECK_FALSE(e.command);

  // A then meditation 100: posture rises.
  auto a = arbiter_step(ArbiterState{}, key(0, 'A'), c);
  CHECK(a.state.mode == Mode::Eeg);
  CHECK(a.mode_changed);
  auto m = arbiter_step(a.state, {0.1, EegUpdate{{0.1, 50, 100}}}, c);
  REQUIRE(m.command);
  CHECK(m.command->posture_rate > 0);
  CHECK(m.command->mode == Mode::Eeg);

  // Re-pressing A returns to keypad.
  auto back = arbiter_step(m.state, key(0.2, 'A'), c);
  CHECK(back.state.mode == Mode::Keypad);

  auto unknown = arbiter_step(ArbiterState{}, key(0, 'Z'), c);
  CHECK(unknown.diagnostic);
  CHECK_FALSE(unknown.command);

  // Voice words only count in voice mode.
  CHECK_FALSE(arbiter_step(ArbiterState{}, {0, VoiceCommand{"FORWARD"}}, c).command);
  // Drive keys do nothing outside keypad mode.
  auto v = arbiter_step(ArbiterState{}, key(0, 'B'), c);
  CHECK_FALSE(arbiter_step(v.state, key(1, '8'), c).command);
}

TEST_CASE("arbiter: keypad reachable in one key and clamps hold under fuzzing") {
  const auto c = cfg0();
  std::mt19937_64 rng(12);
  const char keys[] = {'8', '2', '4', '6', '5', 'A', 'B', 'C', 'D', 'Q'};
  const char* words[] = {"FORWARD", "BACK", "LEFT", "RIGHT", "STOP", "RAISE", "LOWER", "HELLO"};
  std::uniform_real_distribution<double> u(0, 1);
  ArbiterState st;
  double t = 0;
  for (int i = 0; i < 5000; ++i) {
    t += u(rng) * 0.3;
    ControlEvent ev;
    ev.t = t;
    switch (rng() % 6) {
      case 0: ev.payload = KeyPress{keys[rng() % 10]}; break;
      case 1: ev.payload = VoiceCommand{words[rng() % 8]}; break;
      case 2: ev.payload = EegUpdate{{t, 50, static_cast<int>(1 + rng() % 100)}}; break;
      case 3: ev.payload = TouchTarget{u(rng) * 96, u(rng) * 96}; break;
      case 4: {
        perception::SonarTriple s;
        s.left = 0.1 + 3.9 * u(rng);
        s.front = 0.1 + 3.9 * u(rng);
        s.right = 0.1 + 3.9 * u(rng);
        ev.payload = SonarUpdate{s};
        break;
      }
      default:
        ev.payload = u(rng) < 0.2 ? TrackUpdate{std::nullopt} : TrackUpdate{(u(rng) - 0.5) * 2};
    }
    const auto out = arbiter_step(st, ev, c);
    if (out.command) {
      CHECK(std::abs(out.command->left) <= 1.0);
      CHECK(std::abs(out.command->right) <= 1.0);
      CHECK(std::abs(out.command->posture_rate) <= 1.0);
      CHECK(out.command->mode == out.state.mode);
      if (out.state.occupancy.all_occupied() && !std::holds_alternative<KeyPress>(ev.payload)) {
        CHECK(out.command->left == 0);
        CHECK(out.command->right == 0);
      }
      const double dt = t - st.last_command_t;
      const double prev = std::max(std::abs(st.last_command.left), std::abs(st.last_command.right));
      const double now = std::max(std::abs(out.command->left), std::abs(out.command->right));
      CHECK(now <= prev + c.max_accel / c.speed_scale * dt + 1e-12);
    }
    const auto d = arbiter_step(out.state, {t, KeyPress{'D'}}, c);
    CHECK(d.state.mode == Mode::Keypad);
    st = out.state;
  }
}

TEST_CASE("replay: empty log and golden fixture") {
  const auto empty = replay({}, cfg0());
  CHECK(empty.commands.empty());
  CHECK(empty.summary.final_mode == Mode::Keypad);
  CHECK(empty.link_lines == std::vector<std::string>{"MODE Keypad"});

  const auto sc = app::load_scenario(STAIRBOT_SOURCE_DIR "/scenarios/teleop_demo.json");
  const auto res = replay(app::load_teleop_events(sc), sc.control);
  std::string got;
  for (const auto& c : res.commands) got += format_command_json(c) + "\n";
  CHECK(got == app::read_text_file(STAIRBOT_SOURCE_DIR "/tests/fixtures/teleop_commands.golden.jsonl"));

  // All three sonars blocked from t=4.0 to t=5.0 in the fixture.
  for (const auto& c : res.commands) {
    if (c.t > 4.0 && c.t < 5.0) {
      CHECK(c.command.left == 0);
      CHECK(c.command.right == 0);
    }
  }
}

TEST_CASE("event log parsing") {
  const auto c = cfg0();
  const auto ev = parse_event_line(R"({"t":1.5,"type":"sonar","payload":{"left":0.3,"front":2,"right":4}})", 1, c);
  CHECK(ev.t == 1.5);
  CHECK(std::holds_alternative<SonarUpdate>(ev.payload));
  CHECK(std::get<TrackUpdate>(parse_event_line(R"({"t":0,"type":"track","payload":{"lost":true}})", 1, c).payload)
            .bearing == std::nullopt);

  CHECK_THROWS_WITH_AS(parse_event_log("{\"t\":0,\"type\":\"key\",\"payload\":{\"key\":\"8\"}}\n{oops}\n", c),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_event_line(R"({"t":0,"type":"key","extra":1})", 7, c),
                       doctest::Contains("line 7"), ConfigError);
  CHECK_THROWS_AS(parse_event_line(R"({"t":0,"type":"warp","payload":{}})", 1, c), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_event_log("{\"t\":2,\"type\":\"key\",\"payload\":{\"key\":\"8\"}}\n{\"t\":1,\"type\":\"key\",\"payload\":{\"key\":\"8\"}}\n", c),
      doctest::Contains("backwards"), ConfigError);
}

TEST_CASE("link protocol round trip") {
  const DriveCommand cmd{0.25, -0.125, 1.0, Mode::Keypad};
  const auto line = format_cmd_line(cmd);
  CHECK(line == "CMD 0.25 -0.125 1");
  const auto back = std::get<DriveCommand>(parse_link_line(line));
  CHECK(back.left == 0.25);
  CHECK(back.right == -0.125);
  CHECK(back.posture_rate == 1.0);
  CHECK(std::get<Mode>(parse_link_line("MODE Tracking")) == Mode::Tracking);
  CHECK_THROWS(parse_link_line("HELLO"));
}
