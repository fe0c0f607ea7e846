#include "stairbot/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "stairbot/csv.hpp"

namespace stairbot::control {

namespace {

constexpr double kEps = 1e-12;

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

DriveCommand drive(double v, double omega, Mode mode) {
  const auto [l, r] = mix_differential(v, omega);
  return {l, r, 0.0, mode};
}

DriveCommand stop(Mode mode) { return {0.0, 0.0, 0.0, mode}; }

double magnitude(const DriveCommand& c) { return std::max(std::abs(c.left), std::abs(c.right)); }

// Ramps the drive magnitude up by at most `max_step` relative to the previous
// command, keeping the commanded heading. Slowing down is never limited.
DriveCommand slew_limit(const DriveCommand& target, const DriveCommand& previous,
                        double max_step) {
  const double want = magnitude(target);
  const double allowed = magnitude(previous) + max_step;
  if (want <= allowed || want == 0) return target;
  DriveCommand out = target;
  const double k = allowed / want;
  out.left *= k;
  out.right *= k;
  return out;
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Keypad: return "Keypad";
    case Mode::Eeg: return "Eeg";
    case Mode::Voice: return "Voice";
    case Mode::Tracking: return "Tracking";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "Keypad") return Mode::Keypad;
  if (s == "Eeg") return Mode::Eeg;
  if (s == "Voice") return Mode::Voice;
  if (s == "Tracking") return Mode::Tracking;
  throw PreconditionError("unknown mode '" + s + "'");
}

const char* to_string(Heading h) {
  switch (h) {
    case Heading::Left: return "left";
    case Heading::DiagLeft: return "diag-left";
    case Heading::Straight: return "straight";
    case Heading::DiagRight: return "diag-right";
    case Heading::Right: return "right";
  }
  return "?";
}

std::pair<double, double> mix_differential(double v, double omega) {
  return {clamp_unit(v + omega), clamp_unit(v - omega)};
}

std::optional<Heading> heading_of(const DriveCommand& cmd) {
  const double v = 0.5 * (cmd.left + cmd.right);
  const double omega = 0.5 * (cmd.left - cmd.right);
  if (std::abs(v) < kEps && std::abs(omega) < kEps) return std::nullopt;
  if (v < -kEps) return std::nullopt;  // reversing: no forward-facing sensor covers it
  const double angle = std::atan2(omega, std::max(v, 0.0));
  if (std::abs(angle) < kPi / 8) return Heading::Straight;
  if (angle >= 3 * kPi / 8) return Heading::Right;
  if (angle <= -3 * kPi / 8) return Heading::Left;
  return angle > 0 ? Heading::DiagRight : Heading::DiagLeft;
}

std::uint8_t heading_cell(Heading h) {
  using namespace perception;
  switch (h) {
    case Heading::Left: return kLeft;
    case Heading::DiagLeft: return kLeft | kFront;
    case Heading::Straight: return kFront;
    case Heading::DiagRight: return kFront | kRight;
    case Heading::Right: return kRight;
  }
  return 0;
}

DriveCommand avoidance_policy(const perception::RegionOccupancy& occ,
                              const DriveCommand& desired) {
  if (occ.all_occupied()) {
    DriveCommand out = desired;
    out.left = out.right = 0.0;
    return out;
  }
  const auto heading = heading_of(desired);
  if (!heading || !occ.occupied(heading_cell(*heading))) return desired;

  // Straight first, then the gentler turns, right before left.
  for (Heading h : {Heading::Straight, Heading::DiagRight, Heading::DiagLeft, Heading::Right,
                    Heading::Left}) {
    if (h == *heading || occ.occupied(heading_cell(h))) continue;
    const double s = magnitude(desired);
    DriveCommand out = desired;
    switch (h) {
      case Heading::Straight: out.left = s; out.right = s; break;
      case Heading::DiagRight: out.left = s; out.right = 0; break;
      case Heading::DiagLeft: out.left = 0; out.right = s; break;
      case Heading::Right: out.left = s; out.right = -s; break;
      case Heading::Left: out.left = -s; out.right = s; break;
    }
    return out;
  }
  DriveCommand out = desired;
  out.left = out.right = 0.0;
  return out;
}

DriveCommand tracking_controller(std::optional<double> bearing, const ControlConfig& cfg) {
  if (!bearing) return stop(Mode::Tracking);
  // Positive bearing is to the right, and positive omega turns right.
  return drive(cfg.cruise_effort, cfg.tracking_gain * *bearing, Mode::Tracking);
}

ArbiterOutput arbiter_step(const ArbiterState& state, const ControlEvent& event,
                           const ControlConfig& cfg) {
  ArbiterOutput out;
  out.state = state;
  ArbiterState& st = out.state;
  // Slew allowance accrues from the last emitted command.
  const double elapsed = std::max(0.0, event.t - state.last_command_t);
  st.last_t = std::max(state.last_t, event.t);

  std::optional<DriveCommand> desired;
  bool bypass_avoidance = false;

  auto switch_mode = [&](Mode m) {
    out.mode_changed = m != st.mode;
    st.mode = m;
    st.tracking_target = false;
    st.eeg_window.clear();
    st.posture = signal::PostureState::Holding;
    desired = stop(m);
  };

  std::visit(
      [&](const auto& ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, KeyPress>) {
          const char k = ev.key;
          auto toggle = [&](Mode m) { switch_mode(st.mode == m ? Mode::Keypad : m); };
          switch (k) {
            case 'A': toggle(Mode::Eeg); return;
            case 'B': toggle(Mode::Voice); return;
            case 'C': toggle(Mode::Tracking); return;
            case 'D':
              switch_mode(Mode::Keypad);
              bypass_avoidance = true;
              return;
            default: break;
          }
          if (k != '8' && k != '2' && k != '4' && k != '6' && k != '5') {
            out.diagnostic = std::string("unknown key '") + k + "' ignored";
            return;
          }
          if (st.mode != Mode::Keypad) return;
          switch (k) {
            case '8': desired = drive(cfg.drive_effort, 0, Mode::Keypad); break;
            case '2': desired = drive(-cfg.drive_effort, 0, Mode::Keypad); break;
            case '4': desired = drive(0, -cfg.turn_effort, Mode::Keypad); break;
            case '6': desired = drive(0, cfg.turn_effort, Mode::Keypad); break;
            default: desired = stop(Mode::Keypad); break;
          }
        } else if constexpr (std::is_same_v<T, VoiceCommand>) {
          if (st.mode != Mode::Voice) return;
          const std::string& w = ev.symbol;
          if (w == "FORWARD") {
            desired = drive(cfg.drive_effort, 0, Mode::Voice);
          } else if (w == "BACK") {
            desired = drive(-cfg.drive_effort, 0, Mode::Voice);
          } else if (w == "LEFT") {
            desired = drive(0, -cfg.turn_effort, Mode::Voice);
          } else if (w == "RIGHT") {
            desired = drive(0, cfg.turn_effort, Mode::Voice);
          } else if (w == "STOP") {
            desired = stop(Mode::Voice);
          } else if (w == "RAISE" || w == "LOWER") {
            DriveCommand c = stop(Mode::Voice);
            c.posture_rate = (w == "RAISE" ? 1.0 : -1.0) * cfg.posture.rate;
            desired = c;
          } else {
            out.diagnostic = "unknown voice command '" + w + "' ignored";
          }
        } else if constexpr (std::is_same_v<T, EegUpdate>) {
          if (st.mode != Mode::Eeg) return;
          const signal::Sample s{ev.record.t, static_cast<double>(ev.record.meditation)};
          if (!st.eeg_window.empty() && !(s.t > st.eeg_window.back().t)) {
            st.eeg_window.back() = s;
          } else {
            st.eeg_window.push_back(s);
          }
          if (st.eeg_window.size() > std::max<std::size_t>(cfg.eeg_window, 1)) {
            st.eeg_window.erase(st.eeg_window.begin());
          }
          double smoothed = s.value;
          if (st.eeg_window.size() >= 3) {
            signal::LoessConfig lc;
            lc.span = 1.0;
            smoothed = signal::loess_smooth(st.eeg_window, lc).back().value;
          }
          const auto p = signal::posture_controller(std::clamp(smoothed, 1.0, 100.0),
                                                    st.posture, cfg.posture);
          st.posture = p.state;
          DriveCommand c = stop(Mode::Eeg);
          c.posture_rate = p.rate;
          desired = c;
        } else if constexpr (std::is_same_v<T, TouchTarget>) {
          if (st.mode != Mode::Tracking) return;
          st.tracking_target = true;
        } else if constexpr (std::is_same_v<T, SonarUpdate>) {
          st.occupancy = perception::region_map(ev.triple);
        } else if constexpr (std::is_same_v<T, TrackUpdate>) {
          if (st.mode != Mode::Tracking || !st.tracking_target) return;
          desired = tracking_controller(ev.bearing, cfg);
          if (!ev.bearing) st.tracking_target = false;  // wait for a new touch
        }
      },
      event.payload);

  if (!desired) return out;

  DriveCommand cmd = *desired;
  if (!bypass_avoidance) {
    const DriveCommand avoided = avoidance_policy(st.occupancy, cmd);
    out.avoidance_intervened = !(avoided == cmd);
    cmd = avoided;
  }
  const double max_step = cfg.max_accel / cfg.speed_scale * elapsed;
  cmd = slew_limit(cmd, state.last_command, max_step);
  cmd.left = clamp_unit(cmd.left);
  cmd.right = clamp_unit(cmd.right);
  cmd.posture_rate = clamp_unit(cmd.posture_rate);
  cmd.mode = st.mode;
  st.last_command = cmd;
  st.last_command_t = st.last_t;
  out.command = cmd;
  return out;
}

TeleopResult replay(const std::vector<ControlEvent>& events, const ControlConfig& cfg) {
  TeleopResult res;
  ArbiterState st;
  res.link_lines.push_back(format_mode_line(st.mode));
  for (const auto& ev : events) {
    res.summary.mode_time[st.mode] += std::max(0.0, ev.t - st.last_t);
    ArbiterOutput o = arbiter_step(st, ev, cfg);
    if (o.diagnostic) {
      std::ostringstream os;
      os << "t=" << io::fmt_num(ev.t) << ": " << *o.diagnostic;
      res.diagnostics.push_back(os.str());
    }
    if (o.mode_changed) res.link_lines.push_back(format_mode_line(o.state.mode));
    if (o.command) {
      res.commands.push_back({ev.t, *o.command});
      res.link_lines.push_back(format_cmd_line(*o.command));
      if (o.avoidance_intervened) ++res.summary.avoidance_interventions;
    }
    st = std::move(o.state);
  }
  res.summary.commands = res.commands.size();
  res.summary.diagnostics = res.diagnostics.size();
  res.summary.final_mode = st.mode;
  return res;
}

ControlEvent parse_event_line(const std::string& line, std::size_t line_no,
                              const ControlConfig& cfg) {
  auto fail = [&](const std::string& why) -> ConfigError {
    return ConfigError("event log line " + std::to_string(line_no) + ": " + why);
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw fail(std::string("invalid JSON (") + e.what() + ")");
  }
  if (!j.is_object() || !j.contains("t") || !j.contains("type") || !j["t"].is_number() ||
      !j["type"].is_string()) {
    throw fail("expected an object with numeric 't' and string 'type'");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "t" && it.key() != "type" && it.key() != "payload") {
      throw fail("unknown key '" + it.key() + "'");
    }
  }
  const nlohmann::json payload = j.value("payload", nlohmann::json::object());
  if (!payload.is_object()) throw fail("payload must be an object");

  auto number = [&](const char* key) -> double {
    if (!payload.contains(key) || !payload[key].is_number()) {
      throw fail(std::string("payload needs numeric '") + key + "'");
    }
    return payload[key].get<double>();
  };
  auto string = [&](const char* key) -> std::string {
    if (!payload.contains(key) || !payload[key].is_string()) {
      throw fail(std::string("payload needs string '") + key + "'");
    }
    return payload[key].get<std::string>();
  };

  ControlEvent ev;
  ev.t = j["t"].get<double>();
  const std::string type = j["type"].get<std::string>();
  if (type == "key") {
    const std::string k = string("key");
    if (k.size() != 1) throw fail("key must be a single character");
    ev.payload = KeyPress{k[0]};
  } else if (type == "voice") {
    ev.payload = VoiceCommand{string("symbol")};
  } else if (type == "eeg") {
    signal::EegRecord r;
    r.t = ev.t;
    r.attention = std::clamp(static_cast<int>(std::lround(number("attention"))), 1, 100);
    r.meditation = std::clamp(static_cast<int>(std::lround(number("meditation"))), 1, 100);
    ev.payload = EegUpdate{r};
  } else if (type == "touch") {
    ev.payload = TouchTarget{number("x"), number("y")};
  } else if (type == "sonar") {
    perception::SonarTriple s;
    s.max_range = cfg.sonar_max_range;
    s.threshold = cfg.sonar_threshold;
    s.left = std::clamp(number("left"), 1e-6, s.max_range);
    s.front = std::clamp(number("front"), 1e-6, s.max_range);
    s.right = std::clamp(number("right"), 1e-6, s.max_range);
    ev.payload = SonarUpdate{s};
  } else if (type == "track") {
    if (payload.value("lost", false)) {
      ev.payload = TrackUpdate{std::nullopt};
    } else {
      ev.payload = TrackUpdate{number("bearing_rad")};
    }
  } else {
    throw fail("unknown event type '" + type + "'");
  }
  return ev;
}

std::vector<ControlEvent> parse_event_log(const std::string& text, const ControlConfig& cfg) {
  std::vector<ControlEvent> out;
  std::istringstream is(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ControlEvent ev = parse_event_line(line, n, cfg);
    if (!out.empty() && ev.t < out.back().t) {
      throw ConfigError("event log line " + std::to_string(n) + ": time goes backwards");
    }
    out.push_back(std::move(ev));
  }
  return out;
}

std::string format_command_json(const TimedCommand& c) {
  std::ostringstream os;
  os << "{\"t\":" << io::fmt_num(c.t) << ",\"mode\":\"" << to_string(c.command.mode)
     << "\",\"left\":" << io::fmt_num(c.command.left)
     << ",\"right\":" << io::fmt_num(c.command.right)
     << ",\"posture\":" << io::fmt_num(c.command.posture_rate) << "}";
  return os.str();
}

std::string format_mode_line(Mode m) { return std::string("MODE ") + to_string(m); }

std::string format_cmd_line(const DriveCommand& c) {
  return "CMD " + io::fmt_num(c.left) + " " + io::fmt_num(c.right) + " " +
         io::fmt_num(c.posture_rate);
}

LinkMessage parse_link_line(const std::string& line) {
  std::istringstream is(line);
  std::string tag;
  is >> tag;
  if (tag == "MODE") {
    std::string m;
    if (!(is >> m)) throw PreconditionError("link: MODE without a mode");
    return mode_from_string(m);
  }
  if (tag == "CMD") {
    DriveCommand c;
    if (!(is >> c.left >> c.right >> c.posture_rate)) {
      throw PreconditionError("link: CMD needs three numbers");
    }
    std::string extra;
    if (is >> extra) throw PreconditionError("link: trailing data after CMD");
    return c;
  }
  throw PreconditionError("link: unknown message '" + line + "'");
}

}  // namespace stairbot::control
