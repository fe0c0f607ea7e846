#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "stairbot/reports.hpp"

namespace {

struct Options {
  std::string scenario;
  std::string out;
  std::uint64_t seed = 1;
  std::optional<double> dt;
};

int run(const std::string& command, const Options& opt) {
  using namespace stairbot;
  app::Scenario sc = opt.scenario.empty() ? app::default_scenario()
                                          : app::load_scenario(opt.scenario);
  if (opt.dt) {
    if (!(*opt.dt > 0)) throw ConfigError("--dt: must be > 0");
    sc.sim.dt = *opt.dt;
    sc.validate();
  }
  const std::string out = opt.out.empty() ? sc.outputs_dir : opt.out;

  app::Artifacts art;
  if (command == "design") {
    art = app::run_design(sc);
  } else if (command == "sim") {
    art = app::run_sim(sc);
  } else if (command == "sweep") {
    art = app::run_sweep(sc);
  } else if (command == "teleop") {
    art = app::run_teleop(sc);
  } else {
    art = app::run_report(sc, opt.seed);
  }
  app::write_artifacts(art, out);
  std::cout << art.summary;
  for (const auto& [name, body] : art.files) std::cout << "wrote " << out << "/" << name << "\n";
  return art.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"stairbot: design, simulation and teleoperation toolkit for a stair-climbing wheelchair"};
  cli.require_subcommand(1, 1);
  Options opt;
  for (const char* name : {"design", "sim", "sweep", "teleop", "report"}) {
    auto* sub = cli.add_subcommand(name);
    sub->add_option("--scenario", opt.scenario, "Scenario JSON file (defaults built in)");
    sub->add_option("--out", opt.out, "Output directory (overrides outputs_dir)");
    sub->add_option("--seed", opt.seed, "Seed for synthetic frames");
    sub->add_option("--dt", opt.dt, "Simulation step in seconds");
  }
  const char* descriptions[][2] = {
      {"design", "Support, gear, torque and motor sizing report"},
      {"sim", "Climb trajectory, torque sweep and event log"},
      {"sweep", "Minimum constant climbing torque"},
      {"teleop", "Replay an event log through the mode arbiter"},
      {"report", "All of the above plus power and tracking sections"}};
  for (auto& d : descriptions) cli.get_subcommand(d[0])->description(d[1]);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : stairbot::app::kExitConfig;
  }
  const std::string command = cli.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const stairbot::UnclimbableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return stairbot::app::kExitSimFailure;
  } catch (const stairbot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return stairbot::app::kExitConfig;
  }
}
