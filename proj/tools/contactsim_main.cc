// contactsim: run a scenario, a kick-torque sweep, or a drop test from a
// key = value config file.
//
// Exit codes: 0 ok, 1 config error, 2 contact solver failure, 3 sweep entry
// without a detected kick, 4 output file error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "contactsim/config.h"
#include "contactsim/report.h"

namespace {

constexpr int kConfigError = 1;
constexpr int kSolverError = 2;
constexpr int kNoKick = 3;
constexpr int kOutputError = 4;

constexpr const char* kOutputEnv = "CONTACTSIM_OUTPUT_DIR";

contactsim::RunConfig Load(const std::string& path, bool strict_paper) {
  contactsim::RunConfig config = contactsim::LoadConfig(path);
  if (strict_paper) config.strict_paper = true;
  if (const char* dir = std::getenv(kOutputEnv); dir != nullptr && *dir != '\0') {
    config.output_dir = dir;
  }
  return config;
}

std::ofstream OpenOutput(const contactsim::RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.output_dir);
  const auto path = config.output_dir / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

int Simulate(const contactsim::RunConfig& config) {
  const contactsim::TrajectoryLog log = contactsim::Run(contactsim::BuildScenario(config));
  auto out = OpenOutput(config, "trajectory.csv");
  contactsim::WriteTrajectoryCsv(log, out);
  std::cout << "wrote " << (config.output_dir / "trajectory.csv").string() << " ("
            << log.rows.size() << " steps)\n";
  return 0;
}

int Sweep(const contactsim::RunConfig& config) {
  if (!config.kick_enabled) {
    throw contactsim::ConfigError("config", 0, "sweep needs kick.enabled = true");
  }
  const auto rows = contactsim::RunSweep(config);
  auto out = OpenOutput(config, "sweep.csv");
  contactsim::WriteSweepCsv(rows, out);
  contactsim::PrintSweepTable(rows, std::cout);
  for (const auto& row : rows) {
    if (!row.velocity) return kNoKick;
  }
  return 0;
}

int DropTest(contactsim::RunConfig config) {
  config.biped_enabled = false;
  config.kick_enabled = false;
  const contactsim::TrajectoryLog log = contactsim::Run(contactsim::BuildScenario(config));
  auto out = OpenOutput(config, "trajectory.csv");
  contactsim::WriteTrajectoryCsv(log, out);
  const auto report = contactsim::AnalyzeDrop(log, config.ball_radius);
  std::cout << "drop height      " << report.drop_height << " m\n";
  if (!report.bounced) {
    std::cout << "no ground contact within the horizon\n";
    return 0;
  }
  const double e = config.ball_restitution;
  std::cout << "impact speed     " << report.impact_speed << " m/s\n"
            << "rebound speed    " << report.rebound_speed << " m/s\n"
            << "speed ratio      " << report.rebound_speed / report.impact_speed
            << " (restitution " << e << ")\n"
            << "rebound apex     " << report.apex_height << " m (e^2 h = "
            << e * e * report.drop_height << " m)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D rigid-body contact simulation with a kicking biped"};
  app.require_subcommand(1);
  bool strict_paper = false;
  app.add_flag("--strict-paper", strict_paper,
               "Use the explicit position update q += dt * v_old");

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write trajectory.csv");
  simulate->add_option("config", config_path, "Config file")->required();
  auto* sweep = app.add_subcommand("sweep", "Run the kick-torque sweep and write sweep.csv");
  sweep->add_option("config", config_path, "Config file")->required();
  auto* drop = app.add_subcommand("drop-test", "Drop the ball alone and report the rebound");
  drop->add_option("config", config_path, "Config file")->required();
  app.footer(std::string("Set ") + kOutputEnv + " to override output.dir.");

  CLI11_PARSE(app, argc, argv);

  try {
    const contactsim::RunConfig config = Load(config_path, strict_paper);
    if (simulate->parsed()) return Simulate(config);
    if (sweep->parsed()) return Sweep(config);
    return DropTest(config);
  } catch (const contactsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const contactsim::SimulationError& e) {
    std::cerr << "solver failure at step " << e.step() << ": " << e.what() << '\n';
    return kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOutputError;
  }
}
