#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "islmusic/cli_io.hpp"
#include "islmusic/errors.hpp"

namespace {

using namespace islmusic;

int run(const std::string& command, const std::string& scenario, const std::string& config_path,
        const CliOverrides& cli, bool print_only) {
  const ConfigDocument doc =
      config_path.empty() ? parse_config("{}", "<defaults>") : load_config_file(config_path);
  if (print_only) {
    std::cout << print_config(command, scenario, doc, cli).dump(2) << "\n";
    return kExitOk;
  }
  if (command == "estimate") return cmd_estimate(doc, cli);
  if (command == "sweep") return cmd_sweep(scenario, doc, cli);
  if (command == "orbit") return cmd_orbit(doc, cli);
  return cmd_bench(doc, cli);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MUSIC direction-of-arrival estimation for inter-satellite links", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  bool paper_compat = false;
  bool print_only = false;
  app.add_option("--config", config_path, "JSON config file or a previous run manifest")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed (drawn from entropy and recorded when omitted)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--paper-compat", paper_compat, "Use c = 3e8, pi = 3.14 and the rounded orbit period");
  app.add_option("--threads", threads, "Worker threads for kernels and sweep trials")
      ->check(CLI::PositiveNumber);
  app.add_flag("--print-config", print_only, "Print the resolved configuration and exit");

  auto* estimate = app.add_subcommand("estimate", "Single MUSIC estimate: spectrum.csv, detection.json");
  auto* sweep = app.add_subcommand("sweep", "Run a named parameter sweep");
  std::string scenario;
  sweep->add_option("name", scenario, "Scenario name")
      ->required()
      ->check(CLI::IsMember({"beamwidth", "aoa_count", "elements", "spacing", "frequency", "power",
                             "snr", "timing"}));
  auto* orbit = app.add_subcommand("orbit", "Orbit kinematics and per-degree time budget");
  std::optional<double> altitude_km;
  std::optional<double> period_min;
  orbit->add_option("altitude_km", altitude_km, "Orbit altitude in km (default 830)");
  orbit->add_option("period_min", period_min, "Orbital period in minutes (default 101)");
  auto* bench = app.add_subcommand("bench", "Time the canonical pipeline against the orbit deadline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  CliOverrides cli;
  cli.seed = seed;
  cli.out_dir = out_dir;
  cli.paper_compat = paper_compat;
  cli.threads = threads;
  cli.orbit_altitude_km = altitude_km;
  cli.orbit_period_min = period_min;

  std::string command = "bench";
  if (estimate->parsed()) command = "estimate";
  if (sweep->parsed()) command = "sweep";
  if (orbit->parsed()) command = "orbit";
  (void)bench;

  try {
    return run(command, scenario, config_path, cli, print_only);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
