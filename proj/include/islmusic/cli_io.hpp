#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "islmusic/orbit.hpp"
#include "islmusic/scenarios.hpp"

namespace islmusic {

inline constexpr const char* kToolName = "islmusic";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitNumerical = 3 };

// A parsed configuration document. Keys are checked against the schema on
// load; values are applied on top of command defaults by resolve_config.
struct ConfigDocument {
  nlohmann::json values = nlohmann::json::object();
  std::string text;    // raw text, used to address diagnostics by line
  std::string origin;  // file name for diagnostics
};

// Parses JSON text. A run manifest is accepted too: its "config" member is
// used, so any run can be repeated from its manifest. Throws ConfigError with
// "origin:line: message" on malformed JSON, unknown keys or wrong types.
ConfigDocument parse_config(const std::string& text, const std::string& origin = "config");
ConfigDocument load_config_file(const std::filesystem::path& path);

// Command-line flags that override document fields.
struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool paper_compat = false;
  std::optional<int> threads;
  std::optional<double> orbit_altitude_km;  // `orbit <altitude_km> <period_min>`
  std::optional<double> orbit_period_min;
};

struct RunConfig {
  TrialSpec base;
  std::optional<std::vector<SweepValue>> sweep_values;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  int threads = 1;
  double orbit_altitude_km = 830.0;
  double orbit_period_min = 101.0;
  double earth_radius_km = kEarthRadiusKm;
  std::size_t bench_trials = 20;
  std::string seed_source = "default";  // config | cli | entropy | default

  OrbitSpec orbit() const;
};

// Applies the document, then the CLI flags, over `defaults`. Errors carry the
// line of the offending key. The seed stays empty when neither sets it;
// commands then draw one with ensure_seed.
RunConfig resolve_config(const ConfigDocument& doc, RunConfig defaults,
                         const CliOverrides& cli = {});

// Fills an empty seed from system entropy and records seed_source = "entropy".
void ensure_seed(RunConfig& config);

// Full config in document form; parse_config(to_json(c)) resolves back to c.
nlohmann::json config_to_json(const RunConfig& config);

nlohmann::json to_json(const DetectionResult& detection);
nlohmann::json to_json(const OrbitMetrics& metrics);
nlohmann::json to_json(const FeasibilityVerdict& verdict);
nlohmann::json to_json(const ComputeTimeSummary& summary);

std::string sha256_hex(const std::filesystem::path& file);

// Writes via a temporary file in the same directory and renames into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string utc_timestamp();

// Each command resolves its own defaults, writes its outputs plus
// manifest.json into the output directory and returns an exit code.
// Config errors propagate as ConfigError; numerical failures as NumericalError.
int cmd_estimate(const ConfigDocument& doc, const CliOverrides& cli);
int cmd_sweep(const std::string& scenario, const ConfigDocument& doc, const CliOverrides& cli);
int cmd_orbit(const ConfigDocument& doc, const CliOverrides& cli);
int cmd_bench(const ConfigDocument& doc, const CliOverrides& cli);

// The fully resolved configuration a command would run with, for --print-config.
nlohmann::json print_config(const std::string& command, const std::string& scenario,
                            const ConfigDocument& doc, const CliOverrides& cli);

// Defaults used by each command before the config document is applied.
RunConfig estimate_defaults();
RunConfig scenario_defaults(const std::string& scenario);

}  // namespace islmusic
