#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "islmusic/array_model.hpp"
#include "islmusic/music.hpp"
#include "islmusic/orbit.hpp"
#include "islmusic/signal_synth.hpp"

namespace islmusic {

// Per-trial random source placement: `count` distinct azimuths drawn uniformly
// (continuous, not grid-aligned) from [min_azimuth_deg, max_azimuth_deg].
struct RandomSources {
  std::size_t count = 1;
  double min_azimuth_deg = 1.0;
  double max_azimuth_deg = 179.0;
  double power_w = 1.0;
};

using SourcePlan = std::variant<std::vector<Source>, RandomSources>;

// 20 unit-power sources at 60, 61, ..., 79 degrees.
std::vector<Source> canonical_sources();

// One fully specified point of a scenario.
struct TrialSpec {
  std::size_t element_count = 50;
  double spacing_wavelengths = 0.5;
  double frequency_hz = 32e9;
  std::size_t n_snapshots = 256;
  AzimuthGrid grid{};
  NoiseSpec noise = NoiseSpec::snr(20.0);
  SourcePlan sources = canonical_sources();
  double tolerance_deg = 0.5;
  ConstantsMode constants = ConstantsMode::exact;
  int kernel_threads = 1;

  CarrierSpec carrier() const;
  ArrayGeometry geometry() const;
  std::size_t source_count() const;
};

// Throws ConfigError if any upstream precondition would fail.
void validate(const TrialSpec& spec);

// Fixed sources as given; random sources drawn from a stream derived from trial_seed.
std::vector<Source> realize_sources(const TrialSpec& spec, std::uint64_t trial_seed);

struct PipelineResult {
  std::vector<Source> sources;
  Pseudospectrum spectrum;
  DetectionResult detection;
};

// synthesize -> covariance -> eigendecomposition -> spectrum -> peaks -> score.
PipelineResult run_pipeline(const TrialSpec& spec, std::uint64_t trial_seed);

struct TrialOutcome {
  DetectionResult detection;
  double elapsed_s = 0.0;  // synthesize through detect, wall clock
};

TrialOutcome run_trial(const TrialSpec& spec, std::uint64_t trial_seed);

enum class SweepAxis { separation, aoa_count, elements, spacing, frequency, power, snr };

const char* to_string(SweepAxis axis);

// A swept value; `upper` marks a power range (powers spread linearly across sources).
struct SweepValue {
  double value = 0.0;
  std::optional<double> upper;

  std::string label() const;
};

TrialSpec apply_point(const TrialSpec& base, SweepAxis axis, const SweepValue& value);

struct ScenarioConfig {
  std::string name;
  TrialSpec base;
  SweepAxis axis = SweepAxis::aoa_count;
  std::vector<SweepValue> values;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  int threads = 1;  // > 1 runs trials concurrently; timing then reflects contention
};

struct SweepRecord {
  SweepValue value;
  double mean_accuracy = 0.0;
  double mean_peak_db = 0.0;
  double mean_min_sensitivity_db = 0.0;
  double mean_time_s = 0.0;
  double max_time_s = 0.0;
  double full_match_rate = 0.0;  // fraction of trials with every source matched
  std::size_t trials = 0;
};

struct SweepResult {
  std::string name;
  SweepAxis axis = SweepAxis::aoa_count;
  std::uint64_t seed = 0;
  ConstantsMode constants = ConstantsMode::exact;
  std::size_t n_snapshots = 0;
  std::vector<SweepRecord> records;
};

// Trial t of point p uses seed derive_seed(derive_seed(seed, p), t).
std::uint64_t trial_seed(std::uint64_t seed, std::size_t point, std::size_t trial);

SweepResult run_sweep(const ScenarioConfig& config);

// Scenario names accepted by default_scenario: beamwidth, aoa_count, elements,
// spacing, frequency, power, snr. "timing" expands to timing_scenarios().
const std::vector<std::string>& scenario_names();
ScenarioConfig default_scenario(const std::string& name);
std::vector<ScenarioConfig> timing_scenarios();

// Smallest two-source separation whose full-match rate reaches `threshold`.
std::optional<double> angular_resolution(const SweepResult& sweep, double threshold = 0.95);

struct ComputeTimeSummary {
  struct Axis {
    std::string name;
    double max_s = 0.0;
    double mean_s = 0.0;
    std::size_t points = 0;
  };
  std::vector<Axis> axes;
  double max_s = 0.0;
  double mean_s = 0.0;
  FeasibilityVerdict verdict;
};

// Throws ArgumentError when there is no timing data.
ComputeTimeSummary timing_report(std::span<const SweepResult> sweeps, const OrbitMetrics& orbit);

// `swept_param,value,mean_accuracy,mean_peak_db,mean_min_sensitivity_db,mean_time_s,trials,seed`
void write_sweep_csv(std::ostream& out, std::span<const SweepResult> sweeps);

}  // namespace islmusic
