#include "islmusic/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <random>

#include "islmusic/errors.hpp"
#include "islmusic/format.hpp"
#include "islmusic/subspace.hpp"

namespace islmusic {

std::vector<Source> canonical_sources() {
  std::vector<Source> sources;
  for (int az = 60; az < 80; ++az) sources.push_back({static_cast<double>(az), 1.0});
  return sources;
}

CarrierSpec TrialSpec::carrier() const { return CarrierSpec::with_mode(frequency_hz, constants); }

ArrayGeometry TrialSpec::geometry() const {
  return ula_positions(element_count, spacing_wavelengths * carrier().wavelength_m());
}

std::size_t TrialSpec::source_count() const {
  if (const auto* fixed = std::get_if<std::vector<Source>>(&sources)) return fixed->size();
  return std::get<RandomSources>(sources).count;
}

void validate(const TrialSpec& spec) {
  if (spec.n_snapshots < 1) throw ConfigError("n_snapshots must be >= 1");
  if (!(spec.tolerance_deg >= 0.0)) throw ConfigError("tolerance_deg must be >= 0");
  if (!std::isfinite(spec.spacing_wavelengths) || spec.spacing_wavelengths <= 0.0) {
    throw ConfigError("spacing_wavelengths must be positive");
  }
  (void)spec.geometry();  // checks element count, frequency
  if (const auto* fixed = std::get_if<std::vector<Source>>(&spec.sources)) {
    validate_sources(*fixed, spec.element_count);
    return;
  }
  const auto& plan = std::get<RandomSources>(spec.sources);
  if (plan.count < 1 || plan.count >= spec.element_count) {
    throw ConfigError("random source count m=" + std::to_string(plan.count) +
                      " must satisfy 1 <= m < M=" + std::to_string(spec.element_count));
  }
  if (!(plan.min_azimuth_deg >= 0.0) || !(plan.max_azimuth_deg <= 180.0) ||
      plan.min_azimuth_deg > plan.max_azimuth_deg) {
    throw ConfigError("random source azimuth range must lie within [0, 180]");
  }
  if (plan.count > 1 && !(plan.min_azimuth_deg < plan.max_azimuth_deg)) {
    throw ConfigError("random source range is empty but several sources were requested");
  }
  if (!std::isfinite(plan.power_w) || plan.power_w <= 0.0) {
    throw ConfigError("random source power must be positive");
  }
}

std::vector<Source> realize_sources(const TrialSpec& spec, std::uint64_t trial_seed) {
  if (const auto* fixed = std::get_if<std::vector<Source>>(&spec.sources)) return *fixed;
  const auto& plan = std::get<RandomSources>(spec.sources);
  std::mt19937_64 rng(derive_seed(trial_seed, 0x5a5a));
  std::uniform_real_distribution<double> pick(plan.min_azimuth_deg, plan.max_azimuth_deg);
  std::vector<Source> sources;
  while (sources.size() < plan.count) {
    const double az = pick(rng);
    const bool taken = std::any_of(sources.begin(), sources.end(),
                                   [&](const Source& s) { return s.azimuth_deg == az; });
    if (!taken) sources.push_back({az, plan.power_w});
  }
  return sources;
}

namespace {

std::vector<double> azimuths_of(const std::vector<Source>& sources) {
  std::vector<double> az;
  az.reserve(sources.size());
  for (const auto& s : sources) az.push_back(s.azimuth_deg);
  return az;
}

struct Executed {
  Pseudospectrum spectrum;
  DetectionResult detection;
  double elapsed_s = 0.0;
};

Executed execute(const TrialSpec& spec, const std::vector<Source>& sources,
                 std::uint64_t seed) {
  const CarrierSpec carrier = spec.carrier();
  const ArrayGeometry geometry = spec.geometry();

  const auto start = std::chrono::steady_clock::now();
  const SnapshotMatrix x =
      synthesize(geometry, carrier, sources, spec.n_snapshots, spec.noise, seed);
  const CovarianceMatrix r = sample_covariance(x, spec.kernel_threads);
  const EigenDecomposition eig = eig_hermitian(r);
  const SubspaceSplit split = split_subspaces(eig, sources.size());
  Executed out;
  out.spectrum = music_spectrum(split, geometry, carrier, spec.grid, spec.kernel_threads);
  out.detection = detect_peaks(out.spectrum, sources.size());
  const auto stop = std::chrono::steady_clock::now();

  out.elapsed_s = std::chrono::duration<double>(stop - start).count();
  score_detection(out.detection, azimuths_of(sources), spec.tolerance_deg);
  return out;
}

}  // namespace

PipelineResult run_pipeline(const TrialSpec& spec, std::uint64_t trial_seed) {
  validate(spec);
  PipelineResult out;
  out.sources = realize_sources(spec, trial_seed);
  auto executed = execute(spec, out.sources, trial_seed);
  out.spectrum = std::move(executed.spectrum);
  out.detection = std::move(executed.detection);
  return out;
}

TrialOutcome run_trial(const TrialSpec& spec, std::uint64_t trial_seed) {
  validate(spec);
  const auto sources = realize_sources(spec, trial_seed);
  auto executed = execute(spec, sources, trial_seed);
  return {std::move(executed.detection), executed.elapsed_s};
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::separation: return "separation_deg";
    case SweepAxis::aoa_count: return "aoa_count";
    case SweepAxis::elements: return "elements";
    case SweepAxis::spacing: return "spacing_wavelengths";
    case SweepAxis::frequency: return "frequency_hz";
    case SweepAxis::power: return "power_w";
    case SweepAxis::snr: return "snr_db";
  }
  return "unknown";
}

std::string SweepValue::label() const {
  if (upper) return format_double(value) + ".." + format_double(*upper);
  return format_double(value);
}

namespace {

double base_power(const TrialSpec& base) {
  if (const auto* fixed = std::get_if<std::vector<Source>>(&base.sources)) {
    return fixed->empty() ? 1.0 : fixed->front().power_w;
  }
  return std::get<RandomSources>(base.sources).power_w;
}

double anchor_azimuth(const TrialSpec& base) {
  if (const auto* fixed = std::get_if<std::vector<Source>>(&base.sources)) {
    if (!fixed->empty()) return fixed->front().azimuth_deg;
  }
  return 60.0;
}

std::size_t as_count(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0 || v != std::floor(v)) {
    throw ConfigError(std::string(what) + " must be a non-negative integer, got " +
                      format_double(v));
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

TrialSpec apply_point(const TrialSpec& base, SweepAxis axis, const SweepValue& value) {
  TrialSpec spec = base;
  const double v = value.value;
  switch (axis) {
    case SweepAxis::separation: {
      const double anchor = anchor_azimuth(base);
      spec.sources = std::vector<Source>{{anchor, base_power(base)}, {anchor + v, base_power(base)}};
      break;
    }
    case SweepAxis::aoa_count: {
      const std::size_t k = as_count(v, "aoa_count");
      const double anchor = anchor_azimuth(base);
      std::vector<Source> sources;
      for (std::size_t i = 0; i < k; ++i) {
        sources.push_back({anchor + static_cast<double>(i), base_power(base)});
      }
      spec.sources = std::move(sources);
      break;
    }
    case SweepAxis::elements:
      spec.element_count = as_count(v, "element count");
      break;
    case SweepAxis::spacing:
      spec.spacing_wavelengths = v;
      break;
    case SweepAxis::frequency:
      spec.frequency_hz = v;
      break;
    case SweepAxis::power: {
      const double hi = value.upper.value_or(v);
      if (auto* fixed = std::get_if<std::vector<Source>>(&spec.sources)) {
        const std::size_t m = fixed->size();
        for (std::size_t k = 0; k < m; ++k) {
          const double t = m > 1 ? static_cast<double>(k) / static_cast<double>(m - 1) : 0.0;
          (*fixed)[k].power_w = v + (hi - v) * t;
        }
      } else {
        std::get<RandomSources>(spec.sources).power_w = v;
      }
      break;
    }
    case SweepAxis::snr:
      spec.noise = NoiseSpec::snr(v);
      break;
  }
  return spec;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t point, std::size_t trial) {
  return derive_seed(derive_seed(seed, point), trial);
}

SweepResult run_sweep(const ScenarioConfig& config) {
  if (config.trials < 1) throw ConfigError("trials must be >= 1");
  if (config.values.empty()) throw ConfigError("scenario '" + config.name + "' has no sweep values");

  std::vector<TrialSpec> points;
  for (const auto& value : config.values) {
    try {
      TrialSpec spec = apply_point(config.base, config.axis, value);
      if (config.threads > 1) spec.kernel_threads = 1;
      validate(spec);
      points.push_back(std::move(spec));
    } catch (const ConfigError& e) {
      throw ConfigError("scenario '" + config.name + "' point " + to_string(config.axis) + "=" +
                        value.label() + ": " + e.what());
    }
  }

  SweepResult result;
  result.name = config.name;
  result.axis = config.axis;
  result.seed = config.seed;
  result.constants = config.base.constants;
  result.n_snapshots = config.base.n_snapshots;

  const auto trials = static_cast<std::ptrdiff_t>(config.trials);
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<TrialOutcome> outcomes(config.trials);
    std::exception_ptr failure;
#pragma omp parallel for num_threads(config.threads) schedule(dynamic, 1) if (config.threads > 1)
    for (std::ptrdiff_t t = 0; t < trials; ++t) {
      try {
        outcomes[static_cast<std::size_t>(t)] =
            run_trial(points[p], trial_seed(config.seed, p, static_cast<std::size_t>(t)));
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    SweepRecord rec;
    rec.value = config.values[p];
    rec.trials = config.trials;
    double peak_sum = 0.0, sens_sum = 0.0;
    std::size_t peak_n = 0, sens_n = 0, full = 0;
    for (const auto& o : outcomes) {
      const double acc = o.detection.accuracy.value_or(0.0);
      rec.mean_accuracy += acc;
      if (acc == 1.0) ++full;
      const double peak = o.detection.mean_peak_db();
      if (std::isfinite(peak)) {
        peak_sum += peak;
        ++peak_n;
      }
      if (o.detection.min_sensitivity_db) {
        sens_sum += *o.detection.min_sensitivity_db;
        ++sens_n;
      }
      rec.mean_time_s += o.elapsed_s;
      rec.max_time_s = std::max(rec.max_time_s, o.elapsed_s);
    }
    const double n = static_cast<double>(outcomes.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.mean_accuracy /= n;
    rec.mean_time_s /= n;
    rec.full_match_rate = static_cast<double>(full) / n;
    rec.mean_peak_db = peak_n ? peak_sum / static_cast<double>(peak_n) : nan;
    rec.mean_min_sensitivity_db = sens_n ? sens_sum / static_cast<double>(sens_n) : nan;
    result.records.push_back(rec);
  }
  return result;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"beamwidth", "aoa_count", "elements", "spacing",
                                              "frequency", "power",     "snr",      "timing"};
  return names;
}

namespace {

std::vector<Source> three_sources() { return {{60.0, 1.0}, {70.0, 1.0}, {80.0, 1.0}}; }

std::vector<SweepValue> numeric_values(std::initializer_list<double> values) {
  std::vector<SweepValue> out;
  for (double v : values) out.push_back({v, std::nullopt});
  return out;
}

}  // namespace

ScenarioConfig default_scenario(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  if (name == "beamwidth") {
    c.axis = SweepAxis::separation;
    c.values = numeric_values({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  } else if (name == "aoa_count") {
    c.axis = SweepAxis::aoa_count;
    for (int k = 1; k <= 20; ++k) c.values.push_back({static_cast<double>(k), std::nullopt});
  } else if (name == "elements") {
    c.axis = SweepAxis::elements;
    c.base.sources = three_sources();
    for (int m = 9; m <= 105; m += 8) c.values.push_back({static_cast<double>(m), std::nullopt});
  } else if (name == "spacing") {
    c.axis = SweepAxis::spacing;
    c.base.sources = RandomSources{};
    c.values = numeric_values({0.25, 0.5, 1, 2, 3, 4, 5});
  } else if (name == "frequency") {
    c.axis = SweepAxis::frequency;
    c.values = numeric_values({23e9, 24.5e9, 32e9, 56e9});
  } else if (name == "power") {
    c.axis = SweepAxis::power;
    c.base.noise = NoiseSpec::amplitude(50.0);
    c.base.sources = three_sources();
    c.values = numeric_values({1, 0.1, 0.01, 0.001, 0.0001});
    c.values.push_back({0.1, 0.9});
    c.values.push_back({0.01, 0.09});
  } else if (name == "snr") {
    c.axis = SweepAxis::snr;
    // Ten sources 2 degrees apart: resolvable, but only once the weaker
    // signal-subspace eigenvalues clear the noise floor.
    std::vector<Source> sources;
    for (int k = 0; k < 10; ++k) sources.push_back({60.0 + 2.0 * k, 1.0});
    c.base.sources = std::move(sources);
    c.values = numeric_values({5, 10, 15, 20});
  } else {
    std::string valid;
    for (const auto& n : scenario_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("unknown scenario '" + name + "' (valid: " + valid + ")");
  }
  return c;
}

std::vector<ScenarioConfig> timing_scenarios() {
  std::vector<ScenarioConfig> out;
  for (const char* name : {"aoa_count", "elements", "spacing", "power"}) {
    ScenarioConfig c = default_scenario(name);
    c.name = std::string("timing_") + name;
    c.trials = 20;
    out.push_back(std::move(c));
  }
  return out;
}

std::optional<double> angular_resolution(const SweepResult& sweep, double threshold) {
  std::optional<double> best;
  for (const auto& rec : sweep.records) {
    if (rec.full_match_rate >= threshold && (!best || rec.value.value < *best)) {
      best = rec.value.value;
    }
  }
  return best;
}

ComputeTimeSummary timing_report(std::span<const SweepResult> sweeps, const OrbitMetrics& orbit) {
  ComputeTimeSummary summary;
  double weighted = 0.0;
  std::size_t total_points = 0;
  for (const auto& sweep : sweeps) {
    if (sweep.records.empty()) continue;
    ComputeTimeSummary::Axis axis;
    axis.name = sweep.name;
    for (const auto& rec : sweep.records) {
      axis.max_s = std::max(axis.max_s, rec.max_time_s);
      axis.mean_s += rec.mean_time_s;
    }
    axis.points = sweep.records.size();
    weighted += axis.mean_s;
    axis.mean_s /= static_cast<double>(axis.points);
    total_points += axis.points;
    summary.max_s = std::max(summary.max_s, axis.max_s);
    summary.axes.push_back(std::move(axis));
  }
  if (summary.axes.empty()) throw ArgumentError("timing report needs at least one timed sweep");
  summary.mean_s = weighted / static_cast<double>(total_points);
  summary.verdict = feasibility(summary.max_s, orbit);
  return summary;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepResult> sweeps) {
  out << "swept_param,value,mean_accuracy,mean_peak_db,mean_min_sensitivity_db,mean_time_s,"
         "trials,seed\n";
  for (const auto& sweep : sweeps) {
    for (const auto& rec : sweep.records) {
      out << to_string(sweep.axis) << ',' << rec.value.label() << ','
          << format_double(rec.mean_accuracy) << ',' << format_double(rec.mean_peak_db) << ','
          << format_double(rec.mean_min_sensitivity_db) << ',' << format_double(rec.mean_time_s)
          << ',' << rec.trials << ',' << sweep.seed << '\n';
    }
  }
}

}  // namespace islmusic
