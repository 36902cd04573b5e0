#include "islmusic/cli_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "islmusic/errors.hpp"
#include "islmusic/format.hpp"

namespace islmusic {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kTopLevelKeys{
    "element_count", "spacing_wavelengths", "frequency_hz", "n_snapshots", "grid",
    "noise",         "sources",             "tolerance_deg", "constants",  "seed",
    "trials",        "threads",             "out",           "sweep_values", "orbit",
    "bench_trials"};
const std::set<std::string> kGridKeys{"start_deg", "end_deg", "step_deg"};
const std::set<std::string> kNoiseKeys{"snr_db", "noise_amplitude"};
const std::set<std::string> kSourceKeys{"azimuth_deg", "power_w"};
const std::set<std::string> kRandomKeys{"count", "min_azimuth_deg", "max_azimuth_deg", "power_w"};
const std::set<std::string> kOrbitKeys{"altitude_km", "period_min", "earth_radius_km"};

std::size_t line_of(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos; ++i) line += text[i] == '\n';
  return line;
}

[[noreturn]] void fail(const ConfigDocument& doc, const std::string& key, const std::string& msg) {
  const std::size_t line = line_of(doc.text, key);
  std::string where = doc.origin;
  if (line > 0) where += ":" + std::to_string(line);
  throw ConfigError(where + ": '" + key + "': " + msg);
}

void check_keys(const ConfigDocument& doc, const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
  if (!obj.is_object()) fail(doc, context, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      std::string valid;
      for (const auto& k : allowed) valid += (valid.empty() ? "" : ", ") + k;
      fail(doc, key, "unknown key in " + context + " (valid: " + valid + ")");
    }
  }
}

void check_schema(const ConfigDocument& doc) {
  const json& v = doc.values;
  check_keys(doc, v, kTopLevelKeys, "config");
  if (v.contains("grid")) check_keys(doc, v["grid"], kGridKeys, "grid");
  if (v.contains("noise")) check_keys(doc, v["noise"], kNoiseKeys, "noise");
  if (v.contains("orbit")) check_keys(doc, v["orbit"], kOrbitKeys, "orbit");
  if (v.contains("sources")) {
    const json& s = v["sources"];
    if (s.is_array()) {
      for (const auto& item : s) check_keys(doc, item, kSourceKeys, "sources");
    } else if (s.is_object()) {
      check_keys(doc, s, {"random"}, "sources");
      check_keys(doc, s["random"], kRandomKeys, "random");
    } else {
      fail(doc, "sources", "expected an array of sources or {\"random\": {...}}");
    }
  }
}

double number(const ConfigDocument& doc, const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number()) fail(doc, key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(doc, key, "expected a finite number");
  return d;
}

std::uint64_t unsigned_integer(const ConfigDocument& doc, const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    fail(doc, key, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

SweepValue sweep_value(const ConfigDocument& doc, const json& v) {
  if (v.is_number()) return {v.get<double>(), std::nullopt};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  fail(doc, "sweep_values", "entries must be numbers or [low, high] pairs");
}

}  // namespace

ConfigDocument parse_config(const std::string& text, const std::string& origin) {
  ConfigDocument doc;
  doc.text = text;
  doc.origin = origin;
  try {
    doc.values = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": malformed JSON: " + e.what());
  }
  if (doc.values.is_object() && doc.values.value("tool", "") == kToolName &&
      doc.values.contains("config")) {
    doc.values = json(doc.values["config"]);
  }
  if (!doc.values.is_object()) throw ConfigError(origin + ": top level must be a JSON object");
  check_schema(doc);
  return doc;
}

ConfigDocument load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

OrbitSpec RunConfig::orbit() const {
  OrbitSpec spec;
  spec.altitude_km = orbit_altitude_km;
  spec.period_s = orbit_period_min * 60.0;
  spec.earth_radius_km = earth_radius_km;
  spec.mode = base.constants;
  return spec;
}

RunConfig resolve_config(const ConfigDocument& doc, RunConfig c, const CliOverrides& cli) {
  const json& v = doc.values;
  TrialSpec& b = c.base;
  try {
    if (v.contains("element_count")) b.element_count = unsigned_integer(doc, v, "element_count");
    if (v.contains("spacing_wavelengths"))
      b.spacing_wavelengths = number(doc, v, "spacing_wavelengths");
    if (v.contains("frequency_hz")) b.frequency_hz = number(doc, v, "frequency_hz");
    if (v.contains("n_snapshots")) b.n_snapshots = unsigned_integer(doc, v, "n_snapshots");
    if (v.contains("tolerance_deg")) b.tolerance_deg = number(doc, v, "tolerance_deg");
    if (v.contains("constants")) {
      if (!v["constants"].is_string()) fail(doc, "constants", "expected a string");
      b.constants = constants_mode_from_string(v["constants"].get<std::string>());
    }
    if (v.contains("grid")) {
      const json& g = v["grid"];
      const double start = g.contains("start_deg") ? number(doc, g, "start_deg") : b.grid.start_deg();
      const double end = g.contains("end_deg") ? number(doc, g, "end_deg") : b.grid.end_deg();
      const double step = g.contains("step_deg") ? number(doc, g, "step_deg") : b.grid.step_deg();
      try {
        b.grid = AzimuthGrid(start, end, step);
      } catch (const ConfigError& e) {
        fail(doc, "grid", e.what());
      }
    }
    if (v.contains("noise")) {
      const json& n = v["noise"];
      if (n.size() != 1) fail(doc, "noise", "give exactly one of snr_db or noise_amplitude");
      try {
        b.noise = n.contains("snr_db") ? NoiseSpec::snr(number(doc, n, "snr_db"))
                                       : NoiseSpec::amplitude(number(doc, n, "noise_amplitude"));
      } catch (const ConfigError& e) {
        fail(doc, "noise", e.what());
      }
    }
    if (v.contains("sources")) {
      const json& s = v["sources"];
      if (s.is_array()) {
        std::vector<Source> sources;
        for (const auto& item : s) {
          if (!item.contains("azimuth_deg")) fail(doc, "sources", "each source needs azimuth_deg");
          Source src;
          src.azimuth_deg = number(doc, item, "azimuth_deg");
          if (item.contains("power_w")) src.power_w = number(doc, item, "power_w");
          sources.push_back(src);
        }
        b.sources = std::move(sources);
      } else {
        const json& r = s["random"];
        RandomSources plan;
        if (r.contains("count")) plan.count = unsigned_integer(doc, r, "count");
        if (r.contains("min_azimuth_deg")) plan.min_azimuth_deg = number(doc, r, "min_azimuth_deg");
        if (r.contains("max_azimuth_deg")) plan.max_azimuth_deg = number(doc, r, "max_azimuth_deg");
        if (r.contains("power_w")) plan.power_w = number(doc, r, "power_w");
        b.sources = plan;
      }
    }
    if (v.contains("seed")) {
      c.seed = unsigned_integer(doc, v, "seed");
      c.seed_source = "config";
    }
    if (v.contains("trials")) {
      c.trials = unsigned_integer(doc, v, "trials");
      if (*c.trials < 1) fail(doc, "trials", "must be >= 1");
    }
    if (v.contains("threads")) {
      c.threads = static_cast<int>(unsigned_integer(doc, v, "threads"));
      if (c.threads < 1) fail(doc, "threads", "must be >= 1");
    }
    if (v.contains("out")) {
      if (!v["out"].is_string()) fail(doc, "out", "expected a string");
      c.out_dir = v["out"].get<std::string>();
    }
    if (v.contains("sweep_values")) {
      const json& sv = v["sweep_values"];
      if (!sv.is_array() || sv.empty()) fail(doc, "sweep_values", "expected a non-empty array");
      std::vector<SweepValue> values;
      for (const auto& item : sv) values.push_back(sweep_value(doc, item));
      c.sweep_values = std::move(values);
    }
    if (v.contains("orbit")) {
      const json& o = v["orbit"];
      if (o.contains("altitude_km")) c.orbit_altitude_km = number(doc, o, "altitude_km");
      if (o.contains("period_min")) c.orbit_period_min = number(doc, o, "period_min");
      if (o.contains("earth_radius_km")) c.earth_radius_km = number(doc, o, "earth_radius_km");
    }
    if (v.contains("bench_trials")) {
      c.bench_trials = unsigned_integer(doc, v, "bench_trials");
      if (c.bench_trials < 1) fail(doc, "bench_trials", "must be >= 1");
    }
  } catch (const json::exception& e) {
    throw ConfigError(doc.origin + ": " + e.what());
  }

  if (cli.seed) {
    c.seed = *cli.seed;
    c.seed_source = "cli";
  }
  if (cli.out_dir) c.out_dir = *cli.out_dir;
  if (cli.paper_compat) b.constants = ConstantsMode::paper_compat;
  if (cli.threads) {
    if (*cli.threads < 1) throw ConfigError("--threads must be >= 1");
    c.threads = *cli.threads;
  }
  if (cli.orbit_altitude_km) c.orbit_altitude_km = *cli.orbit_altitude_km;
  if (cli.orbit_period_min) c.orbit_period_min = *cli.orbit_period_min;
  return c;
}

void ensure_seed(RunConfig& config) {
  if (config.seed) return;
  std::random_device rd;
  config.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  config.seed_source = "entropy";
}

nlohmann::json config_to_json(const RunConfig& c) {
  const TrialSpec& b = c.base;
  json j;
  j["element_count"] = b.element_count;
  j["spacing_wavelengths"] = b.spacing_wavelengths;
  j["frequency_hz"] = b.frequency_hz;
  j["n_snapshots"] = b.n_snapshots;
  j["grid"] = {{"start_deg", b.grid.start_deg()},
               {"end_deg", b.grid.end_deg()},
               {"step_deg", b.grid.step_deg()}};
  if (b.noise.mode() == NoiseSpec::Mode::snr_db) {
    j["noise"] = {{"snr_db", b.noise.value()}};
  } else {
    j["noise"] = {{"noise_amplitude", b.noise.value()}};
  }
  if (const auto* fixed = std::get_if<std::vector<Source>>(&b.sources)) {
    j["sources"] = json::array();
    for (const auto& s : *fixed) {
      j["sources"].push_back({{"azimuth_deg", s.azimuth_deg}, {"power_w", s.power_w}});
    }
  } else {
    const auto& r = std::get<RandomSources>(b.sources);
    j["sources"] = {{"random",
                     {{"count", r.count},
                      {"min_azimuth_deg", r.min_azimuth_deg},
                      {"max_azimuth_deg", r.max_azimuth_deg},
                      {"power_w", r.power_w}}}};
  }
  j["tolerance_deg"] = b.tolerance_deg;
  j["constants"] = to_string(b.constants);
  if (c.seed) j["seed"] = *c.seed;
  if (c.trials) j["trials"] = *c.trials;
  j["threads"] = c.threads;
  j["out"] = c.out_dir;
  if (c.sweep_values) {
    j["sweep_values"] = json::array();
    for (const auto& sv : *c.sweep_values) {
      if (sv.upper) {
        j["sweep_values"].push_back({sv.value, *sv.upper});
      } else {
        j["sweep_values"].push_back(sv.value);
      }
    }
  }
  j["orbit"] = {{"altitude_km", c.orbit_altitude_km},
                {"period_min", c.orbit_period_min},
                {"earth_radius_km", c.earth_radius_km}};
  j["bench_trials"] = c.bench_trials;
  return j;
}

namespace {

json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

}  // namespace

nlohmann::json to_json(const DetectionResult& d) {
  json j;
  j["requested"] = d.requested;
  j["detected_count"] = d.azimuths_deg.size();
  j["incomplete"] = d.incomplete;
  j["detected_azimuths_deg"] = d.azimuths_deg;
  j["peak_db"] = d.peak_db;
  j["truth_deg"] = d.truth_deg ? json(*d.truth_deg) : json(nullptr);
  j["accuracy"] = optional_number(d.accuracy);
  j["min_sensitivity_db"] = optional_number(d.min_sensitivity_db);
  return j;
}

nlohmann::json to_json(const OrbitMetrics& m) {
  return {{"constants", to_string(m.mode)},
          {"orbit_radius_km", m.orbit_radius_km},
          {"circumference_km", m.circumference_km},
          {"period_s", m.period_s},
          {"speed_mps", m.speed_mps},
          {"speed_kmh", m.speed_kmh},
          {"distance_per_degree_km", m.distance_per_degree_km},
          {"time_per_degree_s", m.time_per_degree_s}};
}

nlohmann::json to_json(const FeasibilityVerdict& v) {
  return {{"verdict", v.pass ? "PASS" : "FAIL"},
          {"compute_time_s", v.compute_time_s},
          {"deadline_s", v.deadline_s},
          {"margin_s", v.margin_s}};
}

nlohmann::json to_json(const ComputeTimeSummary& s) {
  json axes = json::array();
  for (const auto& a : s.axes) {
    axes.push_back({{"name", a.name}, {"max_s", a.max_s}, {"mean_s", a.mean_s}, {"points", a.points}});
  }
  return {{"axes", axes}, {"max_s", s.max_s}, {"mean_s", s.mean_s}, {"feasibility", to_json(s.verdict)}};
}

std::string sha256_hex(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ArgumentError("cannot read " + file.string() + " for digest");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 initialisation failed");
  }
  std::array<char, 1 << 15> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw ArgumentError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

namespace {

struct Manifest {
  std::string command;
  std::string scenario;
  json config;
  json resolved;
  std::uint64_t seed = 0;
  std::string seed_source;
  ConstantsMode constants = ConstantsMode::exact;
  std::string started;
  std::vector<fs::path> outputs;
  json summary = nullptr;
};

// The document needed to repeat the run: the user's document plus the CLI
// overrides and the seed that was actually used.
json rerun_config(const ConfigDocument& doc, const RunConfig& resolved) {
  json j = doc.values;
  j["seed"] = *resolved.seed;
  j["constants"] = to_string(resolved.base.constants);
  j["threads"] = resolved.threads;
  j["out"] = resolved.out_dir;
  return j;
}

void write_manifest(const fs::path& dir, const Manifest& m) {
  json files = json::array();
  for (const auto& p : m.outputs) {
    files.push_back({{"file", p.filename().string()},
                     {"bytes", fs::file_size(p)},
                     {"sha256", sha256_hex(p)}});
  }
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = m.command;
  if (!m.scenario.empty()) j["scenario"] = m.scenario;
  j["seed"] = m.seed;
  j["seed_source"] = m.seed_source;
  j["constants"] = to_string(m.constants);
  j["projection_floor"] = kProjectionFloor;
  j["started_at"] = m.started;
  j["finished_at"] = utc_timestamp();
  j["config"] = m.config;
  if (!m.resolved.is_null()) j["resolved_config"] = m.resolved;
  if (!m.summary.is_null()) j["summary"] = m.summary;
  j["outputs"] = files;
  write_file_atomic(dir / "manifest.json", j.dump(2) + "\n");
}

fs::path prepare_out_dir(const RunConfig& c) {
  fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

fs::path write_output(const fs::path& dir, const std::string& name, const std::string& contents) {
  const fs::path p = dir / name;
  write_file_atomic(p, contents);
  return p;
}

ScenarioConfig scenario_from(const std::string& name, const RunConfig& c) {
  ScenarioConfig sc = default_scenario(name);
  sc.base = c.base;
  if (c.sweep_values) sc.values = *c.sweep_values;
  if (c.trials) sc.trials = *c.trials;
  sc.seed = *c.seed;
  sc.threads = c.threads;
  return sc;
}

RunConfig defaults_from(const ScenarioConfig& sc) {
  RunConfig c;
  c.base = sc.base;
  c.trials = sc.trials;
  return c;
}

}  // namespace

RunConfig estimate_defaults() { return RunConfig{}; }

RunConfig scenario_defaults(const std::string& scenario) {
  if (scenario == "timing") {
    RunConfig c;
    c.trials = timing_scenarios().front().trials;
    return c;
  }
  return defaults_from(default_scenario(scenario));
}

int cmd_estimate(const ConfigDocument& doc, const CliOverrides& cli) {
  RunConfig c = resolve_config(doc, estimate_defaults(), cli);
  ensure_seed(c);
  c.base.kernel_threads = c.threads;
  validate(c.base);

  Manifest m;
  m.command = "estimate";
  m.started = utc_timestamp();
  const PipelineResult result = run_pipeline(c.base, *c.seed);
  const fs::path dir = prepare_out_dir(c);

  std::ostringstream csv;
  write_spectrum_csv(csv, result.spectrum);
  json det = to_json(result.detection);
  det["seed"] = *c.seed;
  det["constants"] = to_string(c.base.constants);
  det["projection_floor"] = kProjectionFloor;
  det["noise_power"] = result.sources.empty()
                           ? 0.0
                           : c.base.noise.noise_power(result.sources);
  json srcs = json::array();
  for (const auto& s : result.sources) srcs.push_back({{"azimuth_deg", s.azimuth_deg}, {"power_w", s.power_w}});
  det["sources"] = srcs;

  m.outputs.push_back(write_output(dir, "spectrum.csv", csv.str()));
  m.outputs.push_back(write_output(dir, "detection.json", det.dump(2) + "\n"));
  m.config = rerun_config(doc, c);
  m.resolved = config_to_json(c);
  m.seed = *c.seed;
  m.seed_source = c.seed_source;
  m.constants = c.base.constants;
  write_manifest(dir, m);

  std::cout << "detected " << result.detection.azimuths_deg.size() << "/" << result.detection.requested
            << " azimuths";
  if (result.detection.accuracy) std::cout << ", accuracy " << format_double(*result.detection.accuracy);
  std::cout << "\nwrote " << (dir / "spectrum.csv").string() << ", " << (dir / "detection.json").string()
            << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& scenario, const ConfigDocument& doc, const CliOverrides& cli) {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), scenario) == names.end()) {
    (void)default_scenario(scenario);  // throws ConfigError listing valid names
  }

  Manifest m;
  m.command = "sweep";
  m.scenario = scenario;
  m.started = utc_timestamp();

  std::vector<SweepResult> results;
  RunConfig first;
  if (scenario == "timing") {
    if (doc.values.contains("sweep_values")) {
      throw ConfigError(doc.origin + ":" + std::to_string(line_of(doc.text, "sweep_values")) +
                        ": 'sweep_values': not supported for the timing scenario (it spans four axes)");
    }
    std::optional<std::uint64_t> seed;
    for (const auto& base : timing_scenarios()) {
      RunConfig c = resolve_config(doc, defaults_from(base), cli);
      if (!seed) {
        ensure_seed(c);
        seed = c.seed;
        first = c;
      } else {
        c.seed = seed;
      }
      ScenarioConfig sc = scenario_from(base.name.substr(std::string("timing_").size()), c);
      sc.name = base.name;
      results.push_back(run_sweep(sc));
    }
  } else {
    RunConfig c = resolve_config(doc, scenario_defaults(scenario), cli);
    ensure_seed(c);
    first = c;
    results.push_back(run_sweep(scenario_from(scenario, c)));
  }

  const fs::path dir = prepare_out_dir(first);
  std::ostringstream csv;
  write_sweep_csv(csv, results);
  m.outputs.push_back(write_output(dir, "sweep_" + scenario + ".csv", csv.str()));

  if (scenario == "timing") {
    const ComputeTimeSummary summary = timing_report(results, orbit_metrics(first.orbit()));
    json report = to_json(summary);
    report["orbit"] = to_json(orbit_metrics(first.orbit()));
    m.outputs.push_back(write_output(dir, "timing_report.json", report.dump(2) + "\n"));
    m.summary = report;
    std::cout << "max pipeline time " << format_double(summary.max_s) << " s vs "
              << format_double(summary.verdict.deadline_s) << " s per orbit degree: "
              << (summary.verdict.pass ? "PASS" : "FAIL") << "\n";
  } else if (scenario == "beamwidth") {
    const auto res = angular_resolution(results.front());
    m.summary = {{"angular_resolution_deg", res ? json(*res) : json(nullptr)}};
    std::cout << "angular resolution: " << (res ? format_double(*res) + " deg" : "not reached") << "\n";
  }

  m.config = rerun_config(doc, first);
  if (scenario != "timing") m.resolved = config_to_json(first);
  m.seed = *first.seed;
  m.seed_source = first.seed_source;
  m.constants = first.base.constants;
  write_manifest(dir, m);
  std::cout << "wrote " << m.outputs.front().string() << "\n";
  return kExitOk;
}

int cmd_orbit(const ConfigDocument& doc, const CliOverrides& cli) {
  RunConfig c = resolve_config(doc, estimate_defaults(), cli);
  const OrbitMetrics metrics = orbit_metrics(c.orbit());
  json report = to_json(metrics);
  report["altitude_km"] = c.orbit_altitude_km;
  report["period_min"] = c.orbit_period_min;
  report["earth_radius_km"] = c.earth_radius_km;

  const fs::path dir = prepare_out_dir(c);
  Manifest m;
  m.command = "orbit";
  m.started = utc_timestamp();
  m.outputs.push_back(write_output(dir, "orbit.json", report.dump(2) + "\n"));
  ensure_seed(c);
  m.config = rerun_config(doc, c);
  m.config["orbit"] = {{"altitude_km", c.orbit_altitude_km},
                       {"period_min", c.orbit_period_min},
                       {"earth_radius_km", c.earth_radius_km}};
  m.seed = *c.seed;
  m.seed_source = c.seed_source;
  m.constants = c.base.constants;
  write_manifest(dir, m);
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_bench(const ConfigDocument& doc, const CliOverrides& cli) {
  RunConfig c = resolve_config(doc, estimate_defaults(), cli);
  ensure_seed(c);
  c.base.kernel_threads = 1;
  validate(c.base);
  const OrbitMetrics orbit = orbit_metrics(c.orbit());

  Manifest m;
  m.command = "bench";
  m.started = utc_timestamp();

  SweepResult sweep;
  sweep.name = "bench";
  sweep.seed = *c.seed;
  sweep.constants = c.base.constants;
  sweep.n_snapshots = c.base.n_snapshots;
  SweepRecord rec;
  rec.trials = c.bench_trials;
  std::vector<double> times;
  for (std::size_t t = 0; t < c.bench_trials; ++t) {
    const TrialOutcome o = run_trial(c.base, trial_seed(*c.seed, 0, t));
    times.push_back(o.elapsed_s);
    rec.mean_accuracy += o.detection.accuracy.value_or(0.0);
    rec.mean_time_s += o.elapsed_s;
    rec.max_time_s = std::max(rec.max_time_s, o.elapsed_s);
  }
  rec.mean_accuracy /= static_cast<double>(c.bench_trials);
  rec.mean_time_s /= static_cast<double>(c.bench_trials);
  sweep.records.push_back(rec);

  const ComputeTimeSummary summary = timing_report(std::span<const SweepResult>(&sweep, 1), orbit);
  json report = to_json(summary);
  report["trials"] = c.bench_trials;
  report["trial_times_s"] = times;
  report["mean_accuracy"] = rec.mean_accuracy;
  report["orbit"] = to_json(orbit);

  const fs::path dir = prepare_out_dir(c);
  m.outputs.push_back(write_output(dir, "bench.json", report.dump(2) + "\n"));
  m.config = rerun_config(doc, c);
  m.resolved = config_to_json(c);
  m.summary = to_json(summary.verdict);
  m.seed = *c.seed;
  m.seed_source = c.seed_source;
  m.constants = c.base.constants;
  write_manifest(dir, m);

  std::cout << "pipeline time over " << c.bench_trials << " trials: mean "
            << format_double(summary.mean_s) << " s, max " << format_double(summary.max_s)
            << " s; deadline " << format_double(summary.verdict.deadline_s) << " s per degree -> "
            << (summary.verdict.pass ? "PASS" : "FAIL") << " (margin "
            << format_double(summary.verdict.margin_s) << " s)\n";
  return kExitOk;
}

nlohmann::json print_config(const std::string& command, const std::string& scenario,
                            const ConfigDocument& doc, const CliOverrides& cli) {
  if (command == "sweep") {
    if (scenario == "timing") {
      json all = json::array();
      for (const auto& base : timing_scenarios()) {
        RunConfig c = resolve_config(doc, defaults_from(base), cli);
        json j = config_to_json(c);
        j.erase("sweep_values");
        all.push_back({{"scenario", base.name}, {"config", j}, {"sweep_values_default", json::array()}});
        for (const auto& v : base.values) all.back()["sweep_values_default"].push_back(v.label());
      }
      return all;
    }
    RunConfig c = resolve_config(doc, scenario_defaults(scenario), cli);
    if (!c.sweep_values) c.sweep_values = default_scenario(scenario).values;
    return config_to_json(c);
  }
  return config_to_json(resolve_config(doc, estimate_defaults(), cli));
}

}  // namespace islmusic
