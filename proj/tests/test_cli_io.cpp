#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "islmusic/cli_io.hpp"
#include "islmusic/errors.hpp"

using namespace islmusic;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text) {
  try {
    resolve_config(parse_config(text, "cfg.json"), estimate_defaults());
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config documents resolve over defaults") {
  const ConfigDocument doc = parse_config(R"({
    "element_count": 20,
    "grid": {"step_deg": 0.5},
    "noise": {"noise_amplitude": 50},
    "sources": [{"azimuth_deg": 30}, {"azimuth_deg": 45, "power_w": 0.1}],
    "seed": 12,
    "orbit": {"altitude_km": 500}
  })");
  const RunConfig c = resolve_config(doc, estimate_defaults());
  CHECK(c.base.element_count == 20);
  CHECK(c.base.grid.size() == 361);
  CHECK(c.base.noise.mode() == NoiseSpec::Mode::noise_amplitude);
  const auto& src = std::get<std::vector<Source>>(c.base.sources);
  REQUIRE(src.size() == 2);
  CHECK(src[0].power_w == 1.0);
  CHECK(src[1].power_w == 0.1);
  CHECK(*c.seed == 12);
  CHECK(c.seed_source == "config");
  CHECK(c.orbit_altitude_km == 500.0);
  CHECK(c.orbit_period_min == 101.0);
}

TEST_CASE("cli overrides win over the document") {
  CliOverrides cli;
  cli.seed = 5;
  cli.paper_compat = true;
  cli.threads = 3;
  cli.out_dir = "elsewhere";
  const RunConfig c = resolve_config(parse_config(R"({"seed": 1, "threads": 2})"), estimate_defaults(), cli);
  CHECK(*c.seed == 5);
  CHECK(c.seed_source == "cli");
  CHECK(c.base.constants == ConstantsMode::paper_compat);
  CHECK(c.threads == 3);
  CHECK(c.out_dir == "elsewhere");
}

TEST_CASE("config errors carry the offending line") {
  CHECK(error_of("{\n  \"element_count\": 50,\n  \"colour\": 1\n}").find("cfg.json:3") == 0);
  CHECK(error_of("{\"grid\": {\"step\": 1}}").find("'step'") != std::string::npos);
  CHECK(error_of("{\n\"element_count\": -4}").find("cfg.json:2") == 0);
  CHECK(error_of("{\"element_count\": \"many\"}").find("element_count") != std::string::npos);
  CHECK(error_of("{\"noise\": {\"snr_db\": 1, \"noise_amplitude\": 2}}").find("noise") != std::string::npos);
  CHECK(error_of("{\"sources\": 3}").find("sources") != std::string::npos);
  CHECK(error_of("{\"constants\": \"fast\"}").find("constants") != std::string::npos);
  CHECK(error_of("{\"trials\": 0}").find("trials") != std::string::npos);
  CHECK(error_of("[1, 2]").find("object") != std::string::npos);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("resolved config round trips through its document form") {
  const RunConfig a = resolve_config(parse_config(R"({
    "sources": {"random": {"count": 3, "min_azimuth_deg": 10}},
    "sweep_values": [1, [0.1, 0.9]],
    "constants": "paper_compat",
    "trials": 7, "seed": 3
  })"), scenario_defaults("power"));
  const nlohmann::json j = config_to_json(a);
  const RunConfig b = resolve_config(parse_config(j.dump()), RunConfig{});
  CHECK(config_to_json(b) == j);
  CHECK(b.sweep_values->size() == 2);
  CHECK(*(*b.sweep_values)[1].upper == 0.9);
  CHECK(std::get<RandomSources>(b.base.sources).count == 3);
}

TEST_CASE("manifests are accepted as configs") {
  const ConfigDocument doc =
      parse_config(R"({"tool": "islmusic", "seed": 1, "config": {"element_count": 12, "seed": 44}})");
  const RunConfig c = resolve_config(doc, estimate_defaults());
  CHECK(c.base.element_count == 12);
  CHECK(*c.seed == 44);
}

TEST_CASE("seed is drawn only when missing") {
  RunConfig c;
  ensure_seed(c);
  CHECK(c.seed.has_value());
  CHECK(c.seed_source == "entropy");
  RunConfig fixed;
  fixed.seed = 8;
  fixed.seed_source = "cli";
  ensure_seed(fixed);
  CHECK(*fixed.seed == 8);
  CHECK(fixed.seed_source == "cli");
}

TEST_CASE("sha256 and atomic writes") {
  const fs::path dir = fs::temp_directory_path() / "islmusic_io_test";
  fs::create_directories(dir);
  const fs::path f = dir / "abc.txt";
  write_file_atomic(f, "abc");
  CHECK_FALSE(fs::exists(dir / "abc.txt.tmp"));
  CHECK(sha256_hex(f) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  write_file_atomic(f, "");
  CHECK(sha256_hex(f) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  fs::remove_all(dir);
  CHECK_THROWS_AS(sha256_hex(dir / "missing"), ArgumentError);
}

TEST_CASE("json views of results") {
  DetectionResult d;
  d.requested = 2;
  d.azimuths_deg = {60.0};
  d.peak_db = {30.0};
  d.incomplete = true;
  const nlohmann::json j = to_json(d);
  CHECK(j["detected_count"] == 1);
  CHECK(j["accuracy"].is_null());
  CHECK(j["incomplete"] == true);

  const FeasibilityVerdict v = feasibility(1.0, orbit_metrics(OrbitSpec{}));
  CHECK(to_json(v)["verdict"] == "PASS");
  CHECK(utc_timestamp().size() == 20);
}
