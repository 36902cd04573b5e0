#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(ISLMUSIC_TEST_WORKDIR) / "cli";

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + ISLMUSIC_CLI_PATH + "\" " + args + " > \"" +
                          (kWork / "stdout.txt").string() + "\" 2> \"" + (kWork / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string write_config(const std::string& name, const std::string& text) {
  const fs::path p = kWork / name;
  std::ofstream(p) << text;
  return p.string();
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

struct Workdir {
  Workdir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_CASE("estimate writes spectrum, detections and manifest") {
  Workdir w;
  const std::string out = (kWork / "est").string();
  REQUIRE(run_cli("estimate --seed 7 --out " + out) == 0);
  const std::string csv = slurp(kWork / "est" / "spectrum.csv");
  CHECK(csv.rfind("azimuth_deg,pmusic,pmusic_db\n", 0) == 0);
  CHECK(line_count(csv) == 182);

  const auto det = nlohmann::json::parse(slurp(kWork / "est" / "detection.json"));
  CHECK(det["requested"] == 20);
  CHECK(det["detected_azimuths_deg"].size() == 20);
  CHECK(det["seed"] == 7);

  const auto manifest = nlohmann::json::parse(slurp(kWork / "est" / "manifest.json"));
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["seed_source"] == "cli");
  CHECK(manifest["outputs"].size() == 2);
  CHECK(manifest["outputs"][0]["sha256"].get<std::string>().size() == 64);
}

TEST_CASE("reruns are byte identical, including from the manifest") {
  Workdir w;
  const std::string cfg = write_config("small.json", R"({"element_count": 24, "n_snapshots": 64,
    "sources": [{"azimuth_deg": 50}, {"azimuth_deg": 95}], "noise": {"snr_db": 10}})");
  REQUIRE(run_cli("--config " + cfg + " --seed 11 estimate --out " + (kWork / "a").string()) == 0);
  REQUIRE(run_cli("--config " + cfg + " --seed 11 estimate --out " + (kWork / "b").string()) == 0);
  for (const char* f : {"spectrum.csv", "detection.json"}) {
    CHECK(slurp(kWork / "a" / f) == slurp(kWork / "b" / f));
  }

  REQUIRE(run_cli("--config " + (kWork / "a" / "manifest.json").string() + " estimate --out " +
                  (kWork / "c").string()) == 0);
  CHECK(slurp(kWork / "a" / "spectrum.csv") == slurp(kWork / "c" / "spectrum.csv"));
  CHECK(slurp(kWork / "a" / "detection.json") == slurp(kWork / "c" / "detection.json"));

  const auto m = nlohmann::json::parse(slurp(kWork / "c" / "manifest.json"));
  CHECK(m["seed_source"] == "config");
  CHECK(m["outputs"][0]["sha256"] ==
        nlohmann::json::parse(slurp(kWork / "a" / "manifest.json"))["outputs"][0]["sha256"]);
}

TEST_CASE("entropy seeds are recorded") {
  Workdir w;
  const std::string cfg = write_config("tiny.json", R"({"element_count": 8, "n_snapshots": 16,
    "sources": [{"azimuth_deg": 50}]})");
  REQUIRE(run_cli("--config " + cfg + " estimate --out " + (kWork / "e").string()) == 0);
  const auto m = nlohmann::json::parse(slurp(kWork / "e" / "manifest.json"));
  CHECK(m["seed_source"] == "entropy");
  CHECK(m["config"]["seed"] == m["seed"]);
}

TEST_CASE("configuration failures exit with code 2") {
  Workdir w;
  const std::string too_many = write_config("m_ge_M.json", R"({"element_count": 4,
    "sources": [{"azimuth_deg": 10}, {"azimuth_deg": 20}, {"azimuth_deg": 30}, {"azimuth_deg": 40}]})");
  CHECK(run_cli("--config " + too_many + " estimate --out " + (kWork / "x").string()) == 2);
  CHECK(slurp(kWork / "stderr.txt").find("m=4") != std::string::npos);

  const std::string unknown = write_config("unknown.json", "{\n  \"seed\": 1,\n  \"elements\": 3\n}");
  CHECK(run_cli("--config " + unknown + " estimate") == 2);
  CHECK(slurp(kWork / "stderr.txt").find("unknown.json:3") != std::string::npos);

  CHECK(run_cli("sweep bogus") == 2);
  CHECK(slurp(kWork / "stderr.txt").find("beamwidth") != std::string::npos);
  CHECK(run_cli("orbit 0 101 --out " + (kWork / "o").string()) == 2);
  CHECK(run_cli("orbit 830 -5 --out " + (kWork / "o").string()) == 2);
  CHECK(run_cli("estimate --threads 0") == 2);
  CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("orbit command") {
  Workdir w;
  REQUIRE(run_cli("orbit 830 101 --paper-compat --out " + (kWork / "orbit").string()) == 0);
  const auto j = nlohmann::json::parse(slurp(kWork / "orbit" / "orbit.json"));
  CHECK(j["time_per_degree_s"].get<double>() == doctest::Approx(16.83).epsilon(1e-4));
  CHECK(j["constants"] == "paper_compat");
  CHECK(slurp(kWork / "stdout.txt").find("time_per_degree_s") != std::string::npos);
}

TEST_CASE("sweep command") {
  Workdir w;
  const std::string cfg = write_config("sweep.json", R"({"trials": 2, "n_snapshots": 32})");
  REQUIRE(run_cli("--config " + cfg + " --seed 3 sweep spacing --out " + (kWork / "s").string()) == 0);
  const std::string csv = slurp(kWork / "s" / "sweep_spacing.csv");
  CHECK(csv.rfind("swept_param,value,mean_accuracy,mean_peak_db,mean_min_sensitivity_db,mean_time_s,trials,seed\n", 0) == 0);
  CHECK(line_count(csv) == 8);
  CHECK(csv.find("spacing_wavelengths,0.25,") != std::string::npos);

  const std::string values = write_config("values.json", R"({"trials": 1, "n_snapshots": 32,
    "sweep_values": [9, 17]})");
  REQUIRE(run_cli("--config " + values + " --seed 3 sweep elements --out " + (kWork / "el").string()) == 0);
  CHECK(line_count(slurp(kWork / "el" / "sweep_elements.csv")) == 3);

  REQUIRE(run_cli("--config " + cfg + " --seed 3 sweep timing --out " + (kWork / "t").string()) == 0);
  const auto report = nlohmann::json::parse(slurp(kWork / "t" / "timing_report.json"));
  CHECK(report["axes"].size() == 4);
  CHECK(report["feasibility"]["verdict"] == "PASS");
  CHECK(run_cli("--config " + values + " sweep timing --out " + (kWork / "t2").string()) == 2);
}

TEST_CASE("bench command and print-config") {
  Workdir w;
  const std::string cfg = write_config("bench.json", R"({"bench_trials": 2})");
  REQUIRE(run_cli("--config " + cfg + " --seed 1 bench --out " + (kWork / "bench").string()) == 0);
  const auto j = nlohmann::json::parse(slurp(kWork / "bench" / "bench.json"));
  CHECK(j["trials"] == 2);
  CHECK(j["feasibility"]["verdict"] == "PASS");

  REQUIRE(run_cli("--print-config --seed 4 sweep power") == 0);
  const auto printed = nlohmann::json::parse(slurp(kWork / "stdout.txt"));
  CHECK(printed["seed"] == 4);
  CHECK(printed["sweep_values"].size() == 7);
  CHECK(printed["noise"]["noise_amplitude"] == 50.0);
  CHECK_FALSE(fs::exists("out/manifest.json"));
}
