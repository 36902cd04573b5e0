#include "islmusic/signal_synth.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "islmusic/errors.hpp"

namespace islmusic {

void validate_sources(std::span<const Source> sources, std::size_t element_count) {
  if (sources.empty()) throw ConfigError("at least one source is required");
  if (sources.size() >= element_count) {
    throw ConfigError("source count m=" + std::to_string(sources.size()) +
                      " must be smaller than element count M=" + std::to_string(element_count) +
                      " (noise subspace would be empty)");
  }
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const auto& s = sources[k];
    if (!std::isfinite(s.azimuth_deg) || s.azimuth_deg < 0.0 || s.azimuth_deg > 180.0) {
      throw ConfigError("source " + std::to_string(k) + " azimuth must lie in [0, 180] degrees");
    }
    if (!std::isfinite(s.power_w) || s.power_w <= 0.0) {
      throw ConfigError("source " + std::to_string(k) + " power must be positive");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (sources[j].azimuth_deg == s.azimuth_deg) {
        throw ConfigError("sources " + std::to_string(j) + " and " + std::to_string(k) +
                          " share azimuth " + std::to_string(s.azimuth_deg));
      }
    }
  }
}

double mean_power(std::span<const Source> sources) {
  if (sources.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : sources) total += s.power_w;
  return total / static_cast<double>(sources.size());
}

NoiseSpec NoiseSpec::snr(double snr_db) {
  if (!std::isfinite(snr_db)) throw ConfigError("snr_db must be finite");
  return NoiseSpec(Mode::snr_db, snr_db);
}

NoiseSpec NoiseSpec::amplitude(double noise_power) {
  if (!std::isfinite(noise_power) || noise_power < 0.0) {
    throw ConfigError("noise amplitude must be finite and >= 0");
  }
  return NoiseSpec(Mode::noise_amplitude, noise_power);
}

double NoiseSpec::noise_power(std::span<const Source> sources) const {
  if (mode_ == Mode::noise_amplitude) return value_;
  return mean_power(sources) / std::pow(10.0, value_ / 10.0);
}

SnapshotMatrix synthesize(const ArrayGeometry& geometry, const CarrierSpec& carrier,
                          std::span<const Source> sources, std::size_t n_snapshots,
                          const NoiseSpec& noise, std::uint64_t seed) {
  validate_sources(sources, geometry.size());
  if (n_snapshots < 1) throw ArgumentError("n_snapshots must be >= 1");

  const auto m = static_cast<Eigen::Index>(sources.size());
  const auto rows = static_cast<Eigen::Index>(geometry.size());
  const auto cols = static_cast<Eigen::Index>(n_snapshots);

  Eigen::MatrixXcd steering(rows, m);
  std::vector<double> amplitude(sources.size());
  for (Eigen::Index k = 0; k < m; ++k) {
    steering.col(k) = steering_vector(geometry, carrier, sources[k].azimuth_deg);
    amplitude[k] = std::sqrt(sources[k].power_w);
  }

  const double noise_power = noise.noise_power(sources);
  const double noise_sigma = std::sqrt(noise_power / 2.0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SnapshotMatrix out;
  out.data.resize(rows, cols);
  out.seed = seed;
  out.geometry_hash = geometry.hash();
  out.carrier = carrier;
  out.noise_power = noise_power;

  Eigen::VectorXcd symbols(m);
  for (Eigen::Index n = 0; n < cols; ++n) {
    for (Eigen::Index k = 0; k < m; ++k) symbols(k) = std::polar(amplitude[k], phase(rng));
    auto column = out.data.col(n);
    column.noalias() = steering * symbols;
    if (noise_power > 0.0) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        column(i) += std::complex<double>(noise_sigma * re, noise_sigma * im);
      }
    }
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ index);
}

double power_to_db(double power_w) {
  if (!(power_w > 0.0)) throw ArgumentError("power must be positive to convert to dB");
  return 10.0 * std::log10(power_w);
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw ArgumentError("truncated snapshot dump");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void write_snapshot_dump(std::ostream& out, const SnapshotMatrix& snapshots) {
  out.write("ISLX", 4);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(snapshots.elements()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(snapshots.snapshots()));
  put_le<std::uint32_t>(out, 0u);
  put_le<std::uint64_t>(out, snapshots.seed);
  for (Eigen::Index n = 0; n < snapshots.snapshots(); ++n) {
    for (Eigen::Index i = 0; i < snapshots.elements(); ++i) {
      const auto v = snapshots.data(i, n);
      put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v.real())));
      put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v.imag())));
    }
  }
  if (!out) throw ArgumentError("failed writing snapshot dump");
}

SnapshotDump read_snapshot_dump(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || std::string(magic.data(), 4) != "ISLX") throw ArgumentError("not an ISLX snapshot dump");
  SnapshotDump dump;
  dump.elements = get_le<std::uint32_t>(in);
  dump.snapshots = get_le<std::uint32_t>(in);
  (void)get_le<std::uint32_t>(in);
  dump.seed = get_le<std::uint64_t>(in);
  dump.data.resize(dump.elements, dump.snapshots);
  for (std::uint32_t n = 0; n < dump.snapshots; ++n) {
    for (std::uint32_t i = 0; i < dump.elements; ++i) {
      const float re = std::bit_cast<float>(get_le<std::uint32_t>(in));
      const float im = std::bit_cast<float>(get_le<std::uint32_t>(in));
      dump.data(i, n) = {re, im};
    }
  }
  return dump;
}

}  // namespace islmusic
