#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "islmusic/array_model.hpp"

namespace islmusic {

struct Source {
  double azimuth_deg = 0.0;
  double power_w = 1.0;
};

// Checks 1 <= m < element_count, azimuths in [0, 180], positive powers and
// pairwise-distinct azimuths. Throws ConfigError naming the violation.
void validate_sources(std::span<const Source> sources, std::size_t element_count);

double mean_power(std::span<const Source> sources);

// Additive circular complex Gaussian noise, independent per element and
// snapshot. Either an SNR relative to the mean per-source power, or a fixed
// per-element noise power (sigma^2 = amplitude).
class NoiseSpec {
 public:
  enum class Mode { snr_db, noise_amplitude };

  static NoiseSpec snr(double snr_db);
  static NoiseSpec amplitude(double noise_power);
  static NoiseSpec noiseless() { return amplitude(0.0); }

  Mode mode() const { return mode_; }
  double value() const { return value_; }
  double noise_power(std::span<const Source> sources) const;

 private:
  NoiseSpec(Mode mode, double value) : mode_(mode), value_(value) {}
  Mode mode_;
  double value_;
};

struct SnapshotMatrix {
  Eigen::MatrixXcd data;  // rows = elements, columns = snapshots
  std::uint64_t seed = 0;
  std::uint64_t geometry_hash = 0;
  CarrierSpec carrier{1.0, kSpeedOfLight};
  double noise_power = 0.0;

  Eigen::Index elements() const { return data.rows(); }
  Eigen::Index snapshots() const { return data.cols(); }
};

// Column n = sum_k s_k[n] a(phi_k) + noise[n]. Source samples have constant
// modulus sqrt(power_k) and independent uniform phase. Deterministic in seed.
SnapshotMatrix synthesize(const ArrayGeometry& geometry, const CarrierSpec& carrier,
                          std::span<const Source> sources, std::size_t n_snapshots,
                          const NoiseSpec& noise, std::uint64_t seed);

// Stream seed for (seed, index); splitmix64 finalizer over the pair.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

double power_to_db(double power_w);

// Binary dump: "ISLX", u32 M, u32 N, u32 reserved (0), u64 seed, then M*N
// little-endian complex64 pairs in column-major order.
inline constexpr std::size_t kSnapshotDumpHeaderBytes = 24;

struct SnapshotDump {
  std::uint32_t elements = 0;
  std::uint32_t snapshots = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXcf data;
};

void write_snapshot_dump(std::ostream& out, const SnapshotMatrix& snapshots);
SnapshotDump read_snapshot_dump(std::istream& in);

}  // namespace islmusic
