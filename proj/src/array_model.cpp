#include "islmusic/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "islmusic/errors.hpp"

namespace islmusic {

double propagation_speed(ConstantsMode mode) {
  return mode == ConstantsMode::paper_compat ? kPaperSpeedOfLight : kSpeedOfLight;
}

const char* to_string(ConstantsMode mode) {
  return mode == ConstantsMode::paper_compat ? "paper_compat" : "exact";
}

ConstantsMode constants_mode_from_string(const std::string& name) {
  if (name == "exact") return ConstantsMode::exact;
  if (name == "paper_compat" || name == "paper-compat") return ConstantsMode::paper_compat;
  throw ConfigError("unknown constants mode '" + name + "' (expected exact or paper_compat)");
}

CarrierSpec::CarrierSpec(double frequency_hz, double propagation_speed_mps)
    : frequency_hz_(frequency_hz), propagation_speed_mps_(propagation_speed_mps) {
  if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0) {
    throw ConfigError("carrier frequency must be positive, got " + std::to_string(frequency_hz));
  }
  if (!std::isfinite(propagation_speed_mps) || propagation_speed_mps <= 0.0) {
    throw ConfigError("propagation speed must be positive");
  }
}

CarrierSpec CarrierSpec::with_mode(double frequency_hz, ConstantsMode mode) {
  return CarrierSpec(frequency_hz, propagation_speed(mode));
}

double CarrierSpec::angular_frequency() const {
  return 2.0 * std::numbers::pi * frequency_hz_;
}

ArrayGeometry::ArrayGeometry(std::vector<Position> positions, GainModel gain)
    : positions_(std::move(positions)), gain_(std::move(gain)) {
  if (positions_.size() < 2) {
    throw ConfigError("array needs at least 2 elements, got " + std::to_string(positions_.size()));
  }
  for (const auto& p : positions_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw ConfigError("element positions must be finite");
    }
  }
}

double ArrayGeometry::gain(std::size_t element, const CarrierSpec& carrier, double polar_deg,
                           double azimuth_deg) const {
  if (!gain_) return 1.0;
  return gain_(element, carrier, polar_deg, azimuth_deg);
}

std::uint64_t ArrayGeometry::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& p : positions_) {
    for (double v : {p.x, p.y, p.z}) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &v, sizeof v);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
      }
    }
  }
  return h;
}

double cos_deg(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r < 0.0) r += 360.0;
  if (r == 0.0) return 1.0;
  if (r == 90.0 || r == 270.0) return 0.0;
  if (r == 180.0) return -1.0;
  return std::cos(r * std::numbers::pi / 180.0);
}

double sin_deg(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r < 0.0) r += 360.0;
  if (r == 0.0 || r == 180.0) return 0.0;
  if (r == 90.0) return 1.0;
  if (r == 270.0) return -1.0;
  return std::sin(r * std::numbers::pi / 180.0);
}

ArrayGeometry ula_positions(std::size_t element_count, double spacing_m) {
  if (element_count < 2) {
    throw ConfigError("ULA needs element_count >= 2, got " + std::to_string(element_count));
  }
  if (!std::isfinite(spacing_m) || spacing_m <= 0.0) {
    throw ConfigError("ULA spacing must be positive, got " + std::to_string(spacing_m));
  }
  std::vector<Position> positions(element_count);
  for (std::size_t i = 0; i < element_count; ++i) {
    positions[i].x = static_cast<double>(i) * spacing_m;
  }
  return ArrayGeometry(std::move(positions));
}

double wavelength(const CarrierSpec& carrier) { return carrier.wavelength_m(); }

namespace {

// Unit propagation direction scaled by the wavenumber 2 pi / lambda.
struct WaveVector {
  double kx, ky, kz;
};

WaveVector wave_vector(const CarrierSpec& carrier, double azimuth_deg, double polar_deg) {
  const double st = sin_deg(polar_deg);
  const double ct = cos_deg(polar_deg);
  const double cp = cos_deg(azimuth_deg);
  const double sp = sin_deg(azimuth_deg);
  const double k = 2.0 * std::numbers::pi / carrier.wavelength_m();
  return {k * st * cp, k * st * sp, k * ct};
}

inline double phase_of(const Position& p, const WaveVector& w) {
  return p.x * w.kx + p.y * w.ky + p.z * w.kz;
}

}  // namespace

double phase_shift(const ArrayGeometry& geometry, const CarrierSpec& carrier, std::size_t element,
                   double azimuth_deg, double polar_deg) {
  if (element >= geometry.size()) {
    throw ArgumentError("element index " + std::to_string(element) + " out of range for " +
                        std::to_string(geometry.size()) + "-element array");
  }
  return phase_of(geometry.position(element), wave_vector(carrier, azimuth_deg, polar_deg));
}

double propagation_delay(const ArrayGeometry& geometry, const CarrierSpec& carrier,
                         std::size_t element, double azimuth_deg, double polar_deg) {
  return -phase_shift(geometry, carrier, element, azimuth_deg, polar_deg) /
         carrier.angular_frequency();
}

SteeringVector steering_vector(const ArrayGeometry& geometry, const CarrierSpec& carrier,
                               double azimuth_deg, double polar_deg) {
  const WaveVector w = wave_vector(carrier, azimuth_deg, polar_deg);
  SteeringVector a(static_cast<Eigen::Index>(geometry.size()));
  for (std::size_t i = 0; i < geometry.size(); ++i) {
    const double g = geometry.gain(i, carrier, polar_deg, azimuth_deg);
    a(static_cast<Eigen::Index>(i)) = std::polar(g, phase_of(geometry.position(i), w));
  }
  return a;
}

Eigen::MatrixXcd steering_matrix(const ArrayGeometry& geometry, const CarrierSpec& carrier,
                                 std::span<const double> azimuths_deg, double polar_deg) {
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(geometry.size()),
                     static_cast<Eigen::Index>(azimuths_deg.size()));
  for (std::size_t g = 0; g < azimuths_deg.size(); ++g) {
    a.col(static_cast<Eigen::Index>(g)) =
        steering_vector(geometry, carrier, azimuths_deg[g], polar_deg);
  }
  return a;
}

double aperture_length(const ArrayGeometry& geometry) {
  double longest = 0.0;
  const auto pos = geometry.positions();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      const double dx = pos[i].x - pos[j].x;
      const double dy = pos[i].y - pos[j].y;
      const double dz = pos[i].z - pos[j].z;
      longest = std::max(longest, std::sqrt(dx * dx + dy * dy + dz * dz));
    }
  }
  return longest;
}

double paper_total_dimension(std::size_t element_count, double frequency_hz) {
  const CarrierSpec carrier(frequency_hz, kPaperSpeedOfLight);
  return static_cast<double>(element_count) * carrier.wavelength_m();
}

}  // namespace islmusic
