#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace islmusic {

// Which physical constants a run uses. `paper_compat` selects the rounded
// values (c = 3e8 m/s, pi = 3.14, period in 3-decimal hours) that reproduce
// the published reference figures.
enum class ConstantsMode { exact, paper_compat };

inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kPaperSpeedOfLight = 3.0e8;

double propagation_speed(ConstantsMode mode);
const char* to_string(ConstantsMode mode);
ConstantsMode constants_mode_from_string(const std::string& name);

class CarrierSpec {
 public:
  // Throws ConfigError unless frequency and speed are finite and positive.
  CarrierSpec(double frequency_hz, double propagation_speed_mps);
  static CarrierSpec with_mode(double frequency_hz, ConstantsMode mode);

  double frequency_hz() const { return frequency_hz_; }
  double propagation_speed_mps() const { return propagation_speed_mps_; }
  double wavelength_m() const { return propagation_speed_mps_ / frequency_hz_; }
  double angular_frequency() const;

 private:
  double frequency_hz_;
  double propagation_speed_mps_;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Scalar element gain g_i(omega, theta, phi). An empty model means unit gain.
using GainModel = std::function<double(std::size_t element, const CarrierSpec& carrier,
                                       double polar_deg, double azimuth_deg)>;

class ArrayGeometry {
 public:
  explicit ArrayGeometry(std::vector<Position> positions, GainModel gain = {});

  std::size_t size() const { return positions_.size(); }
  std::span<const Position> positions() const { return positions_; }
  const Position& position(std::size_t i) const { return positions_.at(i); }
  bool has_gain_model() const { return static_cast<bool>(gain_); }
  double gain(std::size_t element, const CarrierSpec& carrier, double polar_deg,
              double azimuth_deg) const;

  // FNV-1a over the raw position bytes; stamped on synthesized snapshots.
  std::uint64_t hash() const;

 private:
  std::vector<Position> positions_;
  GainModel gain_;
};

using SteeringVector = Eigen::VectorXcd;

// Degree-argument trig that is exact at multiples of 90 degrees, so that
// broadside (phi = 90) produces exactly zero phase.
double cos_deg(double degrees);
double sin_deg(double degrees);

// Uniform linear array along +x: element i sits at (i * spacing, 0, 0).
ArrayGeometry ula_positions(std::size_t element_count, double spacing_m);

double wavelength(const CarrierSpec& carrier);

// xi_i = (2 pi / lambda) (x sin(theta) cos(phi) + y sin(theta) sin(phi) + z cos(theta)),
// with phi the azimuth from the x axis and theta the polar angle from z.
double phase_shift(const ArrayGeometry& geometry, const CarrierSpec& carrier,
                   std::size_t element, double azimuth_deg, double polar_deg = 90.0);

// tau_i = -xi_i / omega_0, in seconds.
double propagation_delay(const ArrayGeometry& geometry, const CarrierSpec& carrier,
                         std::size_t element, double azimuth_deg, double polar_deg = 90.0);

SteeringVector steering_vector(const ArrayGeometry& geometry, const CarrierSpec& carrier,
                               double azimuth_deg, double polar_deg = 90.0);

// One steering vector per azimuth, stacked as columns (M x azimuths.size()).
Eigen::MatrixXcd steering_matrix(const ArrayGeometry& geometry, const CarrierSpec& carrier,
                                 std::span<const double> azimuths_deg, double polar_deg = 90.0);

// Largest distance between any two elements; (M - 1) d for a ULA.
double aperture_length(const ArrayGeometry& geometry);

// element_count * lambda with c = 3e8 m/s. This is the "total dimension"
// convention behind the published 65.22 / 61.22 / 46.88 / 26.79 cm figures.
double paper_total_dimension(std::size_t element_count, double frequency_hz);

}  // namespace islmusic
