#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "islmusic/array_model.hpp"
#include "islmusic/subspace.hpp"

namespace islmusic {

// Floor on ||U_L^H s||^2 so that exact orthogonality (noiseless input) yields
// a large finite pseudospectrum value instead of infinity.
inline constexpr double kProjectionFloor = 1e-12;

class AzimuthGrid {
 public:
  AzimuthGrid() : AzimuthGrid(0.0, 180.0, 1.0) {}
  AzimuthGrid(double start_deg, double end_deg, double step_deg);

  double start_deg() const { return start_; }
  double end_deg() const { return end_; }
  double step_deg() const { return step_; }
  std::size_t size() const;
  // start + i * step, clamped to end; contains end when the range divides evenly.
  std::vector<double> points() const;

 private:
  double start_;
  double end_;
  double step_;
};

struct Pseudospectrum {
  AzimuthGrid grid;
  std::vector<double> azimuths_deg;
  std::vector<double> values;     // P_MU, linear
  std::vector<double> values_db;  // 10 log10(P_MU)
  double floor = kProjectionFloor;
};

// P_MU(phi) = 1 / max(||U_L^H s(phi)||^2, floor) on every grid azimuth.
Pseudospectrum music_spectrum(const SubspaceSplit& split, const ArrayGeometry& geometry,
                              const CarrierSpec& carrier, const AzimuthGrid& grid,
                              int threads = 1);

// Same, with steering vectors for grid.points() precomputed as columns.
Pseudospectrum music_spectrum(const SubspaceSplit& split, const Eigen::MatrixXcd& grid_steering,
                              const AzimuthGrid& grid, int threads = 1);

struct DetectionResult {
  std::size_t requested = 0;
  std::vector<double> azimuths_deg;  // ascending
  std::vector<double> peak_db;       // aligned with azimuths_deg
  bool incomplete = false;           // fewer local maxima than requested

  std::optional<std::vector<double>> truth_deg;
  std::optional<double> accuracy;
  // Smallest peak_db among detections matched to truth (or among all
  // detections when no truth is attached). Empty if nothing qualifies.
  std::optional<double> min_sensitivity_db;

  double mean_peak_db() const;  // NaN when there are no detections
};

// Strict local maxima (endpoints compare against their single neighbour; a
// plateau counts once, at its leftmost point, when every outer neighbour is
// lower). The max_peaks highest are returned sorted by azimuth.
DetectionResult detect_peaks(const Pseudospectrum& spectrum, std::size_t max_peaks);

// Greedy one-to-one nearest-first matching within tolerance. Returns
// (detected index, truth index) pairs. Ties are broken by truth value and then
// detected value, so the result does not depend on list order.
std::vector<std::pair<std::size_t, std::size_t>> match_detections(
    std::span<const double> detected, std::span<const double> truth, double tolerance_deg);

// matched truth / |truth|. Throws ArgumentError on empty truth or negative tolerance.
double accuracy(std::span<const double> detected, std::span<const double> truth,
                double tolerance_deg = 0.5);

// Attaches truth to a detection and fills accuracy and min_sensitivity_db.
void score_detection(DetectionResult& detection, std::span<const double> truth,
                     double tolerance_deg = 0.5);

// Header `azimuth_deg,pmusic,pmusic_db`, one row per grid point.
void write_spectrum_csv(std::ostream& out, const Pseudospectrum& spectrum);

}  // namespace islmusic
