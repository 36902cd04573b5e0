#include "islmusic/music.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <tuple>

#include "islmusic/errors.hpp"
#include "islmusic/format.hpp"
#include "islmusic/kernels.hpp"

namespace islmusic {

AzimuthGrid::AzimuthGrid(double start_deg, double end_deg, double step_deg)
    : start_(start_deg), end_(end_deg), step_(step_deg) {
  if (!std::isfinite(start_) || !std::isfinite(end_) || !(start_ < end_)) {
    throw ConfigError("azimuth grid needs start < end");
  }
  if (!std::isfinite(step_) || step_ <= 0.0) throw ConfigError("azimuth grid step must be > 0");
}

std::size_t AzimuthGrid::size() const {
  return static_cast<std::size_t>(std::floor((end_ - start_) / step_ + 1e-9)) + 1;
}

std::vector<double> AzimuthGrid::points() const {
  std::vector<double> pts(size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] = std::min(end_, start_ + static_cast<double>(i) * step_);
  }
  return pts;
}

Pseudospectrum music_spectrum(const SubspaceSplit& split, const Eigen::MatrixXcd& grid_steering,
                              const AzimuthGrid& grid, int threads) {
  Pseudospectrum out;
  out.grid = grid;
  out.azimuths_deg = grid.points();
  if (grid_steering.cols() != static_cast<Eigen::Index>(out.azimuths_deg.size())) {
    throw ArgumentError("steering table has " + std::to_string(grid_steering.cols()) +
                        " columns for a " + std::to_string(out.azimuths_deg.size()) +
                        "-point grid");
  }
  out.values.resize(out.azimuths_deg.size());
  kernels::noise_projection(grid_steering, split.noise_basis, out.values, threads);
  out.values_db.resize(out.values.size());
  for (std::size_t g = 0; g < out.values.size(); ++g) {
    out.values[g] = 1.0 / std::max(out.values[g], kProjectionFloor);
    out.values_db[g] = 10.0 * std::log10(out.values[g]);
  }
  return out;
}

Pseudospectrum music_spectrum(const SubspaceSplit& split, const ArrayGeometry& geometry,
                              const CarrierSpec& carrier, const AzimuthGrid& grid, int threads) {
  if (static_cast<Eigen::Index>(geometry.size()) != split.dimension()) {
    throw ArgumentError("geometry has " + std::to_string(geometry.size()) +
                        " elements but subspace dimension is " +
                        std::to_string(split.dimension()));
  }
  const auto azimuths = grid.points();
  return music_spectrum(split, steering_matrix(geometry, carrier, azimuths), grid, threads);
}

double DetectionResult::mean_peak_db() const {
  if (peak_db.empty()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (double v : peak_db) total += v;
  return total / static_cast<double>(peak_db.size());
}

DetectionResult detect_peaks(const Pseudospectrum& spectrum, std::size_t max_peaks) {
  if (max_peaks < 1) throw ArgumentError("max_peaks must be >= 1");
  const auto& v = spectrum.values;
  const std::size_t n = v.size();

  std::vector<std::size_t> peaks;
  std::size_t a = 0;
  while (a < n) {
    std::size_t b = a;
    while (b + 1 < n && v[b + 1] == v[a]) ++b;
    const bool has_left = a > 0;
    const bool has_right = b + 1 < n;
    const bool left_lower = !has_left || v[a - 1] < v[a];
    const bool right_lower = !has_right || v[b + 1] < v[a];
    if ((has_left || has_right) && left_lower && right_lower) peaks.push_back(a);
    a = b + 1;
  }

  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t l, std::size_t r) { return v[l] > v[r]; });
  if (peaks.size() > max_peaks) peaks.resize(max_peaks);
  std::sort(peaks.begin(), peaks.end());

  DetectionResult out;
  out.requested = max_peaks;
  out.incomplete = peaks.size() < max_peaks;
  for (std::size_t idx : peaks) {
    out.azimuths_deg.push_back(spectrum.azimuths_deg[idx]);
    out.peak_db.push_back(spectrum.values_db[idx]);
  }
  if (!out.peak_db.empty()) {
    out.min_sensitivity_db = *std::min_element(out.peak_db.begin(), out.peak_db.end());
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> match_detections(
    std::span<const double> detected, std::span<const double> truth, double tolerance_deg) {
  if (!(tolerance_deg >= 0.0)) throw ArgumentError("tolerance must be >= 0");
  struct Candidate {
    double distance;
    std::size_t det;
    std::size_t tru;
  };
  std::vector<Candidate> candidates;
  for (std::size_t d = 0; d < detected.size(); ++d) {
    for (std::size_t t = 0; t < truth.size(); ++t) {
      const double dist = std::abs(detected[d] - truth[t]);
      if (dist <= tolerance_deg) candidates.push_back({dist, d, t});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& l, const Candidate& r) {
    return std::tie(l.distance, truth[l.tru], detected[l.det]) <
           std::tie(r.distance, truth[r.tru], detected[r.det]);
  });

  std::vector<bool> det_used(detected.size()), truth_used(truth.size());
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  for (const auto& c : candidates) {
    if (det_used[c.det] || truth_used[c.tru]) continue;
    det_used[c.det] = truth_used[c.tru] = true;
    matches.emplace_back(c.det, c.tru);
  }
  return matches;
}

double accuracy(std::span<const double> detected, std::span<const double> truth,
                double tolerance_deg) {
  if (truth.empty()) throw ArgumentError("accuracy needs a non-empty truth list");
  const auto matches = match_detections(detected, truth, tolerance_deg);
  return static_cast<double>(matches.size()) / static_cast<double>(truth.size());
}

void score_detection(DetectionResult& detection, std::span<const double> truth,
                     double tolerance_deg) {
  if (truth.empty()) throw ArgumentError("accuracy needs a non-empty truth list");
  const auto matches = match_detections(detection.azimuths_deg, truth, tolerance_deg);
  detection.truth_deg = std::vector<double>(truth.begin(), truth.end());
  detection.accuracy = static_cast<double>(matches.size()) / static_cast<double>(truth.size());
  detection.min_sensitivity_db.reset();
  for (const auto& [det, tru] : matches) {
    const double db = detection.peak_db[det];
    if (!detection.min_sensitivity_db || db < *detection.min_sensitivity_db) {
      detection.min_sensitivity_db = db;
    }
  }
}

void write_spectrum_csv(std::ostream& out, const Pseudospectrum& spectrum) {
  out << "azimuth_deg,pmusic,pmusic_db\n";
  for (std::size_t g = 0; g < spectrum.values.size(); ++g) {
    out << format_double(spectrum.azimuths_deg[g]) << ',' << format_double(spectrum.values[g])
        << ',' << format_double(spectrum.values_db[g]) << '\n';
  }
}

}  // namespace islmusic
