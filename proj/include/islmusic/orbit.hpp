#pragma once

#include "islmusic/array_model.hpp"

namespace islmusic {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kPaperPi = 3.14;

// Circular orbit. In paper_compat mode the circle constant is 3.14 and the
// period is rounded to three decimal hours before use (101 min -> 1.683 h),
// which reproduces the published speed figures.
struct OrbitSpec {
  double altitude_km = 830.0;
  double period_s = 101.0 * 60.0;
  double earth_radius_km = kEarthRadiusKm;
  ConstantsMode mode = ConstantsMode::exact;
};

struct OrbitMetrics {
  ConstantsMode mode = ConstantsMode::exact;
  double orbit_radius_km = 0.0;
  double circumference_km = 0.0;
  double period_s = 0.0;  // period actually used (rounded in paper_compat)
  double speed_mps = 0.0;
  double speed_kmh = 0.0;
  double distance_per_degree_km = 0.0;
  double time_per_degree_s = 0.0;
};

// Throws ConfigError for non-positive altitude, period or earth radius.
OrbitMetrics orbit_metrics(const OrbitSpec& spec);

struct FeasibilityVerdict {
  bool pass = false;
  double compute_time_s = 0.0;
  double deadline_s = 0.0;
  double margin_s = 0.0;  // deadline - compute time
};

// PASS iff compute_time_s < time_per_degree_s (strict).
FeasibilityVerdict feasibility(double compute_time_s, const OrbitMetrics& metrics);

}  // namespace islmusic
