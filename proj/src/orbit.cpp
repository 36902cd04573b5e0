#include "islmusic/orbit.hpp"

#include <cmath>
#include <numbers>

#include "islmusic/errors.hpp"

namespace islmusic {

OrbitMetrics orbit_metrics(const OrbitSpec& spec) {
  if (!std::isfinite(spec.altitude_km) || spec.altitude_km <= 0.0) {
    throw ConfigError("orbit altitude must be positive");
  }
  if (!std::isfinite(spec.period_s) || spec.period_s <= 0.0) {
    throw ConfigError("orbit period must be positive");
  }
  if (!std::isfinite(spec.earth_radius_km) || spec.earth_radius_km <= 0.0) {
    throw ConfigError("earth radius must be positive");
  }

  const bool rounded = spec.mode == ConstantsMode::paper_compat;
  const double pi = rounded ? kPaperPi : std::numbers::pi;
  double period_s = spec.period_s;
  if (rounded) {
    const double hours = std::round(spec.period_s / 3600.0 * 1000.0) / 1000.0;
    if (hours > 0.0) period_s = hours * 3600.0;
  }

  OrbitMetrics m;
  m.mode = spec.mode;
  m.orbit_radius_km = spec.earth_radius_km + spec.altitude_km;
  m.circumference_km = 2.0 * pi * m.orbit_radius_km;
  m.period_s = period_s;
  m.speed_mps = m.circumference_km * 1000.0 / period_s;
  m.speed_kmh = m.circumference_km / (period_s / 3600.0);
  m.distance_per_degree_km = m.circumference_km / 360.0;
  m.time_per_degree_s = period_s / 360.0;
  return m;
}

FeasibilityVerdict feasibility(double compute_time_s, const OrbitMetrics& metrics) {
  if (!(compute_time_s >= 0.0)) throw ArgumentError("compute time must be >= 0");
  FeasibilityVerdict v;
  v.compute_time_s = compute_time_s;
  v.deadline_s = metrics.time_per_degree_s;
  v.margin_s = metrics.time_per_degree_s - compute_time_s;
  v.pass = compute_time_s < metrics.time_per_degree_s;
  return v;
}

}  // namespace islmusic
