#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "domeloc/geometry.hpp"

namespace domeloc {

/// Knobs of the analytic forward model that stands in for a full elastic
/// simulation. Readings are dimensionless counts; none of these values is a
/// calibrated physical quantity.
struct SurrogateParams {
  double gain = 1000.0;
  double depth_exponent = 1.2;
  double angular_exponent = 2.0;
  double decay_length_mm = 22.0;
  double edge_width_deg = 5.0;
  double noise_sigma = 5.0;
  double max_depth_mm = 3.0;

  void validate() const;
};

/// One measurement row: chart location, indentation depth, contact flag and
/// the five channel readings.
struct Sample {
  double a = 0.0;
  double b = 0.0;
  double depth_mm = 0.0;
  bool contact = false;
  std::array<double, kSensorCount> readings{};
};

enum class Provenance { kSurrogate, kIngested };

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

struct Dataset {
  std::vector<Sample> samples;
  std::string config_ref = "custom";
  Provenance provenance = Provenance::kSurrogate;
};

/// Five channel readings for an indentation at `point` pressed `depth_mm`
/// into the dome. Per channel j:
///
///   r_j = gain * (depth/max_depth)^depth_exponent
///              * max(0, n_j . u_j)^angular_exponent
///              * exp(-|p - s_j| / decay_length)
///              * edge(p)  [+ noise]
///
/// with u_j the unit vector from sampling point s_j to p and edge() a linear
/// ramp from 1 to 0 over the last edge_width_deg of polar angle before the
/// rim. Noise is Gaussian per channel, drawn from a counter-based stream
/// keyed by (noise_seed, noise_row, channel); omit the seed (or set
/// noise_sigma to 0) for noise-free values.
std::array<double, kSensorCount> simulate_readings(
    const SensorConfig& config, const DomeSpec& dome, const SurfacePoint& point, double depth_mm,
    const SurrogateParams& params, std::optional<std::uint64_t> noise_seed = std::nullopt,
    std::uint64_t noise_row = 0);

/// Full collection protocol over a training grid: per location one non-touch
/// row (contact = 0, zero depth) followed by one contact row per scheduled
/// depth. With mirror = true only locations on one side of the layout's
/// symmetry line are simulated; the other side is synthesized by reflecting
/// the location and permuting channels, reproducing the half-then-mirror
/// collection scheme.
Dataset generate_dataset(const SensorConfig& config, const DomeSpec& dome, const ChartGrid& grid,
                         const std::vector<double>& depths_mm, const SurrogateParams& params,
                         std::uint64_t noise_seed, bool mirror);

/// Same row pattern over an arbitrary location list (used for test sets).
Dataset generate_dataset_at(const SensorConfig& config, const DomeSpec& dome,
                            const std::vector<std::pair<double, double>>& locations,
                            const std::vector<double>& depths_mm, const SurrogateParams& params,
                            std::uint64_t noise_seed);

/// Noise-free readings along the layout's symmetry line at a fixed depth.
/// `s` is the signed chart-space arc length from the line midpoint.
struct SweepTable {
  std::vector<double> s;
  std::vector<std::array<double, kSensorCount>> readings;
};

SweepTable sweep_symmetry_line(const SensorConfig& config, const DomeSpec& dome,
                               const SurrogateParams& params, double depth_mm, int step_count);

}  // namespace domeloc
