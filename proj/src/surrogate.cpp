#include "domeloc/surrogate.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

#include "domeloc/random.hpp"

namespace domeloc {

void SurrogateParams::validate() const {
  if (!(gain > 0.0)) throw std::invalid_argument(fmt::format("gain must be > 0, got {}", gain));
  if (!(depth_exponent > 0.0)) {
    throw std::invalid_argument(fmt::format("depth_exponent must be > 0, got {}", depth_exponent));
  }
  if (!(angular_exponent >= 0.0)) {
    throw std::invalid_argument(
        fmt::format("angular_exponent must be >= 0, got {}", angular_exponent));
  }
  if (!(decay_length_mm > 0.0)) {
    throw std::invalid_argument(fmt::format("decay_length_mm must be > 0, got {}", decay_length_mm));
  }
  if (!(edge_width_deg >= 0.0)) {
    throw std::invalid_argument(fmt::format("edge_width_deg must be >= 0, got {}", edge_width_deg));
  }
  if (!(noise_sigma >= 0.0)) {
    throw std::invalid_argument(fmt::format("noise_sigma must be >= 0, got {}", noise_sigma));
  }
  if (!(max_depth_mm > 0.0)) {
    throw std::invalid_argument(fmt::format("max_depth_mm must be > 0, got {}", max_depth_mm));
  }
}

std::string provenance_name(Provenance p) {
  return p == Provenance::kSurrogate ? "surrogate" : "ingested";
}

Provenance provenance_from_name(const std::string& name) {
  if (name == "surrogate") return Provenance::kSurrogate;
  if (name == "ingested") return Provenance::kIngested;
  throw std::invalid_argument(fmt::format("unknown provenance '{}'", name));
}

namespace {

double edge_factor(const Eigen::Vector3d& position, const DomeSpec& dome,
                   const SurrogateParams& params) {
  if (params.edge_width_deg <= 0.0) return 1.0;
  const double polar = std::acos(std::clamp(position.z() / dome.sphere_radius_mm, -1.0, 1.0));
  const double margin = (dome.aperture_rad() - polar) / deg_to_rad(params.edge_width_deg);
  return std::clamp(margin, 0.0, 1.0);
}

std::array<double, kSensorCount> clean_readings(const SensorConfig& config, const DomeSpec& dome,
                                                const SurfacePoint& point, double depth_mm,
                                                const SurrogateParams& params) {
  std::array<double, kSensorCount> readings{};
  if (depth_mm == 0.0) return readings;
  const double depth_gain =
      params.gain * std::pow(depth_mm / params.max_depth_mm, params.depth_exponent);
  const double edge = edge_factor(point.position, dome, params);
  for (int j = 0; j < kSensorCount; ++j) {
    const Eigen::Vector3d offset = point.position - config.sensors[j].position_mm;
    const double dist = offset.norm();
    const double align = std::max(0.0, config.sensors[j].normal.dot(offset) / dist);
    readings[j] = depth_gain * std::pow(align, params.angular_exponent) *
                  std::exp(-dist / params.decay_length_mm) * edge;
  }
  return readings;
}

void apply_noise(std::array<double, kSensorCount>& readings, const SurrogateParams& params,
                 std::optional<std::uint64_t> noise_seed, std::uint64_t noise_row) {
  if (!noise_seed || params.noise_sigma <= 0.0) return;
  for (int j = 0; j < kSensorCount; ++j) {
    readings[j] += params.noise_sigma * keyed_normal(*noise_seed, noise_row, j);
  }
}

void check_depths(const std::vector<double>& depths_mm, const SurrogateParams& params) {
  if (depths_mm.empty()) throw std::domain_error("depth schedule is empty");
  for (double d : depths_mm) {
    if (!(d >= 0.0 && d <= params.max_depth_mm)) {
      throw std::domain_error(
          fmt::format("depth {} mm outside [0, {}] mm", d, params.max_depth_mm));
    }
  }
}

// Rows per location: slot 0 is the non-touch row, slot k >= 1 is depth k-1.
std::uint64_t noise_row_index(std::size_t location_index, std::size_t slot,
                              std::size_t depth_count) {
  return location_index * (depth_count + 1) + slot;
}

void append_location_rows(Dataset& out, const SensorConfig& config, const DomeSpec& dome,
                          double a, double b, const std::vector<double>& depths_mm,
                          const SurrogateParams& params, std::uint64_t noise_seed,
                          std::size_t location_index) {
  const SurfacePoint point = map_ab_to_surface(a, b, dome);
  Sample non_touch;
  non_touch.a = a;
  non_touch.b = b;
  non_touch.depth_mm = 0.0;
  non_touch.contact = false;
  apply_noise(non_touch.readings, params, noise_seed,
              noise_row_index(location_index, 0, depths_mm.size()));
  out.samples.push_back(non_touch);
  for (std::size_t k = 0; k < depths_mm.size(); ++k) {
    Sample s;
    s.a = a;
    s.b = b;
    s.depth_mm = depths_mm[k];
    s.contact = true;
    s.readings = clean_readings(config, dome, point, depths_mm[k], params);
    apply_noise(s.readings, params, noise_seed,
                noise_row_index(location_index, k + 1, depths_mm.size()));
    out.samples.push_back(s);
  }
}

}  // namespace

std::array<double, kSensorCount> simulate_readings(const SensorConfig& config,
                                                   const DomeSpec& dome, const SurfacePoint& point,
                                                   double depth_mm, const SurrogateParams& params,
                                                   std::optional<std::uint64_t> noise_seed,
                                                   std::uint64_t noise_row) {
  params.validate();
  if (!(depth_mm >= 0.0 && depth_mm <= params.max_depth_mm)) {
    throw std::domain_error(
        fmt::format("depth {} mm outside [0, {}] mm", depth_mm, params.max_depth_mm));
  }
  auto readings = clean_readings(config, dome, point, depth_mm, params);
  apply_noise(readings, params, noise_seed, noise_row);
  return readings;
}

Dataset generate_dataset(const SensorConfig& config, const DomeSpec& dome, const ChartGrid& grid,
                         const std::vector<double>& depths_mm, const SurrogateParams& params,
                         std::uint64_t noise_seed, bool mirror) {
  params.validate();
  check_depths(depths_mm, params);
  const int n = grid.per_axis_count;
  if (n < 2 || grid.locations.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("grid is not a regular per_axis x per_axis chart grid");
  }
  if (mirror && !config.symmetry) {
    throw std::invalid_argument("mirror requested but the configuration has no symmetry line");
  }

  Dataset out;
  out.config_ref = config.case_ref();
  out.provenance = Provenance::kSurrogate;
  out.samples.reserve(grid.locations.size() * (depths_mm.size() + 1));

  for (std::size_t idx = 0; idx < grid.locations.size(); ++idx) {
    const auto [a, b] = grid.locations[idx];
    const int i = static_cast<int>(idx) / n;
    const int j = static_cast<int>(idx) % n;

    bool synthesize = false;
    std::size_t source_idx = idx;
    if (mirror) {
      if (*config.symmetry == SymmetryLine::kAEqZero) {
        // Simulated side: a >= 0 (axis index >= n/2); mirror flips the a index.
        synthesize = i < n / 2 && 2 * i != n - 1;
        source_idx = static_cast<std::size_t>(n - 1 - i) * n + j;
      } else {
        // Simulated side: a + b >= 0; reflection (a,b) -> (-b,-a) swaps and
        // flips both indices.
        synthesize = i + j < n - 1;
        source_idx = static_cast<std::size_t>(n - 1 - j) * n + (n - 1 - i);
      }
    }

    if (!synthesize) {
      append_location_rows(out, config, dome, a, b, depths_mm, params, noise_seed, idx);
      continue;
    }

    // Mirrored synthesis: readings come from the simulated source location
    // with channels permuted; the synthesized rows reuse the source noise.
    const auto [sa, sb] = grid.locations[source_idx];
    const SurfacePoint source_point = map_ab_to_surface(sa, sb, dome);
    const auto& perm = config.mirror_permutation;

    Sample non_touch;
    non_touch.a = a;
    non_touch.b = b;
    non_touch.contact = false;
    std::array<double, kSensorCount> src{};
    apply_noise(src, params, noise_seed, noise_row_index(source_idx, 0, depths_mm.size()));
    for (int c = 0; c < kSensorCount; ++c) non_touch.readings[c] = src[perm[c]];
    out.samples.push_back(non_touch);

    for (std::size_t k = 0; k < depths_mm.size(); ++k) {
      Sample s;
      s.a = a;
      s.b = b;
      s.depth_mm = depths_mm[k];
      s.contact = true;
      auto source_readings = clean_readings(config, dome, source_point, depths_mm[k], params);
      apply_noise(source_readings, params, noise_seed,
                  noise_row_index(source_idx, k + 1, depths_mm.size()));
      for (int c = 0; c < kSensorCount; ++c) s.readings[c] = source_readings[perm[c]];
      out.samples.push_back(s);
    }
  }
  return out;
}

Dataset generate_dataset_at(const SensorConfig& config, const DomeSpec& dome,
                            const std::vector<std::pair<double, double>>& locations,
                            const std::vector<double>& depths_mm, const SurrogateParams& params,
                            std::uint64_t noise_seed) {
  params.validate();
  check_depths(depths_mm, params);
  if (locations.empty()) throw std::domain_error("location list is empty");
  Dataset out;
  out.config_ref = config.case_ref();
  out.provenance = Provenance::kSurrogate;
  out.samples.reserve(locations.size() * (depths_mm.size() + 1));
  for (std::size_t idx = 0; idx < locations.size(); ++idx) {
    append_location_rows(out, config, dome, locations[idx].first, locations[idx].second, depths_mm,
                         params, noise_seed, idx);
  }
  return out;
}

SweepTable sweep_symmetry_line(const SensorConfig& config, const DomeSpec& dome,
                               const SurrogateParams& params, double depth_mm, int step_count) {
  params.validate();
  if (step_count < 2) {
    throw std::domain_error(fmt::format("step_count must be >= 2, got {}", step_count));
  }
  if (!(depth_mm >= 0.0 && depth_mm <= params.max_depth_mm)) {
    throw std::domain_error(
        fmt::format("depth {} mm outside [0, {}] mm", depth_mm, params.max_depth_mm));
  }
  if (!config.symmetry) {
    throw std::invalid_argument("configuration has no symmetry line to sweep");
  }
  const double h = dome.chart_halfwidth;
  SweepTable table;
  table.s.reserve(step_count);
  table.readings.reserve(step_count);
  for (int i = 0; i < step_count; ++i) {
    const double t = -1.0 + 2.0 * i / (step_count - 1);
    double a, b, s;
    if (*config.symmetry == SymmetryLine::kAEqZero) {
      a = 0.0;
      b = h * t;
      s = b;
    } else {
      a = h * t;
      b = -a;
      s = a * std::numbers::sqrt2;
    }
    const SurfacePoint point = map_ab_to_surface(a, b, dome);
    table.s.push_back(s);
    table.readings.push_back(clean_readings(config, dome, point, depth_mm, params));
  }
  return table;
}

}  // namespace domeloc
