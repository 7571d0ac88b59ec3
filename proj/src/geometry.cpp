#include "domeloc/geometry.hpp"

#include <fmt/format.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "domeloc/random.hpp"

namespace domeloc {

namespace {

constexpr double kPi = std::numbers::pi;

struct CaseDef {
  Layout layout;
  double mounting_angle_deg;
};

// Cases 1-4: central layouts at +25 (platform), 0, -25, +25 (no platform).
// Cases 5-10: rings at 15, 25, 30, 35, 40, 45 degrees.
constexpr std::array<CaseDef, 10> kStockCases = {{
    {Layout::kCentralWithPlatform, 25.0},
    {Layout::kCentral, 0.0},
    {Layout::kCentral, -25.0},
    {Layout::kCentral, 25.0},
    {Layout::kRing, 15.0},
    {Layout::kRing, 25.0},
    {Layout::kRing, 30.0},
    {Layout::kRing, 35.0},
    {Layout::kRing, 40.0},
    {Layout::kRing, 45.0},
}};

}  // namespace

double DomeSpec::base_plane_z() const { return sphere_radius_mm * std::cos(aperture_rad()); }

double DomeSpec::cap_area_mm2() const {
  return 2.0 * kPi * sphere_radius_mm * sphere_radius_mm * (1.0 - std::cos(aperture_rad()));
}

void DomeSpec::validate() const {
  if (!(sphere_radius_mm > 0.0)) {
    throw std::invalid_argument(fmt::format("sphere_radius_mm must be > 0, got {}", sphere_radius_mm));
  }
  if (!(cap_half_aperture_deg > 0.0 && cap_half_aperture_deg <= 90.0)) {
    throw std::invalid_argument(
        fmt::format("cap_half_aperture_deg must be in (0, 90], got {}", cap_half_aperture_deg));
  }
  if (!(chart_halfwidth > 0.0)) {
    throw std::invalid_argument(fmt::format("chart_halfwidth must be > 0, got {}", chart_halfwidth));
  }
}

std::string layout_name(Layout layout) {
  switch (layout) {
    case Layout::kCentralWithPlatform: return "central_with_platform";
    case Layout::kCentral: return "central";
    case Layout::kRing: return "ring";
  }
  throw std::logic_error("unknown layout");
}

Layout layout_from_name(const std::string& name) {
  if (name == "central_with_platform") return Layout::kCentralWithPlatform;
  if (name == "central") return Layout::kCentral;
  if (name == "ring") return Layout::kRing;
  throw std::invalid_argument(fmt::format("unknown layout '{}'", name));
}

std::string symmetry_name(SymmetryLine line) {
  switch (line) {
    case SymmetryLine::kAEqNegB: return "line_a_eq_neg_b";
    case SymmetryLine::kAEqZero: return "line_a_eq_0";
  }
  throw std::logic_error("unknown symmetry line");
}

SymmetryLine symmetry_from_name(const std::string& name) {
  if (name == "line_a_eq_neg_b") return SymmetryLine::kAEqNegB;
  if (name == "line_a_eq_0") return SymmetryLine::kAEqZero;
  throw std::invalid_argument(fmt::format("unknown symmetry line '{}'", name));
}

std::string SensorConfig::case_ref() const {
  return case_id == 0 ? std::string("custom") : fmt::format("case{}", case_id);
}

SurfacePoint map_ab_to_surface(double a, double b, const DomeSpec& dome) {
  dome.validate();
  const double h = dome.chart_halfwidth;
  if (!(std::abs(a) <= h)) {
    throw std::domain_error(fmt::format("chart coordinate a={} outside [-{}, {}]", a, h, h));
  }
  if (!(std::abs(b) <= h)) {
    throw std::domain_error(fmt::format("chart coordinate b={} outside [-{}, {}]", b, h, h));
  }

  // Concentric square-to-disc: maps the square ring max(|u|,|v|)=c onto the
  // circle of radius c with constant area scale pi/4.
  const double u = a / h;
  const double v = b / h;
  double xd = 0.0;
  double yd = 0.0;
  if (u != 0.0 || v != 0.0) {
    double r, phi;
    if (std::abs(u) > std::abs(v)) {
      r = u;
      phi = (kPi / 4.0) * (v / u);
    } else {
      r = v;
      phi = kPi / 2.0 - (kPi / 4.0) * (u / v);
    }
    xd = r * std::cos(phi);
    yd = r * std::sin(phi);
  }

  const double rho = std::sqrt(xd * xd + yd * yd);
  const double rho2 = std::min(rho * rho, 1.0);
  const double cos_max = std::cos(dome.aperture_rad());
  const double cos_polar = 1.0 - rho2 * (1.0 - cos_max);
  const double sin_polar = std::sqrt(std::max(0.0, 1.0 - cos_polar * cos_polar));
  double cos_az = 1.0;
  double sin_az = 0.0;
  if (rho > 0.0) {
    cos_az = xd / rho;
    sin_az = yd / rho;
  }

  SurfacePoint p;
  p.a = a;
  p.b = b;
  p.normal = Eigen::Vector3d(sin_polar * cos_az, sin_polar * sin_az, cos_polar);
  p.position = dome.sphere_radius_mm * p.normal;
  return p;
}

std::pair<double, double> surface_to_ab(const Eigen::Vector3d& position, const DomeSpec& dome) {
  dome.validate();
  const double r = position.norm();
  if (r <= 0.0) throw std::domain_error("surface point at the sphere center");
  const double cos_max = std::cos(dome.aperture_rad());
  const double cos_polar = std::clamp(position.z() / r, -1.0, 1.0);
  double rho2 = (1.0 - cos_polar) / (1.0 - cos_max);
  if (rho2 > 1.0 + 1e-9) {
    throw std::domain_error(fmt::format("point at polar angle {:.4f} deg lies outside the cap",
                                        rad_to_deg(std::acos(cos_polar))));
  }
  const double rho = std::sqrt(std::clamp(rho2, 0.0, 1.0));
  if (rho == 0.0) return {0.0, 0.0};

  // Invert the concentric map octant by octant.
  const double theta = std::atan2(position.y(), position.x());
  double u, v;
  if (theta >= -kPi / 4.0 && theta <= kPi / 4.0) {
    u = rho;
    v = (4.0 / kPi) * theta * u;
  } else if (theta >= kPi / 4.0 && theta <= 3.0 * kPi / 4.0) {
    v = rho;
    u = (4.0 / kPi) * (kPi / 2.0 - theta) * v;
  } else if (theta <= -kPi / 4.0 && theta >= -3.0 * kPi / 4.0) {
    v = -rho;
    u = (4.0 / kPi) * (kPi / 2.0 - (theta + kPi)) * v;
  } else {
    u = -rho;
    const double phi = theta - std::copysign(kPi, theta);
    v = (4.0 / kPi) * phi * u;
  }
  return {u * dome.chart_halfwidth, v * dome.chart_halfwidth};
}

std::vector<double> chart_axis(const DomeSpec& dome, int per_axis) {
  dome.validate();
  if (per_axis < 2) throw std::domain_error(fmt::format("per_axis must be >= 2, got {}", per_axis));
  const double h = dome.chart_halfwidth;
  const double step = 2.0 * h / (per_axis - 1);
  std::vector<double> axis(per_axis);
  for (int i = 0; i < per_axis / 2; ++i) {
    axis[i] = -h + i * step;
    axis[per_axis - 1 - i] = -axis[i];
  }
  if (per_axis % 2 == 1) axis[per_axis / 2] = 0.0;
  return axis;
}

ChartGrid make_training_grid(const DomeSpec& dome, int per_axis) {
  const std::vector<double> axis = chart_axis(dome, per_axis);
  ChartGrid grid;
  grid.per_axis_count = per_axis;
  grid.locations.reserve(static_cast<std::size_t>(per_axis) * per_axis);
  for (double a : axis) {
    for (double b : axis) grid.locations.emplace_back(a, b);
  }
  return grid;
}

std::vector<std::pair<double, double>> make_test_locations(const DomeSpec& dome, int count,
                                                           std::uint64_t seed) {
  dome.validate();
  if (count < 1) throw std::domain_error(fmt::format("count must be >= 1, got {}", count));
  const double h = dome.chart_halfwidth;
  Rng rng(seed);
  std::vector<std::pair<double, double>> locations;
  locations.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double a = rng.next_in(-h, h);
    const double b = rng.next_in(-h, h);
    locations.emplace_back(a, b);
  }
  return locations;
}

std::pair<double, double> reflect_ab(double a, double b, SymmetryLine line) {
  switch (line) {
    case SymmetryLine::kAEqNegB: return {-b, -a};
    case SymmetryLine::kAEqZero: return {-a, b};
  }
  throw std::logic_error("unknown symmetry line");
}

Eigen::Vector3d reflect_xyz(const Eigen::Vector3d& v, SymmetryLine line) {
  switch (line) {
    case SymmetryLine::kAEqNegB: return {-v.y(), -v.x(), v.z()};
    case SymmetryLine::kAEqZero: return {-v.x(), v.y(), v.z()};
  }
  throw std::logic_error("unknown symmetry line");
}

namespace {

// Radial distance from the dome axis at which a sensor on plane z = plane_z
// with mounting angle `angle_rad` sees the cap at `standoff` along its
// normal. Closed form: the hit point q = s + standoff * n must satisfy
// |q| = R, which fixes the hit circle radius sqrt(R^2 - hit_z^2).
double solved_radial_distance(double angle_rad, double plane_z, double standoff,
                              const DomeSpec& dome, int case_id, int sensor_index) {
  const double R = dome.sphere_radius_mm;
  const double hit_z = plane_z + standoff * std::cos(angle_rad);
  const double disc = R * R - hit_z * hit_z;
  if (!(disc > 0.0)) {
    throw std::runtime_error(fmt::format(
        "case {} sensor {}: normal ray misses the cap (hit height {:.3f} mm vs radius {:.3f} mm)",
        case_id, sensor_index, hit_z, R));
  }
  const double d = standoff * std::sin(angle_rad) + std::sqrt(disc);
  const double polar = std::atan2(std::sqrt(disc), hit_z);
  if (polar > dome.aperture_rad() + 1e-9) {
    throw std::runtime_error(
        fmt::format("case {} sensor {}: normal ray exits below the cap rim (polar {:.2f} deg)",
                    case_id, sensor_index, rad_to_deg(polar)));
  }
  return d;
}

void check_inside_volume(const Eigen::Vector3d& s, const DomeSpec& dome, int case_id,
                         int sensor_index) {
  const double R = dome.sphere_radius_mm;
  const double base_z = dome.base_plane_z();
  const double lateral = std::hypot(s.x(), s.y());
  const double cap_radius_here = std::sqrt(std::max(0.0, R * R - s.z() * s.z()));
  if (!(s.norm() < R && s.z() > base_z && lateral < cap_radius_here)) {
    throw std::runtime_error(fmt::format(
        "case {} sensor {}: sampling point ({:.3f}, {:.3f}, {:.3f}) lies outside the dome volume",
        case_id, sensor_index, s.x(), s.y(), s.z()));
  }
}

// The hit point of the sensor's normal ray on the sphere must lie on the cap.
void check_ray_hits_cap(const SensorPose& pose, const DomeSpec& dome, int case_id,
                        int sensor_index) {
  const double R = dome.sphere_radius_mm;
  const double b = pose.position_mm.dot(pose.normal);
  const double c = pose.position_mm.squaredNorm() - R * R;
  const double disc = b * b - c;
  const double t = disc > 0.0 ? -b + std::sqrt(disc) : -1.0;
  if (!(t > 0.0)) {
    throw std::runtime_error(fmt::format(
        "case {} sensor {}: normal ray does not reach the surface", case_id, sensor_index));
  }
  const Eigen::Vector3d hit = pose.position_mm + t * pose.normal;
  const double polar = std::atan2(std::hypot(hit.x(), hit.y()), hit.z());
  if (polar > dome.aperture_rad() + 1e-9) {
    throw std::runtime_error(
        fmt::format("case {} sensor {}: normal ray exits below the cap rim (polar {:.2f} deg)",
                    case_id, sensor_index, rad_to_deg(polar)));
  }
}

SensorPose placed_pose(double radial_distance, double angle_rad, double azimuth_rad,
                       double plane_z, const DomeSpec& dome, int case_id, int sensor_index) {
  const double ca = std::cos(azimuth_rad);
  const double sa = std::sin(azimuth_rad);
  SensorPose pose;
  pose.position_mm = Eigen::Vector3d(radial_distance * ca, radial_distance * sa, plane_z);
  // Positive mounting angle tilts the normal toward the dome axis.
  pose.normal =
      Eigen::Vector3d(-std::sin(angle_rad) * ca, -std::sin(angle_rad) * sa, std::cos(angle_rad));
  check_inside_volume(pose.position_mm, dome, case_id, sensor_index);
  check_ray_hits_cap(pose, dome, case_id, sensor_index);
  return pose;
}

}  // namespace

SensorConfig build_case(int case_id, const DomeSpec& dome, const PlacementParams& placement) {
  dome.validate();
  if (case_id < 1 || case_id > 10) {
    throw std::invalid_argument(fmt::format("case_id must be in 1..10, got {}", case_id));
  }
  const CaseDef& def = kStockCases[case_id - 1];

  SensorConfig config;
  config.case_id = case_id;
  config.layout = def.layout;
  config.mounting_angle_deg = def.mounting_angle_deg;
  config.surface_standoff_mm = placement.surface_standoff_mm;

  const double plane_z = dome.base_plane_z() + placement.sensor_plane_height_mm;
  const double angle = deg_to_rad(def.mounting_angle_deg);
  const double standoff = placement.surface_standoff_mm;

  if (def.layout == Layout::kRing) {
    // Ring radius grows with the mounting angle so the tilted normal still
    // meets the cap at the configured standoff.
    config.symmetry = SymmetryLine::kAEqZero;
    const double d = solved_radial_distance(angle, plane_z, standoff, dome, case_id, 0);
    for (int j = 0; j < kSensorCount; ++j) {
      const double azimuth = deg_to_rad(90.0 + 72.0 * j);
      config.sensors[j] = placed_pose(d, angle, azimuth, plane_z, dome, case_id, j);
    }
  } else {
    // Central cases share one peripheral ring, the one solved for the flat
    // mounting; only the mounting angle changes between them.
    config.symmetry = SymmetryLine::kAEqNegB;
    const double d = solved_radial_distance(0.0, plane_z, standoff, dome, case_id, 1);
    // Central sensor: on the plane when flat or platformed, recessed when the
    // peripherals are tilted and there is no platform.
    double central_z = plane_z;
    if (def.mounting_angle_deg != 0.0 && def.layout == Layout::kCentral) {
      central_z = plane_z - placement.central_recess_mm;
    }
    SensorPose central;
    central.position_mm = Eigen::Vector3d(0.0, 0.0, central_z);
    central.normal = Eigen::Vector3d::UnitZ();
    check_inside_volume(central.position_mm, dome, case_id, 0);
    check_ray_hits_cap(central, dome, case_id, 0);
    config.sensors[0] = central;
    for (int j = 1; j < kSensorCount; ++j) {
      const double azimuth = deg_to_rad(90.0 * (j - 1));
      config.sensors[j] = placed_pose(d, angle, azimuth, plane_z, dome, case_id, j);
    }
  }

  config.mirror_permutation = sensor_mirror_permutation(config);
  return config;
}

std::array<int, kSensorCount> sensor_mirror_permutation(const SensorConfig& config) {
  if (!config.symmetry) {
    throw std::invalid_argument("configuration has no symmetry line descriptor");
  }
  const SymmetryLine line = *config.symmetry;
  constexpr double kTol = 1e-9;
  std::array<int, kSensorCount> perm{};
  for (int j = 0; j < kSensorCount; ++j) {
    const Eigen::Vector3d mpos = reflect_xyz(config.sensors[j].position_mm, line);
    const Eigen::Vector3d mnormal = reflect_xyz(config.sensors[j].normal, line);
    int match = -1;
    for (int k = 0; k < kSensorCount; ++k) {
      if ((config.sensors[k].position_mm - mpos).norm() <= kTol &&
          (config.sensors[k].normal - mnormal).norm() <= kTol) {
        if (match >= 0) {
          throw std::invalid_argument(fmt::format(
              "sensor {} has multiple mirror candidates; sampling points coincide", j));
        }
        match = k;
      }
    }
    if (match < 0) {
      throw std::invalid_argument(fmt::format(
          "layout is not mirror symmetric about {}: sensor {} has no counterpart",
          symmetry_name(line), j));
    }
    perm[j] = match;
  }
  for (int j = 0; j < kSensorCount; ++j) {
    if (perm[perm[j]] != j) {
      throw std::invalid_argument("mirror permutation is not an involution");
    }
  }
  return perm;
}

}  // namespace domeloc
