#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace domeloc {

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Spherical-cap sensing surface. All 3D coordinates are in mm with the
/// origin at the sphere center: the apex sits at (0, 0, radius) and the base
/// plane of the soft volume at z = radius * cos(aperture).
struct DomeSpec {
  double sphere_radius_mm = 27.0;
  double cap_half_aperture_deg = 45.0;
  double chart_halfwidth = 15.0;

  double aperture_rad() const { return deg_to_rad(cap_half_aperture_deg); }
  double base_plane_z() const;
  double cap_area_mm2() const;
  void validate() const;

  bool operator==(const DomeSpec&) const = default;
};

/// A chart location together with its position and outward normal on the cap.
struct SurfacePoint {
  double a = 0.0;
  double b = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
};

enum class Layout { kCentralWithPlatform, kCentral, kRing };

/// Reflection line of a layout in chart coordinates.
enum class SymmetryLine { kAEqNegB, kAEqZero };

std::string layout_name(Layout layout);
Layout layout_from_name(const std::string& name);
std::string symmetry_name(SymmetryLine line);
SymmetryLine symmetry_from_name(const std::string& name);

inline constexpr int kSensorCount = 5;

struct SensorPose {
  Eigen::Vector3d position_mm = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
};

/// One sensor layout: five interior sampling points with their normals.
///
/// Stock cases 1-10: cases 1-4 are "central" layouts (one sensor on the dome
/// axis, four peripherals 90 degrees apart at azimuths 0/90/180/270) with
/// peripheral mounting angles +25 (platform), 0, -25 and +25 (no platform).
/// Cases 5-10 are five-sensor rings, 72 degrees apart starting at azimuth 90
/// (sensor 0 on the chart symmetry line A=0), with mounting angles
/// 15/25/30/35/40/45.
struct SensorConfig {
  int case_id = 0;  // 1..10 for stock cases, 0 for custom
  Layout layout = Layout::kRing;
  double mounting_angle_deg = 0.0;
  double surface_standoff_mm = 0.0;
  std::array<SensorPose, kSensorCount> sensors{};
  std::optional<SymmetryLine> symmetry;
  std::array<int, kSensorCount> mirror_permutation{0, 1, 2, 3, 4};

  std::string case_ref() const;  // "case8", or "custom" when case_id == 0
};

/// Placement knobs for the stock cases. The published layouts fix mounting
/// angles only, so the embedding geometry is parameterized here: sensors sit
/// on a horizontal plane above the base; ring radii are solved per angle so
/// the tilted normal meets the cap at surface_standoff_mm, while the central
/// cases share the one ring solved for the flat mounting (they differ only in
/// angle). In tilted central layouts the unplatformed central sensor sits
/// central_recess_mm below the plane; the case-1 platform restores it to the
/// plane, which makes its standoff equal the flat layout's central standoff.
struct PlacementParams {
  double sensor_plane_height_mm = 3.0;  // above the base plane
  double surface_standoff_mm = 4.0;     // along each solved sensor normal
  double central_recess_mm = 2.0;
};

/// Row-major regular grid of chart locations (a outer, b inner), endpoints
/// included on both axes.
struct ChartGrid {
  int per_axis_count = 0;
  std::vector<std::pair<double, double>> locations;
};

/// Equal-area map from the chart square onto the cap: concentric
/// square-to-disc, then Lambert disc-to-cap (cos(polar) linear in rho^2) with
/// azimuth preserved. The chart center maps to the apex and the chart edge
/// midpoints to the cap rim.
SurfacePoint map_ab_to_surface(double a, double b, const DomeSpec& dome);

/// Inverse of map_ab_to_surface for points on the cap.
std::pair<double, double> surface_to_ab(const Eigen::Vector3d& position, const DomeSpec& dome);

/// Equally spaced axis values over [-chart_halfwidth, +chart_halfwidth],
/// symmetric about zero bit-for-bit.
std::vector<double> chart_axis(const DomeSpec& dome, int per_axis);

ChartGrid make_training_grid(const DomeSpec& dome, int per_axis);

/// Seeded uniform chart locations; identical (count, seed) gives an identical
/// list so one test set can be reused across every layout.
std::vector<std::pair<double, double>> make_test_locations(const DomeSpec& dome, int count,
                                                           std::uint64_t seed);

SensorConfig build_case(int case_id, const DomeSpec& dome, const PlacementParams& placement = {});

std::pair<double, double> reflect_ab(double a, double b, SymmetryLine line);

/// The cap isometry corresponding to reflect_ab under the chart map.
Eigen::Vector3d reflect_xyz(const Eigen::Vector3d& v, SymmetryLine line);

/// Channel permutation matching the geometric reflection: sensor j's mirror
/// image is sensor perm[j]. Throws if the layout is not mirror symmetric.
std::array<int, kSensorCount> sensor_mirror_permutation(const SensorConfig& config);

}  // namespace domeloc
