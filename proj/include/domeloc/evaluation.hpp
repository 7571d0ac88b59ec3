#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "domeloc/geometry.hpp"
#include "domeloc/kernel_ridge.hpp"
#include "domeloc/surrogate.hpp"

namespace domeloc {

struct SummaryStats {
  double median_mm = 0.0;
  double mean_mm = 0.0;
  double std_mm = 0.0;  // population standard deviation
  int count = 0;
};

SummaryStats summarize_errors(const std::vector<double>& errors_mm);

/// Clamp a chart pair to the chart square; second element reports whether
/// clamping changed anything.
std::pair<std::pair<double, double>, bool> clamp_to_chart(double a, double b,
                                                          const DomeSpec& dome);

/// Euclidean distance between the surface mappings of the two chart pairs,
/// both clamped to the chart first.
double cartesian_error(std::pair<double, double> true_ab, std::pair<double, double> predicted_ab,
                       const DomeSpec& dome);

struct ErrorRecord {
  double true_a = 0.0;
  double true_b = 0.0;
  double predicted_a = 0.0;  // clamped
  double predicted_b = 0.0;
  Eigen::Vector3d true_xyz = Eigen::Vector3d::Zero();
  Eigen::Vector3d predicted_xyz = Eigen::Vector3d::Zero();
  double error_mm = 0.0;
  double depth_mm = 0.0;
  bool clamped = false;
};

/// Model evaluation against a labelled dataset. The headline statistics score
/// one error per location, taken at that location's deepest contact row; a
/// per-depth breakdown over all contact rows with depth > 0 is always
/// included. Clamped predictions are flagged and counted, never dropped.
struct EvalReport {
  std::vector<ErrorRecord> per_location;
  SummaryStats summary;
  std::vector<std::pair<double, SummaryStats>> per_depth;  // ascending depth
  int clamped_count = 0;
};

EvalReport evaluate(const FittedModel& model, const Dataset& test_data, const DomeSpec& dome);

/// Taxel-resolution reference: predict the surface point radially above the
/// sampling point of the maximum-reading sensor (ties break to the lowest
/// index). Scored exactly like evaluate(), one row per location at the
/// deepest depth; all-zero reading rows are excluded and counted.
struct BaselineReport {
  SummaryStats summary;
  int excluded_zero_rows = 0;
};

BaselineReport nearest_sensor_baseline(const SensorConfig& config, const Dataset& test_data,
                                       const DomeSpec& dome);

struct CaseSummary {
  std::string case_ref;
  std::string provenance;
  SummaryStats stats;
  std::optional<double> reference_median_mm;
};

/// Rows sorted by ascending median error. Requires at least two rows and
/// distinct case references.
std::vector<CaseSummary> compare_cases(std::vector<CaseSummary> rows);

/// Median localization error (mm) reported by the physical/FEA study of the
/// ten stock layouts; optional context column for comparisons.
std::optional<double> reference_median_mm(int case_id);

}  // namespace domeloc
