#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "domeloc/geometry.hpp"
#include "domeloc/kernel_ridge.hpp"
#include "domeloc/surrogate.hpp"

namespace domeloc {

/// Regression table extracted from a dataset: contact rows at or beyond the
/// depth filter, inputs are the five readings, targets the chart location.
struct TrainingTable {
  Eigen::MatrixXd inputs;   // n x 5
  Eigen::MatrixXd targets;  // n x 2
};

TrainingTable make_training_table(const Dataset& dataset, double min_depth_mm = 0.5);

/// Deterministic shuffled k-fold split: fold sizes differ by at most one and
/// identical (row_count, k, seed) always gives identical assignments.
std::vector<std::vector<int>> kfold_assignments(int row_count, int k, std::uint64_t shuffle_seed);

struct CvSettings {
  int folds = 5;
  std::uint64_t shuffle_seed = 0;
  bool scale_features = false;
};

/// Median Cartesian localization error (mm) over all held-out rows:
/// per fold, fit on the complement, predict the fold, clamp predictions to
/// the chart and compare surface points.
double kfold_cv_median_error_mm(const TrainingTable& table, const DomeSpec& dome,
                                Hyperparams hyper, const CvSettings& cv);

/// 20 log-spaced values with exact endpoints.
std::vector<double> log_grid_axis(int count = 20, double lo = 1e-5, double hi = 10.0);

struct GridSearchEntry {
  double alpha = 0.0;
  double gamma = 0.0;
  double cv_median_error_mm = 0.0;
};

struct GridSearchReport {
  std::vector<GridSearchEntry> grid;  // gamma-major, alpha ascending
  Hyperparams best;
  double best_cv_median_error_mm = 0.0;
  std::uint64_t fold_seed = 0;
};

/// Lowest score wins; ties prefer smaller gamma, then smaller alpha.
const GridSearchEntry& pick_best(const std::vector<GridSearchEntry>& entries);

/// Exhaustive 20x20 (alpha, gamma) search over [1e-5, 1e1] scored by k-fold
/// median error. One eigendecomposition of the fold kernel per (gamma, fold)
/// is shared across every alpha; cells are independent, so the gamma axis is
/// evaluated on `threads` workers without affecting any value.
GridSearchReport grid_search(const TrainingTable& table, const DomeSpec& dome,
                             const CvSettings& cv, int threads = 0);

}  // namespace domeloc
