#include "domeloc/model_selection.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "domeloc/random.hpp"
#include "domeloc/stats.hpp"

namespace domeloc {

TrainingTable make_training_table(const Dataset& dataset, double min_depth_mm) {
  std::vector<const Sample*> rows;
  for (const Sample& s : dataset.samples) {
    if (s.contact && s.depth_mm >= min_depth_mm) rows.push_back(&s);
  }
  if (rows.empty()) {
    throw std::invalid_argument(fmt::format(
        "no contact rows at depth >= {} mm; dataset has {} rows", min_depth_mm,
        dataset.samples.size()));
  }
  TrainingTable table;
  table.inputs.resize(static_cast<Eigen::Index>(rows.size()), kSensorCount);
  table.targets.resize(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int c = 0; c < kSensorCount; ++c) table.inputs(i, c) = rows[i]->readings[c];
    table.targets(i, 0) = rows[i]->a;
    table.targets(i, 1) = rows[i]->b;
  }
  return table;
}

std::vector<std::vector<int>> kfold_assignments(int row_count, int k, std::uint64_t shuffle_seed) {
  if (k < 2) throw std::invalid_argument(fmt::format("k must be >= 2, got {}", k));
  if (k > row_count) {
    throw std::invalid_argument(
        fmt::format("k = {} exceeds the {} available rows", k, row_count));
  }
  std::vector<int> order(row_count);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(shuffle_seed);
  shuffle_in_place(order, rng);

  std::vector<std::vector<int>> folds(k);
  const int base = row_count / k;
  const int extra = row_count % k;
  int cursor = 0;
  for (int f = 0; f < k; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    folds[f].assign(order.begin() + cursor, order.begin() + cursor + size);
    cursor += size;
  }
  return folds;
}

std::vector<double> log_grid_axis(int count, double lo, double hi) {
  if (count < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("log grid needs count >= 2 and 0 < lo < hi");
  }
  std::vector<double> axis(count);
  axis.front() = lo;
  axis.back() = hi;
  for (int i = 1; i < count - 1; ++i) {
    axis[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  }
  return axis;
}

namespace {

struct FoldData {
  std::vector<int> train_idx;
  std::vector<int> test_idx;
  Eigen::MatrixXd train_l1;           // pairwise L1 distances, train x train
  Eigen::MatrixXd cross_l1;           // test x train
  Eigen::MatrixXd train_targets;      // chart
};

Eigen::MatrixXd l1_distances(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  Eigen::MatrixXd D(X.rows(), Y.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < Y.rows(); ++j) {
      D(i, j) = (X.row(i) - Y.row(j)).lpNorm<1>();
    }
  }
  return D;
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = m.row(idx[i]);
  return out;
}

// Cartesian distance between the mapped truth and the clamped mapped
// prediction for one held-out row.
double row_error_mm(const Eigen::Vector3d& truth_xyz, double pred_a, double pred_b,
                    const DomeSpec& dome) {
  const double h = dome.chart_halfwidth;
  const double ca = std::clamp(pred_a, -h, h);
  const double cb = std::clamp(pred_b, -h, h);
  return (map_ab_to_surface(ca, cb, dome).position - truth_xyz).norm();
}

std::vector<Eigen::Vector3d> true_surface_points(const Eigen::MatrixXd& targets,
                                                 const DomeSpec& dome) {
  std::vector<Eigen::Vector3d> pts(targets.rows());
  for (Eigen::Index r = 0; r < targets.rows(); ++r) {
    pts[r] = map_ab_to_surface(targets(r, 0), targets(r, 1), dome).position;
  }
  return pts;
}

}  // namespace

double kfold_cv_median_error_mm(const TrainingTable& table, const DomeSpec& dome,
                                Hyperparams hyper, const CvSettings& cv) {
  const int n = static_cast<int>(table.inputs.rows());
  const auto folds = kfold_assignments(n, cv.folds, cv.shuffle_seed);
  const auto truth = true_surface_points(table.targets, dome);

  std::vector<double> errors(n, 0.0);
  for (const auto& test_idx : folds) {
    std::vector<char> held(n, 0);
    for (int r : test_idx) held[r] = 1;
    std::vector<int> train_idx;
    train_idx.reserve(n - test_idx.size());
    for (int r = 0; r < n; ++r) {
      if (!held[r]) train_idx.push_back(r);
    }

    ModelMeta meta;
    meta.scaler.enabled = cv.scale_features;
    const FittedModel model =
        fit(rows_of(table.inputs, train_idx), rows_of(table.targets, train_idx), hyper, dome, meta);
    const Eigen::MatrixXd preds = predict(model, rows_of(table.inputs, test_idx));
    for (std::size_t i = 0; i < test_idx.size(); ++i) {
      errors[test_idx[i]] = row_error_mm(truth[test_idx[i]], preds(i, 0), preds(i, 1), dome);
    }
  }
  return median_of(errors);
}

const GridSearchEntry& pick_best(const std::vector<GridSearchEntry>& entries) {
  if (entries.empty()) throw std::invalid_argument("empty grid");
  const GridSearchEntry* best = &entries.front();
  for (const GridSearchEntry& e : entries) {
    const bool better =
        e.cv_median_error_mm < best->cv_median_error_mm ||
        (e.cv_median_error_mm == best->cv_median_error_mm &&
         (e.gamma < best->gamma || (e.gamma == best->gamma && e.alpha < best->alpha)));
    if (better) best = &e;
  }
  return *best;
}

GridSearchReport grid_search(const TrainingTable& table, const DomeSpec& dome,
                             const CvSettings& cv, int threads) {
  const int n = static_cast<int>(table.inputs.rows());
  const auto folds = kfold_assignments(n, cv.folds, cv.shuffle_seed);
  const auto truth = true_surface_points(table.targets, dome);
  const std::vector<double> alphas = log_grid_axis();
  const std::vector<double> gammas = log_grid_axis();

  // Distances depend only on the fold split (and scaler), so they are shared
  // by every grid cell.
  std::vector<FoldData> fold_data(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    FoldData& fd = fold_data[f];
    fd.test_idx = folds[f];
    std::vector<char> held(n, 0);
    for (int r : fd.test_idx) held[r] = 1;
    for (int r = 0; r < n; ++r) {
      if (!held[r]) fd.train_idx.push_back(r);
    }
    Eigen::MatrixXd train_inputs = rows_of(table.inputs, fd.train_idx);
    Eigen::MatrixXd test_inputs = rows_of(table.inputs, fd.test_idx);
    if (cv.scale_features) {
      const FeatureScaler scaler = FeatureScaler::fit(train_inputs, true);
      train_inputs = scaler.apply(train_inputs);
      test_inputs = scaler.apply(test_inputs);
    }
    fd.train_l1 = l1_distances(train_inputs, train_inputs);
    fd.cross_l1 = l1_distances(test_inputs, train_inputs);
    fd.train_targets = rows_of(table.targets, fd.train_idx);
  }

  const int cells = static_cast<int>(gammas.size() * alphas.size());
  std::vector<std::vector<double>> cell_errors(cells, std::vector<double>(n, 0.0));

  int worker_count = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  worker_count = std::clamp(worker_count, 1, static_cast<int>(gammas.size()));

  std::atomic<std::size_t> next_gamma{0};
  auto run_gamma = [&](std::size_t g) {
    for (std::size_t f = 0; f < fold_data.size(); ++f) {
      const FoldData& fd = fold_data[f];
      const Eigen::MatrixXd K = (-gammas[g] * fd.train_l1.array()).exp();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
      if (es.info() != Eigen::Success) {
        throw std::runtime_error(
            fmt::format("eigendecomposition failed for gamma {:.3e}", gammas[g]));
      }
      const Eigen::MatrixXd cross = (-gammas[g] * fd.cross_l1.array()).exp();
      const Eigen::MatrixXd qt_targets = es.eigenvectors().transpose() * fd.train_targets;
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        const Eigen::ArrayXd inv = 1.0 / (es.eigenvalues().array() + alphas[a]);
        const Eigen::MatrixXd dual =
            es.eigenvectors() * (inv.matrix().asDiagonal() * qt_targets);
        const Eigen::MatrixXd preds = cross * dual;
        std::vector<double>& errs = cell_errors[g * alphas.size() + a];
        for (std::size_t i = 0; i < fd.test_idx.size(); ++i) {
          errs[fd.test_idx[i]] =
              row_error_mm(truth[fd.test_idx[i]], preds(i, 0), preds(i, 1), dome);
        }
      }
    }
  };

  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t g = next_gamma.fetch_add(1);
      if (g >= gammas.size()) return;
      try {
        run_gamma(g);
      } catch (...) {
        const std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (worker_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (int w = 0; w < worker_count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  GridSearchReport report;
  report.fold_seed = cv.shuffle_seed;
  report.grid.reserve(cells);
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      GridSearchEntry entry;
      entry.alpha = alphas[a];
      entry.gamma = gammas[g];
      entry.cv_median_error_mm = median_of(cell_errors[g * alphas.size() + a]);
      report.grid.push_back(entry);
    }
  }
  const GridSearchEntry& best = pick_best(report.grid);
  report.best = Hyperparams{best.alpha, best.gamma};
  report.best_cv_median_error_mm = best.cv_median_error_mm;
  return report;
}

}  // namespace domeloc
