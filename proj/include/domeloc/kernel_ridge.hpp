#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "domeloc/geometry.hpp"

namespace domeloc {

struct Hyperparams {
  double alpha = 1.0;  // ridge regularizer, > 0
  double gamma = 0.1;  // Laplacian kernel scale, >= 0
};

/// Optional per-feature standardization. Disabled by default; when enabled
/// the model stores inputs in standardized space and queries are transformed
/// with the training mean/stddev.
struct FeatureScaler {
  bool enabled = false;
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd stddev;

  static FeatureScaler fit(const Eigen::MatrixXd& inputs, bool enabled);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& inputs) const;
};

struct ModelMeta {
  std::string case_ref = "custom";
  std::uint64_t seed_test = 0;
  std::uint64_t seed_shuffle = 0;
  std::uint64_t seed_noise = 0;
  double depth_filter_mm = 0.5;
  FeatureScaler scaler;
};

/// Trained Laplacian-kernel ridge regressor from reading vectors to chart
/// coordinates. Immutable after fit; safe to share across threads.
struct FittedModel {
  Eigen::MatrixXd train_inputs;       // n x 5, in regression (post-scaler) space
  Eigen::MatrixXd dual_coefficients;  // n x 2
  Hyperparams hyper;
  DomeSpec dome;
  ModelMeta meta;
};

/// K[i][j] = exp(-gamma * |X_i - Y_j|_1).
Eigen::MatrixXd laplacian_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double gamma);

/// Solves (K + alpha I) W = targets with K = laplacian_kernel(X, X, gamma).
/// Cholesky first; if that reports a numerical issue, a spectral solve is
/// attempted and an ill-conditioned system raises with the condition
/// estimate. When meta.scaler.enabled is set and the scaler is empty it is
/// fitted on X here.
FittedModel fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& targets, Hyperparams hyper,
                const DomeSpec& dome = {}, ModelMeta meta = {});

/// Chart predictions laplacian_kernel(X*, train) * W. Raw regressor output;
/// evaluation clamps to the chart square before mapping to the surface.
Eigen::MatrixXd predict(const FittedModel& model, const Eigen::MatrixXd& inputs);

}  // namespace domeloc
