#include "domeloc/kernel_ridge.hpp"

#include <fmt/format.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace domeloc {

FeatureScaler FeatureScaler::fit(const Eigen::MatrixXd& inputs, bool enabled) {
  FeatureScaler scaler;
  scaler.enabled = enabled;
  if (!enabled) return scaler;
  scaler.mean = inputs.colwise().mean();
  Eigen::MatrixXd centered = inputs.rowwise() - scaler.mean;
  scaler.stddev = (centered.array().square().colwise().mean()).sqrt();
  for (Eigen::Index c = 0; c < scaler.stddev.size(); ++c) {
    if (scaler.stddev(c) < 1e-12) scaler.stddev(c) = 1.0;  // constant feature
  }
  return scaler;
}

Eigen::MatrixXd FeatureScaler::apply(const Eigen::MatrixXd& inputs) const {
  if (!enabled) return inputs;
  return (inputs.rowwise() - mean).array().rowwise() / stddev.array();
}

Eigen::MatrixXd laplacian_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument(fmt::format("gamma must be finite and >= 0, got {}", gamma));
  }
  if (!X.allFinite() || !Y.allFinite()) {
    throw std::invalid_argument("kernel inputs contain non-finite values");
  }
  if (X.cols() != Y.cols()) {
    throw std::invalid_argument(
        fmt::format("feature count mismatch: {} vs {}", X.cols(), Y.cols()));
  }
  Eigen::MatrixXd K(X.rows(), Y.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < Y.rows(); ++j) {
      K(i, j) = std::exp(-gamma * (X.row(i) - Y.row(j)).lpNorm<1>());
    }
  }
  return K;
}

namespace {

Eigen::MatrixXd solve_dual(const Eigen::MatrixXd& K, const Eigen::MatrixXd& targets,
                           double alpha) {
  Eigen::MatrixXd system = K;
  system.diagonal().array() += alpha;
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() == Eigen::Success) return llt.solve(targets);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const double lam_min = es.eigenvalues().minCoeff() + alpha;
  const double lam_max = es.eigenvalues().maxCoeff() + alpha;
  const double cond = lam_min > 0.0 ? lam_max / lam_min : std::numeric_limits<double>::infinity();
  if (!(lam_min > 0.0) || cond > 1e14) {
    throw std::runtime_error(fmt::format(
        "ridge system is ill-conditioned: estimated condition number {:.3e}", cond));
  }
  const Eigen::ArrayXd inv = 1.0 / (es.eigenvalues().array() + alpha);
  return es.eigenvectors() *
         (inv.matrix().asDiagonal() * (es.eigenvectors().transpose() * targets));
}

}  // namespace

FittedModel fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& targets, Hyperparams hyper,
                const DomeSpec& dome, ModelMeta meta) {
  if (X.rows() < 1) throw std::invalid_argument("training set is empty");
  if (X.rows() != targets.rows()) {
    throw std::invalid_argument(
        fmt::format("row count mismatch: {} inputs vs {} targets", X.rows(), targets.rows()));
  }
  if (!(hyper.alpha > 0.0)) {
    throw std::invalid_argument(fmt::format("alpha must be > 0, got {}", hyper.alpha));
  }
  if (!targets.allFinite()) throw std::invalid_argument("targets contain non-finite values");

  if (meta.scaler.enabled && meta.scaler.mean.size() == 0) {
    meta.scaler = FeatureScaler::fit(X, true);
  }
  FittedModel model;
  model.train_inputs = meta.scaler.apply(X);
  model.hyper = hyper;
  model.dome = dome;
  model.meta = std::move(meta);
  const Eigen::MatrixXd K = laplacian_kernel(model.train_inputs, model.train_inputs, hyper.gamma);
  model.dual_coefficients = solve_dual(K, targets, hyper.alpha);
  return model;
}

Eigen::MatrixXd predict(const FittedModel& model, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() == 0) return Eigen::MatrixXd(0, model.dual_coefficients.cols());
  const Eigen::MatrixXd scaled = model.meta.scaler.apply(inputs);
  return laplacian_kernel(scaled, model.train_inputs, model.hyper.gamma) *
         model.dual_coefficients;
}

}  // namespace domeloc
