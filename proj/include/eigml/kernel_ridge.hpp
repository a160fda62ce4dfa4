#pragma once

#include <optional>

#include "eigml/types.hpp"

namespace eigml {

/// Regularization strength and Gaussian bandwidth for kernel ridge regression.
///
/// lambda >= 0 and sigma > 0 are enforced on construction. lambda == 0 is legal
/// but leaves the system singular whenever two training rows coincide.
class KernelRidgeConfig {
 public:
  KernelRidgeConfig(double lambda, double sigma);

  double lambda() const noexcept { return lambda_; }
  double sigma() const noexcept { return sigma_; }

 private:
  double lambda_;
  double sigma_;
};

/// Gaussian RBF kernel between the rows of `a` and the rows of `b`:
/// K(i, j) = exp(-||a_i - b_j||^2 / (2 sigma^2)).
///
/// When `a` and `b` are the same object the result is built from the upper
/// triangle and mirrored, so it is exactly symmetric with a unit diagonal.
Matrix kernel_matrix(const Matrix& a, const Matrix& b, double sigma);

/// Fitted kernel ridge state. Immutable; safe to share across threads for prediction.
class KernelRidgeModel {
 public:
  /// Reassembles a model from stored fields (used by deserialization).
  /// Throws DimensionError when alpha does not match the training rows.
  KernelRidgeModel(KernelRidgeConfig config, Matrix x_train, Vector alpha, double y_mean);

  const KernelRidgeConfig& config() const noexcept { return config_; }
  const Matrix& x_train() const noexcept { return x_train_; }
  const Vector& alpha() const noexcept { return alpha_; }
  double y_mean() const noexcept { return y_mean_; }
  double lambda() const noexcept { return config_.lambda(); }
  double sigma() const noexcept { return config_.sigma(); }

  /// K(x_new, x_train) * alpha + y_mean.
  Vector predict(const Matrix& x_new) const;

 private:
  KernelRidgeConfig config_;
  Matrix x_train_;
  Vector alpha_;
  double y_mean_;
};

/// Centers y, builds K(x, x) and solves (K + lambda I) alpha = y - mean(y)
/// with a pivoted LDL^T factorization.
///
/// Throws DimensionError for an empty training set or a row/length mismatch,
/// and FactorizationError when the regularized matrix is numerically singular.
KernelRidgeModel fit_kernel_ridge(const Matrix& x, const Vector& y, const KernelRidgeConfig& config);

/// ||(K + lambda I) alpha - (y - y_mean)||_inf for a model fitted on (x_train, y).
double solver_residual(const KernelRidgeModel& model, const Vector& y);

/// Estimator with the fit-then-predict lifecycle of a classic model object.
class KernelRidge {
 public:
  KernelRidge(double lambda, double sigma);

  void fit(const Matrix& x, const Vector& y);
  Vector predict(const Matrix& x_new) const;

  bool fitted() const noexcept { return model_.has_value(); }
  const KernelRidgeConfig& config() const noexcept { return config_; }
  /// Throws NotFittedError before fit().
  const KernelRidgeModel& model() const;

 private:
  KernelRidgeConfig config_;
  std::optional<KernelRidgeModel> model_;
};

}  // namespace eigml
