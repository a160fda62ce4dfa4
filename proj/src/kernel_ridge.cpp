#include "eigml/kernel_ridge.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "eigml/errors.hpp"

namespace eigml {

namespace {

double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  // Fixed summation order keeps d(a_i, b_j) == d(b_j, a_i) bit-for-bit.
  double acc = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double diff = a(i, k) - b(j, k);
    acc += diff * diff;
  }
  return acc;
}

void require_positive_sigma(double sigma) {
  if (!(sigma > 0.0)) {
    throw ConfigError("sigma must be positive.");
  }
}

}  // namespace

KernelRidgeConfig::KernelRidgeConfig(double lambda, double sigma) : lambda_(lambda), sigma_(sigma) {
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) {
    throw ConfigError("lambda must be non-negative.");
  }
  if (!std::isfinite(sigma_)) {
    throw ConfigError("sigma must be positive.");
  }
  require_positive_sigma(sigma_);
}

Matrix kernel_matrix(const Matrix& a, const Matrix& b, double sigma) {
  require_positive_sigma(sigma);
  if (a.cols() != b.cols()) {
    throw DimensionError("A and B must have the same number of columns.");
  }

  const double scale = 1.0 / (2.0 * sigma * sigma);
  const Eigen::Index n1 = a.rows();
  const Eigen::Index n2 = b.rows();
  Matrix k(n1, n2);

  if (&a == &b) {
    for (Eigen::Index i = 0; i < n1; ++i) {
      k(i, i) = 1.0;
      for (Eigen::Index j = i + 1; j < n2; ++j) {
        const double v = std::exp(-squared_distance(a, i, b, j) * scale);
        k(i, j) = v;
        k(j, i) = v;
      }
    }
    return k;
  }

  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n2; ++j) {
      k(i, j) = std::exp(-squared_distance(a, i, b, j) * scale);
    }
  }
  return k;
}

KernelRidgeModel::KernelRidgeModel(KernelRidgeConfig config, Matrix x_train, Vector alpha, double y_mean)
    : config_(config), x_train_(std::move(x_train)), alpha_(std::move(alpha)), y_mean_(y_mean) {
  if (alpha_.size() != x_train_.rows()) {
    throw DimensionError("alpha length (" + std::to_string(alpha_.size()) +
                         ") must match the number of training rows (" +
                         std::to_string(x_train_.rows()) + ").");
  }
  if (x_train_.rows() == 0) {
    throw DimensionError("training set must not be empty.");
  }
}

Vector KernelRidgeModel::predict(const Matrix& x_new) const {
  if (x_new.cols() != x_train_.cols()) {
    throw DimensionError("X_new has " + std::to_string(x_new.cols()) +
                         " columns but the model was trained on " +
                         std::to_string(x_train_.cols()) + ".");
  }
  const Matrix k_new = kernel_matrix(x_new, x_train_, config_.sigma());
  Vector pred = k_new * alpha_;
  pred.array() += y_mean_;
  return pred;
}

KernelRidgeModel fit_kernel_ridge(const Matrix& x, const Vector& y, const KernelRidgeConfig& config) {
  if (x.rows() != y.size()) {
    throw DimensionError("Number of rows in X must match length of y (X has " +
                         std::to_string(x.rows()) + " rows, y has " +
                         std::to_string(y.size()) + " entries).");
  }
  if (x.rows() == 0) {
    throw DimensionError("training set must not be empty.");
  }

  const Eigen::Index n = x.rows();
  const double y_mean = y.mean();
  const Vector y_centered = y.array() - y_mean;

  Eigen::MatrixXd system = kernel_matrix(x, x, config.sigma());
  system.diagonal().array() += config.lambda();

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
  if (ldlt.info() != Eigen::Success) {
    throw FactorizationError("LDLT factorization of (K + lambda I) failed.");
  }
  // K + lambda I is positive semi-definite; a pivot at round-off level relative
  // to the largest one means it is singular for practical purposes.
  const auto d = ldlt.vectorD().array();
  const double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * d.abs().maxCoeff();
  if (!(d.minCoeff() > tol)) {
    throw FactorizationError(
        "(K + lambda I) is singular; use lambda > 0 or remove duplicate training rows.");
  }

  Vector alpha = ldlt.solve(y_centered);
  return KernelRidgeModel(config, x, std::move(alpha), y_mean);
}

double solver_residual(const KernelRidgeModel& model, const Vector& y) {
  if (y.size() != model.x_train().rows()) {
    throw DimensionError("y length must match the number of training rows.");
  }
  const Matrix& x = model.x_train();
  Matrix system = kernel_matrix(x, x, model.sigma());
  system.diagonal().array() += model.lambda();
  const Vector y_centered = y.array() - model.y_mean();
  return (system * model.alpha() - y_centered).lpNorm<Eigen::Infinity>();
}

KernelRidge::KernelRidge(double lambda, double sigma) : config_(lambda, sigma) {}

void KernelRidge::fit(const Matrix& x, const Vector& y) {
  model_.emplace(fit_kernel_ridge(x, y, config_));
}

Vector KernelRidge::predict(const Matrix& x_new) const {
  return model().predict(x_new);
}

const KernelRidgeModel& KernelRidge::model() const {
  if (!model_) {
    throw NotFittedError("Model has not been fitted yet.");
  }
  return *model_;
}

}  // namespace eigml
