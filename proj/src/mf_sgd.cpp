#include "eigml/mf_sgd.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "eigml/errors.hpp"

namespace eigml {

void MFConfig::validate() const {
  if (n_users <= 0 || n_items <= 0 || n_factors <= 0) {
    throw ConfigError("n_users, n_items, n_factors must be positive.");
  }
  if (!(lr > 0.0) || !std::isfinite(lr)) {
    throw ConfigError("learning rate must be positive.");
  }
  if (!(reg >= 0.0) || !std::isfinite(reg)) {
    throw ConfigError("regularization must be non-negative.");
  }
  if (n_epochs <= 0) {
    throw ConfigError("n_epochs must be positive.");
  }
}

MatrixFactorizationSGD::MatrixFactorizationSGD(const MFConfig& config, Uninitialized)
    : config_((config.validate(), config)),
      p_(config.n_users, config.n_factors),
      q_(config.n_items, config.n_factors),
      bu_(Vector::Zero(config.n_users)),
      bi_(Vector::Zero(config.n_items)),
      rng_(config.seed) {}

MatrixFactorizationSGD::MatrixFactorizationSGD(const MFConfig& config)
    : MatrixFactorizationSGD(config, Uninitialized{}) {
  initialize_parameters();
}

MatrixFactorizationSGD MatrixFactorizationSGD::from_parameters(const MFConfig& config, Matrix p,
                                                               Matrix q, Vector bu, Vector bi,
                                                               double global_mean,
                                                               const std::string& rng_state) {
  MatrixFactorizationSGD model(config, Uninitialized{});
  if (p.rows() != config.n_users || p.cols() != config.n_factors) {
    throw DimensionError("user factor matrix must be n_users x n_factors.");
  }
  if (q.rows() != config.n_items || q.cols() != config.n_factors) {
    throw DimensionError("item factor matrix must be n_items x n_factors.");
  }
  if (bu.size() != config.n_users) {
    throw DimensionError("user bias length must equal n_users.");
  }
  if (bi.size() != config.n_items) {
    throw DimensionError("item bias length must equal n_items.");
  }
  model.p_ = std::move(p);
  model.q_ = std::move(q);
  model.bu_ = std::move(bu);
  model.bi_ = std::move(bi);
  model.global_mean_ = global_mean;
  if (!rng_state.empty()) {
    std::istringstream in(rng_state);
    in >> model.rng_;
    if (in.fail()) {
      throw FormatError("invalid random generator state.");
    }
  }
  return model;
}

void MatrixFactorizationSGD::initialize_parameters() {
  std::normal_distribution<double> dist(0.0, 0.1);

  for (Eigen::Index u = 0; u < p_.rows(); ++u) {
    for (Eigen::Index k = 0; k < p_.cols(); ++k) {
      p_(u, k) = dist(rng_);
    }
  }
  for (Eigen::Index i = 0; i < q_.rows(); ++i) {
    for (Eigen::Index k = 0; k < q_.cols(); ++k) {
      q_(i, k) = dist(rng_);
    }
  }

  bu_.setZero();
  bi_.setZero();
  global_mean_ = 0.0;
}

void MatrixFactorizationSGD::check_user(std::int64_t user) const {
  if (user < 0 || user >= config_.n_users) {
    throw IndexError("user index out of range. (user " + std::to_string(user) + ", n_users " +
                     std::to_string(config_.n_users) + ")");
  }
}

void MatrixFactorizationSGD::check_item(std::int64_t item) const {
  if (item < 0 || item >= config_.n_items) {
    throw IndexError("item index out of range. (item " + std::to_string(item) + ", n_items " +
                     std::to_string(config_.n_items) + ")");
  }
}

void MatrixFactorizationSGD::validate_indices(std::span<const Rating> ratings) const {
  for (const auto& r : ratings) {
    check_user(r.user);
    check_item(r.item);
  }
}

double MatrixFactorizationSGD::predict_unchecked(Eigen::Index u, Eigen::Index i) const {
  // Single summation path shared by predict, full_prediction and training.
  double dot = 0.0;
  for (Eigen::Index k = 0; k < p_.cols(); ++k) {
    dot += p_(u, k) * q_(i, k);
  }
  return global_mean_ + bu_(u) + bi_(i) + dot;
}

void MatrixFactorizationSGD::sgd_step(const Rating& r) {
  const auto u = static_cast<Eigen::Index>(r.user);
  const auto i = static_cast<Eigen::Index>(r.item);
  const double lr = config_.lr;
  const double reg = config_.reg;

  const double err = r.value - predict_unchecked(u, i);

  // Factor updates read the rows as they were before this step.
  const RowVector pu = p_.row(u);
  const RowVector qi = q_.row(i);

  bu_(u) += lr * (err - reg * bu_(u));
  bi_(i) += lr * (err - reg * bi_(i));

  p_.row(u) += lr * (err * qi - reg * pu);
  q_.row(i) += lr * (err * pu - reg * qi);
}

std::vector<EpochReport> MatrixFactorizationSGD::fit(std::span<const Rating> ratings, bool verbose,
                                                     std::ostream* log) {
  if (ratings.empty()) {
    throw EmptyInputError("ratings must not be empty.");
  }
  validate_indices(ratings);

  global_mean_ = 0.0;
  for (const auto& r : ratings) {
    global_mean_ += r.value;
  }
  global_mean_ /= static_cast<double>(ratings.size());

  std::ostream& out = log != nullptr ? *log : std::cout;
  std::vector<Rating> shuffled(ratings.begin(), ratings.end());
  std::vector<EpochReport> reports;
  reports.reserve(static_cast<std::size_t>(config_.n_epochs));

  for (std::int64_t epoch = 1; epoch <= config_.n_epochs; ++epoch) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng_);
    for (const auto& r : shuffled) {
      sgd_step(r);
    }

    const double train_rmse = rmse(ratings);
    reports.push_back({epoch, train_rmse});
    if (verbose) {
      out << "[Epoch " << epoch << "/" << config_.n_epochs << "] RMSE = " << train_rmse << '\n';
      out.flush();
    }
  }
  return reports;
}

double MatrixFactorizationSGD::predict(std::int64_t user, std::int64_t item) const {
  check_user(user);
  check_item(item);
  return predict_unchecked(static_cast<Eigen::Index>(user), static_cast<Eigen::Index>(item));
}

Matrix MatrixFactorizationSGD::full_prediction() const {
  // Equivalent to mu + bu (column broadcast) + bi^T (row broadcast) + P Q^T,
  // evaluated entrywise so each cell matches predict() exactly.
  Matrix pred(config_.n_users, config_.n_items);
  for (Eigen::Index u = 0; u < pred.rows(); ++u) {
    for (Eigen::Index i = 0; i < pred.cols(); ++i) {
      pred(u, i) = predict_unchecked(u, i);
    }
  }
  return pred;
}

double MatrixFactorizationSGD::rmse(std::span<const Rating> ratings) const {
  if (ratings.empty()) {
    throw EmptyInputError("ratings must not be empty.");
  }
  double sse = 0.0;
  for (const auto& r : ratings) {
    const double err = r.value - predict(r.user, r.item);
    sse += err * err;
  }
  return std::sqrt(sse / static_cast<double>(ratings.size()));
}

std::string MatrixFactorizationSGD::rng_state() const {
  std::ostringstream out;
  out << rng_;
  return out.str();
}

}  // namespace eigml
