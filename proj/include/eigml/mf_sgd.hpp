#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "eigml/types.hpp"

namespace eigml {

/// One observed rating r_ui.
struct Rating {
  std::int64_t user = 0;
  std::int64_t item = 0;
  double value = 0.0;
};

/// Hyperparameters of the biased factorization model. Defaults follow the
/// reference binding: k = 10, lr = 0.01, reg = 0.02, 20 epochs, seed 42.
struct MFConfig {
  std::int64_t n_users = 0;
  std::int64_t n_items = 0;
  std::int64_t n_factors = 10;
  double lr = 0.01;
  double reg = 0.02;
  std::int64_t n_epochs = 20;
  std::uint32_t seed = 42;

  /// Throws ConfigError naming the violated bound.
  void validate() const;
};

struct EpochReport {
  std::int64_t epoch = 0;  // 1-based
  double train_rmse = 0.0;
};

/// Biased matrix factorization r_ui ~ mu + b_u + b_i + p_u . q_i trained by
/// per-observation SGD.
///
/// Randomness comes from a single std::mt19937 seeded with config.seed: the
/// factor draws (all of P row by row, then all of Q) come first, and every
/// epoch's shuffle continues the same stream. The same config and ratings
/// therefore always reproduce the same parameters bit-for-bit.
class MatrixFactorizationSGD {
 public:
  /// Draws P and Q from Normal(0, 0.1), zeroes the biases and sets mu = 0.
  explicit MatrixFactorizationSGD(const MFConfig& config);

  /// Reassembles a model from explicit parameters. `rng_state` is the text
  /// form produced by rng_state(); an empty string reseeds from config.seed.
  static MatrixFactorizationSGD from_parameters(const MFConfig& config, Matrix p, Matrix q,
                                                Vector bu, Vector bi, double global_mean,
                                                const std::string& rng_state = {});

  /// Sets mu to the mean rating and runs config.n_epochs shuffled SGD passes.
  /// Returns the training RMSE after every epoch; with `verbose` each report is
  /// also written to `log` (stdout when null) as "[Epoch e/T] RMSE = r".
  std::vector<EpochReport> fit(std::span<const Rating> ratings, bool verbose = true,
                               std::ostream* log = nullptr);

  double predict(std::int64_t user, std::int64_t item) const;

  /// n_users x n_items matrix; entry (u, i) is bit-identical to predict(u, i).
  Matrix full_prediction() const;

  double rmse(std::span<const Rating> ratings) const;

  const MFConfig& config() const noexcept { return config_; }
  const Matrix& user_factors() const noexcept { return p_; }
  const Matrix& item_factors() const noexcept { return q_; }
  const Vector& user_bias() const noexcept { return bu_; }
  const Vector& item_bias() const noexcept { return bi_; }
  double global_mean() const noexcept { return global_mean_; }

  /// Serialized generator state (std::mt19937 stream format).
  std::string rng_state() const;

 private:
  struct Uninitialized {};
  MatrixFactorizationSGD(const MFConfig& config, Uninitialized);

  void initialize_parameters();
  void validate_indices(std::span<const Rating> ratings) const;
  void check_user(std::int64_t user) const;
  void check_item(std::int64_t item) const;
  double predict_unchecked(Eigen::Index u, Eigen::Index i) const;
  void sgd_step(const Rating& r);

  MFConfig config_;
  double global_mean_ = 0.0;
  Matrix p_;
  Matrix q_;
  Vector bu_;
  Vector bi_;
  std::mt19937 rng_;
};

}  // namespace eigml
