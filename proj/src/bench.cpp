#include "eigml/bench.hpp"

#include <chrono>
#include <random>

#include "eigml/errors.hpp"

namespace eigml::bench {

double steady_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

std::pair<Matrix, Vector> gen_synthetic(std::int64_t n, std::int64_t d, std::uint64_t seed) {
  if (n < 1 || d < 1) {
    throw ConfigError("synthetic data needs n >= 1 and d >= 1.");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix x(n, d);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      x(i, j) = uniform(rng);
    }
  }
  Vector y(n);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y(i) = normal(rng);
  }
  return {std::move(x), std::move(y)};
}

BenchRecord time_fit(const Matrix& x, const Vector& y, const KernelRidgeConfig& config,
                     std::int64_t repeats, const std::string& method, const Clock& clock) {
  if (repeats < 1) {
    throw ConfigError("repeats must be at least 1.");
  }
  double total = 0.0;
  for (std::int64_t r = 0; r < repeats; ++r) {
    const double start = clock();
    const KernelRidgeModel model = fit_kernel_ridge(x, y, config);
    const double stop = clock();
    total += stop - start;
  }
  return {x.rows(), method, total / static_cast<double>(repeats), repeats};
}

std::string default_method_label() {
  std::string label = "eigen-" + std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION);
#ifdef EIGEN_USE_BLAS
  label += "+blas";
#endif
  return label;
}

}  // namespace eigml::bench
