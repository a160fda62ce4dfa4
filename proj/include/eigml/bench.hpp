#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "eigml/kernel_ridge.hpp"
#include "eigml/types.hpp"

namespace eigml::bench {

struct BenchRecord {
  std::int64_t n = 0;
  std::string method;
  double fit_time_s = 0.0;  // mean over repeats
  std::int64_t repeats = 0;
};

/// Returns the current time in seconds. Only differences are used.
using Clock = std::function<double()>;

/// Monotonic steady_clock reading in seconds.
double steady_seconds();

/// "eigen-<version>", plus "+blas" when Eigen delegates to an external BLAS.
std::string default_method_label();

/// Seeded synthetic regression data: inputs uniform on [0, 1]^d, responses
/// standard normal. Pure in (n, d, seed).
std::pair<Matrix, Vector> gen_synthetic(std::int64_t n, std::int64_t d, std::uint64_t seed);

/// Runs `repeats` fresh fits of (x, y) and reports the mean wall time of the
/// fit alone (kernel construction plus solve). There is no warm-up run, so
/// the first repeat may carry cold-cache cost.
BenchRecord time_fit(const Matrix& x, const Vector& y, const KernelRidgeConfig& config,
                     std::int64_t repeats, const std::string& method = default_method_label(),
                     const Clock& clock = steady_seconds);

}  // namespace eigml::bench
