#pragma once

// Reference computations used by the tests. They use plain std::vector
// storage and textbook algorithms so they share no code path with the library.

#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eigml/types.hpp"

namespace oracle {

using Table = std::vector<std::vector<double>>;

inline Table to_table(const eigml::Matrix& m) {
  Table t(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) t[i][j] = m(i, j);
  return t;
}

inline double gaussian(const std::vector<double>& a, const std::vector<double>& b, double sigma) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d2 += std::pow(a[k] - b[k], 2);
  return std::exp(-d2 / (2.0 * sigma * sigma));
}

// Gaussian elimination with partial pivoting on a copy of (A | b).
inline std::vector<double> solve(Table a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) throw std::runtime_error("singular");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// Dual coefficients of kernel ridge regression by brute force.
inline std::vector<double> krr_alpha(const Table& x, const std::vector<double>& y, double lambda,
                                     double sigma) {
  const std::size_t n = y.size();
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  Table sys(n, std::vector<double>(n));
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sys[i][j] = gaussian(x[i], x[j], sigma) + (i == j ? lambda : 0.0);
    rhs[i] = y[i] - mean;
  }
  return solve(sys, rhs);
}

inline eigml::Matrix uniform_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                    double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  eigml::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline eigml::Vector uniform_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  eigml::Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

// One SGD observation applied to scalar (k = 1) parameters, written straight
// from the four update equations with the factor values captured beforehand.
struct ScalarState {
  double bu, bi, p, q;
};

inline ScalarState sgd_step_k1(ScalarState s, double mu, double r, double lr, double reg) {
  const double err = r - (mu + s.bu + s.bi + s.p * s.q);
  const double p_old = s.p;
  const double q_old = s.q;
  s.bu = s.bu + lr * (err - reg * s.bu);
  s.bi = s.bi + lr * (err - reg * s.bi);
  s.p = p_old + lr * (err * q_old - reg * p_old);
  s.q = q_old + lr * (err * p_old - reg * q_old);
  return s;
}

}  // namespace oracle
