#pragma once

#include <Eigen/Dense>

namespace eigml {

/// Dense row-major matrix of 64-bit floats. Rows are observations / users / items.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

}  // namespace eigml
