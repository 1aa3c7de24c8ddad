#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace aperiodic {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Default cap on generated letters / points.
inline constexpr std::size_t kDefaultPointBudget = 50'000'000;

}  // namespace aperiodic
