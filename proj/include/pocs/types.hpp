#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numbers>

namespace pocs {

using Index = Eigen::Index;
using Complex = std::complex<double>;

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// kappa = sqrt(pi/2), the mean modulus of a unit-variance complex Gaussian.
inline const double kKappa = std::sqrt(std::numbers::pi / 2.0);

}  // namespace pocs
