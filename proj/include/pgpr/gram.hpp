#pragma once

#include <Eigen/Dense>

#include "pgpr/ansatz.hpp"

namespace pgpr {

using BasisMatrix = Eigen::Matrix<double, kBasisSize, kBasisSize>;

/// Integral of cos^a(x/2) sin^b(x/2) over [-pi, pi]: zero for odd b,
/// 2 B((a+1)/2, (b+1)/2) otherwise.
double half_angle_integral(int a, int b);

/// M_ss' = integral of T_s T_s' over [-pi, pi]^2, factorized into two
/// one-dimensional integrals.
BasisMatrix gram_matrix();

}  // namespace pgpr
