#pragma once

#include <Eigen/Dense>
#include <complex>

namespace superwave {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct PinvSolution {
  CVector x;
  Eigen::Index rank = 0;
  Eigen::VectorXd singular_values;
  double cutoff = 0.0;
};

/// Moore–Penrose solve x = A⁺b via SVD, discarding singular values below
/// relative_cutoff · σ_max. Returns the minimum-norm least-squares solution.
PinvSolution pinv_solve(const CMatrix& a, const CVector& b, double relative_cutoff = 1e-12);

}  // namespace superwave
