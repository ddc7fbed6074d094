#pragma once

#include <Eigen/Dense>

namespace bridgelab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Smallest eigenvalue of a symmetric matrix; +inf for an empty matrix.
double min_eigenvalue(const Matrix& symmetric);

// True when `m` is symmetric positive definite (Cholesky succeeds and the
// smallest eigenvalue exceeds `tol` times the largest).
bool is_positive_definite(const Matrix& m, double tol = 1e-12);

}  // namespace bridgelab
