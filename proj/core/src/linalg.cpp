#include "bridgelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bridgelab {

double min_eigenvalue(const Matrix& symmetric) {
  if (symmetric.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

bool is_positive_definite(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.size() == 0) return false;
  if (!m.allFinite()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = std::max(eig.eigenvalues().maxCoeff(), 0.0);
  return lo > tol * std::max(hi, 1.0) && lo > 0.0;
}

}  // namespace bridgelab
