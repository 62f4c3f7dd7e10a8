#include "stealthgame/linalg.hpp"

#include <cmath>
#include <limits>

#include "stealthgame/errors.hpp"

namespace stealthgame {

double spd_log_det(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("matrix is not positive definite");
  }
  const auto& l = llt.matrixL();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const double d = l(k, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw NumericalError("matrix is not positive definite");
    }
    acc += std::log(d);
  }
  return 2.0 * acc;
}

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double condition_number(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

Matrix symmetric_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Vector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace stealthgame
