#pragma once

#include <Eigen/Dense>

namespace stealthgame {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Absolute eigenvalue slack used when validating PSD inputs.
inline constexpr double kPsdTolerance = 1e-12;

/// log|M| for symmetric positive-definite M, via Cholesky.
/// Throws NumericalError if M is not numerically PD.
double spd_log_det(const Matrix& m);

bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& m);

/// 2-norm condition number of a symmetric PSD matrix (inf if singular).
double condition_number(const Matrix& m);

/// Symmetric square root Q diag(sqrt(max(l,0))) Q^T of a symmetric PSD matrix.
Matrix symmetric_sqrt(const Matrix& m);

}  // namespace stealthgame
