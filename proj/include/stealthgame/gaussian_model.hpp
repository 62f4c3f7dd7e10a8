#pragma once

#include <cstddef>

#include "stealthgame/linalg.hpp"

namespace stealthgame {

struct StatePriorSpec {
  Eigen::Index n = 0;
  double rho = 0.0;  // correlation decay, in [0, 1)
};

/// Exponentially decaying Toeplitz covariance, entry (i,j) = rho^|i-j|.
Matrix toeplitz_cov(const StatePriorSpec& spec);

/// Noise variance giving the requested SNR:
///   sigma2 = tr(H Sxx H^T) / (m * 10^(snr_db/10)).
double calibrate_noise(const Matrix& h, const Matrix& sigma_xx, double snr_db);

/// 10 log10(tr(H Sxx H^T) / (m sigma2)).
double snr_db(const Matrix& h, const Matrix& sigma_xx, double sigma2);

/// Per-measurement attack variances, v_i >= 0. Immutable value type.
class AttackProfile {
 public:
  AttackProfile() = default;
  explicit AttackProfile(Vector v);

  static AttackProfile zeros(Eigen::Index m) { return AttackProfile(Vector::Zero(m)); }

  Eigen::Index size() const { return v_.size(); }
  double operator[](Eigen::Index i) const { return v_(i); }
  const Vector& values() const { return v_; }

  /// Copy with coordinate i replaced by x (the unilateral deviation (v_-i, x)).
  AttackProfile with(Eigen::Index i, double x) const;

  bool operator==(const AttackProfile& o) const { return v_ == o.v_; }

 private:
  Vector v_;
};

/// Gaussian observation model Y = H X + Z, X ~ N(0, Sxx), Z ~ N(0, sigma2 I).
/// Sigma_YY = H Sxx H^T + sigma2 I and the quantities every metric reuses
/// are computed once at construction; the object is immutable afterwards.
class MeasurementModel {
 public:
  /// Throws std::invalid_argument on dimension mismatch, sigma2 <= 0 or a
  /// non-symmetric / non-PSD Sxx.
  static MeasurementModel build(Matrix h, Matrix sigma_xx, double sigma2);

  Eigen::Index m() const { return h_.rows(); }
  Eigen::Index n() const { return h_.cols(); }

  const Matrix& h() const { return h_; }
  const Matrix& sigma_xx() const { return sigma_xx_; }
  double sigma2() const { return sigma2_; }

  /// H Sxx H^T
  const Matrix& signal_cov() const { return signal_cov_; }
  const Matrix& sigma_yy() const { return sigma_yy_; }
  const Matrix& sigma_yy_inv() const { return sigma_yy_inv_; }
  double log_det_sigma_yy() const { return log_det_sigma_yy_; }

  /// e_i^T Sigma_YY e_i
  double s(Eigen::Index i) const { return sigma_yy_(i, i); }
  /// e_i^T H Sxx H^T e_i
  double c(Eigen::Index i) const { return signal_cov_(i, i); }

 private:
  MeasurementModel() = default;

  Matrix h_;
  Matrix sigma_xx_;
  double sigma2_ = 1.0;
  Matrix signal_cov_;
  Matrix sigma_yy_;
  Matrix sigma_yy_inv_;
  double log_det_sigma_yy_ = 0.0;
};

/// Sigma_YY + diag(v).
Matrix attacked_cov(const MeasurementModel& model, const AttackProfile& v);

}  // namespace stealthgame
