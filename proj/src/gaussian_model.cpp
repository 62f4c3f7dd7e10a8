#include "stealthgame/gaussian_model.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "stealthgame/errors.hpp"

namespace stealthgame {

Matrix toeplitz_cov(const StatePriorSpec& spec) {
  if (!(spec.rho >= 0.0 && spec.rho < 1.0)) {
    throw std::invalid_argument(fmt::format("rho = {} outside [0, 1)", spec.rho));
  }
  if (spec.n < 1) throw std::invalid_argument("state dimension must be positive");
  Matrix out(spec.n, spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    for (Eigen::Index j = 0; j < spec.n; ++j) {
      out(i, j) = std::pow(spec.rho, static_cast<double>(std::abs(i - j)));
    }
  }
  return out;
}

namespace {

double signal_trace(const Matrix& h, const Matrix& sigma_xx) {
  if (h.cols() != sigma_xx.rows() || sigma_xx.rows() != sigma_xx.cols()) {
    throw std::invalid_argument("H and Sigma_XX dimensions disagree");
  }
  return (h * sigma_xx * h.transpose()).trace();
}

}  // namespace

double calibrate_noise(const Matrix& h, const Matrix& sigma_xx, double snr_db) {
  const double tr = signal_trace(h, sigma_xx);
  if (!(tr > 0.0)) throw std::invalid_argument("zero signal trace: SNR is undefined");
  return tr / (static_cast<double>(h.rows()) * std::pow(10.0, snr_db / 10.0));
}

double snr_db(const Matrix& h, const Matrix& sigma_xx, double sigma2) {
  const double tr = signal_trace(h, sigma_xx);
  return 10.0 * std::log10(tr / (static_cast<double>(h.rows()) * sigma2));
}

AttackProfile::AttackProfile(Vector v) : v_(std::move(v)) {
  for (Eigen::Index i = 0; i < v_.size(); ++i) {
    if (!(v_(i) >= 0.0) || !std::isfinite(v_(i))) {
      throw std::invalid_argument(
          fmt::format("attack variance v[{}] = {} must be finite and >= 0", i + 1, v_(i)));
    }
  }
}

AttackProfile AttackProfile::with(Eigen::Index i, double x) const {
  Vector copy = v_;
  copy(i) = x;
  return AttackProfile(std::move(copy));
}

MeasurementModel MeasurementModel::build(Matrix h, Matrix sigma_xx, double sigma2) {
  if (h.rows() < 1 || h.cols() < 1) throw std::invalid_argument("H must be non-empty");
  if (sigma_xx.rows() != sigma_xx.cols() || sigma_xx.rows() != h.cols()) {
    throw std::invalid_argument(fmt::format("dimension mismatch: H is {}x{}, Sigma_XX is {}x{}",
                                            h.rows(), h.cols(), sigma_xx.rows(),
                                            sigma_xx.cols()));
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("noise variance must be positive");
  }
  if (!is_symmetric(sigma_xx)) throw std::invalid_argument("Sigma_XX is not symmetric");
  if (min_eigenvalue(sigma_xx) < -kPsdTolerance) {
    throw std::invalid_argument("Sigma_XX is not positive semidefinite");
  }

  MeasurementModel model;
  model.h_ = std::move(h);
  model.sigma_xx_ = std::move(sigma_xx);
  model.sigma2_ = sigma2;
  Matrix k = model.h_ * model.sigma_xx_ * model.h_.transpose();
  model.signal_cov_ = 0.5 * (k + k.transpose());
  model.sigma_yy_ = model.signal_cov_;
  model.sigma_yy_.diagonal().array() += sigma2;

  Eigen::LLT<Matrix> llt(model.sigma_yy_);
  if (llt.info() != Eigen::Success) throw NumericalError("Sigma_YY is not positive definite");
  model.sigma_yy_inv_ = llt.solve(Matrix::Identity(model.m(), model.m()));
  model.log_det_sigma_yy_ = spd_log_det(model.sigma_yy_);
  return model;
}

Matrix attacked_cov(const MeasurementModel& model, const AttackProfile& v) {
  if (v.size() != model.m()) {
    throw std::invalid_argument(
        fmt::format("attack profile has length {}, model has m = {}", v.size(), model.m()));
  }
  Matrix out = model.sigma_yy();
  out.diagonal() += v.values();
  return out;
}

}  // namespace stealthgame
