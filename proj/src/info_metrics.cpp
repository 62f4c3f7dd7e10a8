#include "stealthgame/info_metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "stealthgame/errors.hpp"
#include "stealthgame/sampling.hpp"

namespace stealthgame {
namespace {

void check_profile(const MeasurementModel& model, const AttackProfile& v) {
  if (v.size() != model.m()) {
    throw std::invalid_argument(
        fmt::format("attack profile has length {}, model has m = {}", v.size(), model.m()));
  }
}

void check_index(const MeasurementModel& model, Eigen::Index i, double v_i) {
  if (i < 0 || i >= model.m()) {
    throw std::out_of_range(fmt::format("measurement index {} outside [1, {}]", i + 1, model.m()));
  }
  if (!(v_i >= 0.0)) throw std::invalid_argument("attack variance must be >= 0");
}

void check_samples(Eigen::Index n) {
  if (n < 10000) throw std::invalid_argument("Monte-Carlo oracles need at least 1e4 samples");
}

// Zero-mean Gaussian log-density evaluator with a cached Cholesky factor.
class GaussianLogDensity {
 public:
  explicit GaussianLogDensity(const Matrix& cov) : llt_(cov) {
    if (llt_.info() != Eigen::Success) throw NumericalError("covariance is not positive definite");
    const double log_det = spd_log_det(cov);
    constant_ = -0.5 * (static_cast<double>(cov.rows()) * std::log(2.0 * std::numbers::pi) +
                        log_det);
  }

  // Log densities of every row of x.
  Vector rows(const Matrix& x) const {
    // L^{-1} x^T, column k is the whitened sample k
    const Matrix white = llt_.matrixL().solve(x.transpose());
    return (constant_ - 0.5 * white.colwise().squaredNorm().array()).matrix().transpose();
  }

 private:
  Eigen::LLT<Matrix> llt_;
  double constant_ = 0.0;
};

McEstimate summarize(const Vector& samples) {
  const auto n = static_cast<double>(samples.size());
  const double mean = samples.mean();
  const double var = (samples.array() - mean).square().sum() / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

// Joint covariance of (X, Y_A restricted to `rows`).
Matrix joint_covariance(const MeasurementModel& model, const Matrix& y_cov,
                        const Matrix& h_rows) {
  const Eigen::Index n = model.n();
  const Eigen::Index k = y_cov.rows();
  Matrix joint(n + k, n + k);
  joint.topLeftCorner(n, n) = model.sigma_xx();
  joint.topRightCorner(n, k) = model.sigma_xx() * h_rows.transpose();
  joint.bottomLeftCorner(k, n) = h_rows * model.sigma_xx();
  joint.bottomRightCorner(k, k) = y_cov;
  return 0.5 * (joint + joint.transpose());
}

McEstimate mc_mi_from_joint(const MeasurementModel& model, const Matrix& joint,
                            Eigen::Index n_samples, std::uint64_t seed) {
  const Eigen::Index n = model.n();
  const Eigen::Index k = joint.rows() - n;
  const Matrix w = sample_gaussian_rows(joint, n_samples, seed);
  const GaussianLogDensity f_joint(joint);
  const GaussianLogDensity f_x(joint.topLeftCorner(n, n));
  const GaussianLogDensity f_y(joint.bottomRightCorner(k, k));
  const Vector ratio = f_joint.rows(w) - f_x.rows(w.leftCols(n)) - f_y.rows(w.rightCols(k));
  return summarize(ratio);
}

}  // namespace

double mi_global(const MeasurementModel& model, const AttackProfile& v) {
  check_profile(model, v);
  const double num = spd_log_det(attacked_cov(model, v));
  const double den = (model.sigma2() + v.values().array()).log().sum();
  return 0.5 * (num - den);
}

double mi_local(const MeasurementModel& model, Eigen::Index i, double v_i) {
  check_index(model, i, v_i);
  return 0.5 * std::log1p(model.c(i) / (model.sigma2() + v_i));
}

double kl_global(const MeasurementModel& model, const AttackProfile& v) {
  check_profile(model, v);
  const double log_ratio = model.log_det_sigma_yy() - spd_log_det(attacked_cov(model, v));
  const double trace = model.sigma_yy_inv().diagonal().dot(v.values());
  return 0.5 * (log_ratio + trace);
}

double kl_local(const MeasurementModel& model, Eigen::Index i, double v_i) {
  check_index(model, i, v_i);
  const double s = model.s(i);
  const double r = v_i / s;
  return 0.5 * (r - std::log1p(r));
}

McEstimate mc_mi_oracle(const MeasurementModel& model, const AttackProfile& v,
                        Eigen::Index n_samples, std::uint64_t seed) {
  check_profile(model, v);
  check_samples(n_samples);
  const Matrix joint = joint_covariance(model, attacked_cov(model, v), model.h());
  return mc_mi_from_joint(model, joint, n_samples, seed);
}

McEstimate mc_mi_local_oracle(const MeasurementModel& model, Eigen::Index i, double v_i,
                              Eigen::Index n_samples, std::uint64_t seed) {
  check_index(model, i, v_i);
  check_samples(n_samples);
  Matrix y_cov(1, 1);
  y_cov(0, 0) = model.s(i) + v_i;
  const Matrix joint = joint_covariance(model, y_cov, model.h().row(i));
  return mc_mi_from_joint(model, joint, n_samples, seed);
}

McEstimate mc_kl_oracle(const MeasurementModel& model, const AttackProfile& v,
                        Eigen::Index n_samples, std::uint64_t seed) {
  check_profile(model, v);
  check_samples(n_samples);
  const Matrix attacked = attacked_cov(model, v);
  const Matrix y = sample_gaussian_rows(attacked, n_samples, seed);
  const GaussianLogDensity f_attacked(attacked);
  const GaussianLogDensity f_clean(model.sigma_yy());
  return summarize(f_attacked.rows(y) - f_clean.rows(y));
}

McEstimate mc_kl_local_oracle(const MeasurementModel& model, Eigen::Index i, double v_i,
                              Eigen::Index n_samples, std::uint64_t seed) {
  check_index(model, i, v_i);
  check_samples(n_samples);
  Matrix attacked(1, 1);
  attacked(0, 0) = model.s(i) + v_i;
  Matrix clean(1, 1);
  clean(0, 0) = model.s(i);
  const Matrix y = sample_gaussian_rows(attacked, n_samples, seed);
  const GaussianLogDensity f_attacked(attacked);
  const GaussianLogDensity f_clean(clean);
  return summarize(f_attacked.rows(y) - f_clean.rows(y));
}

}  // namespace stealthgame
