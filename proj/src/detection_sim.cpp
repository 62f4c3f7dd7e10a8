#include "stealthgame/detection_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stealthgame/errors.hpp"
#include "stealthgame/sampling.hpp"

namespace stealthgame {

Matrix sample_observations(const MeasurementModel& model, const AttackProfile& v,
                           Eigen::Index n_samples, std::uint64_t seed, bool attacked) {
  const Matrix cov = attacked ? attacked_cov(model, v) : model.sigma_yy();
  return sample_gaussian_rows(cov, n_samples, seed);
}

JointLrt::JointLrt(const MeasurementModel& model, const AttackProfile& v) {
  const Matrix attacked = attacked_cov(model, v);
  Eigen::LLT<Matrix> llt(attacked);
  if (llt.info() != Eigen::Success) throw NumericalError("attacked covariance is not PD");
  const Matrix attacked_inv = llt.solve(Matrix::Identity(model.m(), model.m()));
  quad_form_ = model.sigma_yy_inv() - attacked_inv;
  quad_form_ = 0.5 * (quad_form_ + quad_form_.transpose());
  offset_ = 0.5 * (model.log_det_sigma_yy() - spd_log_det(attacked));
}

double JointLrt::operator()(const Vector& y) const {
  if (y.size() != quad_form_.rows()) throw std::invalid_argument("observation length differs from m");
  return 0.5 * y.dot(quad_form_ * y) + offset_;
}

Vector JointLrt::rows(const Matrix& y) const {
  const Matrix qy = y * quad_form_;
  return (0.5 * (qy.array() * y.array()).rowwise().sum() + offset_).matrix();
}

double llr_joint(const MeasurementModel& model, const AttackProfile& v, const Vector& y) {
  return JointLrt(model, v)(y);
}

double llr_local(const MeasurementModel& model, Eigen::Index i, double v_i, double y_i) {
  if (i < 0 || i >= model.m()) throw std::out_of_range("measurement index out of range");
  if (!(v_i >= 0.0)) throw std::invalid_argument("attack variance must be >= 0");
  const double s = model.s(i);
  const double a = s + v_i;
  return 0.5 * y_i * y_i * (1.0 / s - 1.0 / a) + 0.5 * std::log(s / a);
}

LlrSamples simulate_llr(const MeasurementModel& model, const AttackProfile& v,
                        Eigen::Index n_samples, std::uint64_t seed) {
  const JointLrt lrt(model, v);
  LlrSamples out;
  out.clean = lrt.rows(sample_observations(model, v, n_samples, derive_seed(seed, 0), false));
  out.attacked = lrt.rows(sample_observations(model, v, n_samples, derive_seed(seed, 1), true));
  return out;
}

std::vector<RocPoint> error_curve_log(const LlrSamples& llr,
                                     const std::vector<double>& log_thresholds) {
  if (log_thresholds.empty()) throw std::invalid_argument("threshold list is empty");
  std::vector<double> clean(llr.clean.begin(), llr.clean.end());
  std::vector<double> attacked(llr.attacked.begin(), llr.attacked.end());
  std::sort(clean.begin(), clean.end());
  std::sort(attacked.begin(), attacked.end());
  const auto n0 = static_cast<double>(clean.size());
  const auto n1 = static_cast<double>(attacked.size());

  std::vector<RocPoint> out;
  out.reserve(log_thresholds.size());
  for (const double log_tau : log_thresholds) {
    if (std::isnan(log_tau)) throw std::invalid_argument("threshold is NaN");
    // first element >= log_tau
    const auto c = std::lower_bound(clean.begin(), clean.end(), log_tau);
    const auto a = std::lower_bound(attacked.begin(), attacked.end(), log_tau);
    out.push_back({std::exp(log_tau), log_tau, static_cast<double>(clean.end() - c) / n0,
                   static_cast<double>(a - attacked.begin()) / n1});
  }
  return out;
}

std::vector<RocPoint> error_curve(const LlrSamples& llr, const std::vector<double>& thresholds) {
  std::vector<double> logs;
  logs.reserve(thresholds.size());
  for (const double tau : thresholds) {
    if (!(tau > 0.0)) throw std::invalid_argument("thresholds must be positive");
    logs.push_back(std::log(tau));
  }
  auto out = error_curve_log(llr, logs);
  for (std::size_t k = 0; k < out.size(); ++k) out[k].tau = thresholds[k];
  return out;
}

std::vector<RocPoint> error_curve(const MeasurementModel& model, const AttackProfile& v,
                                  Eigen::Index n_samples, std::uint64_t seed,
                                  const std::vector<double>& thresholds) {
  if (n_samples < 1000) throw std::invalid_argument("need at least 1e3 samples per hypothesis");
  if (thresholds.empty()) throw std::invalid_argument("threshold list is empty");
  return error_curve(simulate_llr(model, v, n_samples, seed), thresholds);
}

std::vector<double> log_spaced_thresholds(double log_lo, double log_hi, std::size_t count) {
  if (count == 0) throw std::invalid_argument("threshold count must be positive");
  if (!(log_hi >= log_lo)) throw std::invalid_argument("empty threshold range");
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double frac = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    out[k] = std::exp(log_lo + frac * (log_hi - log_lo));
  }
  return out;
}

double empirical_auc(const LlrSamples& llr) {
  std::vector<double> clean(llr.clean.begin(), llr.clean.end());
  std::sort(clean.begin(), clean.end());
  double wins = 0.0;
  for (const double a : llr.attacked) {
    const auto lo = std::lower_bound(clean.begin(), clean.end(), a);
    const auto hi = std::upper_bound(lo, clean.end(), a);
    wins += static_cast<double>(lo - clean.begin()) + 0.5 * static_cast<double>(hi - lo);
  }
  return wins / (static_cast<double>(clean.size()) * static_cast<double>(llr.attacked.size()));
}

}  // namespace stealthgame
