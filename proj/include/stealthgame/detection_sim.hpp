#pragma once

#include <cstdint>
#include <vector>

#include "stealthgame/gaussian_model.hpp"

namespace stealthgame {

/// n_samples draws from N(0, Syy) (attacked = false) or N(0, Syy + diag v).
Matrix sample_observations(const MeasurementModel& model, const AttackProfile& v,
                           Eigen::Index n_samples, std::uint64_t seed, bool attacked);

/// Joint log-likelihood ratio log f_{Y_A}(y) - log f_Y(y), with the two
/// inverses and log-determinants cached for repeated evaluation.
class JointLrt {
 public:
  JointLrt(const MeasurementModel& model, const AttackProfile& v);

  double operator()(const Vector& y) const;
  /// LLR of every row of y.
  Vector rows(const Matrix& y) const;

 private:
  Matrix quad_form_;  // Syy^-1 - (Syy + diag v)^-1
  double offset_ = 0.0;
};

double llr_joint(const MeasurementModel& model, const AttackProfile& v, const Vector& y);

/// log f_{Y_A,i}(y_i) - log f_{Y_i}(y_i), variances s_i + v_i and s_i.
double llr_local(const MeasurementModel& model, Eigen::Index i, double v_i, double y_i);

struct RocPoint {
  double tau = 0.0;
  double log_tau = 0.0;  // kept separately: tau overflows for strong attacks
  double alpha_hat = 0.0;  // P[LLR >= log tau | no attack]
  double beta_hat = 0.0;   // P[LLR <  log tau | attack]
};

/// Joint-LRT log-likelihood ratios on n_samples clean and n_samples attacked
/// observations. Clean draws use derive_seed(seed, 0), attacked draws
/// derive_seed(seed, 1).
struct LlrSamples {
  Vector clean;
  Vector attacked;
};
LlrSamples simulate_llr(const MeasurementModel& model, const AttackProfile& v,
                        Eigen::Index n_samples, std::uint64_t seed);

/// Empirical Type-I / Type-II errors of the joint LRT at each threshold tau
/// (> 0), compared on the log scale. n_samples per hypothesis >= 1e3.
std::vector<RocPoint> error_curve(const MeasurementModel& model, const AttackProfile& v,
                                  Eigen::Index n_samples, std::uint64_t seed,
                                  const std::vector<double>& thresholds);

/// Same, on precomputed LLR samples.
std::vector<RocPoint> error_curve(const LlrSamples& llr, const std::vector<double>& thresholds);

/// Same, with thresholds given as log(tau).
std::vector<RocPoint> error_curve_log(const LlrSamples& llr, const std::vector<double>& log_thresholds);

/// count values of tau, uniform in log(tau) over [log_lo, log_hi].
std::vector<double> log_spaced_thresholds(double log_lo, double log_hi, std::size_t count);

/// Area under the empirical ROC: P[LLR_attacked > LLR_clean] + 1/2 P[tie]
/// (Mann-Whitney statistic).
double empirical_auc(const LlrSamples& llr);

}  // namespace stealthgame
