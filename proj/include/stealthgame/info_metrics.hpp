#pragma once

#include <cstdint>

#include "stealthgame/gaussian_model.hpp"

namespace stealthgame {

// All quantities in nats. Measurement indices are 0-based.

/// Global mutual information I(X; Y_A) = 1/2 log(|Syy + diag v| / |sigma2 I + diag v|).
double mi_global(const MeasurementModel& model, const AttackProfile& v);

/// Local mutual information I(X; Y_A,i) = 1/2 log(1 + c_i / (sigma2 + v_i)).
double mi_local(const MeasurementModel& model, Eigen::Index i, double v_i);

/// D(P_{Y_A} || P_Y) = 1/2 (log(|Syy| / |Syy + diag v|) + tr(Syy^-1 diag v)).
double kl_global(const MeasurementModel& model, const AttackProfile& v);

/// D(P_{Y_A,i} || P_{Y_i}) = 1/2 (v_i / s_i + log(s_i / (s_i + v_i))).
double kl_local(const MeasurementModel& model, Eigen::Index i, double v_i);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte-Carlo oracles. Sample averages of Gaussian log-density ratios, built
// from the explicit joint covariance of (X, Y_A) rather than from the closed
// forms above. Deterministic for a fixed seed; n_samples must be >= 1e4.

/// E[log f(X, Y_A) - log f(X) - log f(Y_A)].
McEstimate mc_mi_oracle(const MeasurementModel& model, const AttackProfile& v,
                        Eigen::Index n_samples, std::uint64_t seed);

/// Same estimator with Y_A replaced by the single coordinate Y_A,i.
McEstimate mc_mi_local_oracle(const MeasurementModel& model, Eigen::Index i, double v_i,
                              Eigen::Index n_samples, std::uint64_t seed);

/// E_{P_{Y_A}}[log f_{Y_A}(Y) - log f_Y(Y)].
McEstimate mc_kl_oracle(const MeasurementModel& model, const AttackProfile& v,
                        Eigen::Index n_samples, std::uint64_t seed);

/// Scalar analogue of mc_kl_oracle for measurement i.
McEstimate mc_kl_local_oracle(const MeasurementModel& model, Eigen::Index i, double v_i,
                              Eigen::Index n_samples, std::uint64_t seed);

}  // namespace stealthgame
