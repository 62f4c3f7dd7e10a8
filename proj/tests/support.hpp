#pragma once

// Random desk-scale models and reference computations that do not go
// through the library's closed forms. Oracles use LU determinants and
// explicit joint covariances instead of the cached Cholesky quantities.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "stealthgame/gaussian_model.hpp"
#include "stealthgame/grid_model.hpp"

namespace testing {

using stealthgame::AttackProfile;
using stealthgame::Matrix;
using stealthgame::MeasurementModel;
using stealthgame::Vector;

inline const double kGoldenRatioConj = (std::sqrt(5.0) - 1.0) / 2.0;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random H (m x n, n <= m), prior either Toeplitz or a random SPD matrix,
/// sigma2 in [0.05, 1.5].
inline MeasurementModel random_model(std::mt19937_64& rng, int m, int n) {
  std::normal_distribution<double> gauss;
  Matrix h(m, n);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) h(r, c) = gauss(rng);
  Matrix sxx;
  if (uniform(rng, 0, 1) < 0.5) {
    sxx = stealthgame::toeplitz_cov({n, uniform(rng, 0.0, 0.95)});
  } else {
    Matrix a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a(r, c) = gauss(rng);
    sxx = a * a.transpose() / n + 0.1 * Matrix::Identity(n, n);
    sxx = 0.5 * (sxx + sxx.transpose());
  }
  return MeasurementModel::build(h, sxx, uniform(rng, 0.05, 1.5));
}

inline MeasurementModel random_model(std::mt19937_64& rng, int max_m = 8) {
  const int m = uniform_int(rng, 2, max_m);
  return random_model(rng, m, uniform_int(rng, 1, m));
}

inline double mean_s(const MeasurementModel& model) {
  return model.sigma_yy().diagonal().mean();
}

/// Entries uniform on [0, scale * mean diag Syy].
inline AttackProfile random_profile(std::mt19937_64& rng, const MeasurementModel& model,
                                    double scale = 3.0) {
  Vector v(model.m());
  for (auto& x : v) x = uniform(rng, 0.0, scale * mean_s(model));
  return AttackProfile(v);
}

inline MeasurementModel scalar_model() {
  return MeasurementModel::build(Matrix::Ones(1, 1), Matrix::Ones(1, 1), 1.0);
}

inline std::string data_path(const std::string& name) {
  return std::string(STEALTHGAME_DATA_DIR) + "/" + name;
}

inline MeasurementModel case_model(const std::string& name, double rho, double snr_db) {
  std::ifstream in(data_path(name));
  std::stringstream ss;
  ss << in.rdbuf();
  const auto jac = stealthgame::build_dc_jacobian(stealthgame::parse_network(ss.str()));
  const Matrix sxx = stealthgame::toeplitz_cov({jac.n(), rho});
  return MeasurementModel::build(jac.h, sxx, stealthgame::calibrate_noise(jac.h, sxx, snr_db));
}

inline MeasurementModel case9_model() { return case_model("case9.net", 0.9, 30.0); }

inline double lu_log_det(const Matrix& m) {
  return std::log(Eigen::PartialPivLU<Matrix>(m).determinant());
}

/// Joint covariance of (X, Y_A).
inline Matrix joint_cov(const MeasurementModel& model, const Vector& v) {
  const Matrix& h = model.h();
  const Matrix& sxx = model.sigma_xx();
  const auto n = model.n();
  const auto m = model.m();
  Matrix j(n + m, n + m);
  j.topLeftCorner(n, n) = sxx;
  j.topRightCorner(n, m) = sxx * h.transpose();
  j.bottomLeftCorner(m, n) = h * sxx;
  Matrix yy = h * sxx * h.transpose();
  yy.diagonal().array() += model.sigma2() + v.array();
  j.bottomRightCorner(m, m) = yy;
  return j;
}

/// I(X; Y_A) = 1/2 log(|Sxx| |S_YA| / |S_joint|).
inline double oracle_mi(const MeasurementModel& model, const Vector& v) {
  const Matrix j = joint_cov(model, v);
  const auto n = model.n();
  const auto m = model.m();
  return 0.5 * (lu_log_det(j.topLeftCorner(n, n)) + lu_log_det(j.bottomRightCorner(m, m)) -
                lu_log_det(j));
}

/// I(X; Y_A,i) from the (n+1)-dimensional joint covariance.
inline double oracle_mi_local(const MeasurementModel& model, Eigen::Index i, double v_i) {
  const auto n = model.n();
  const Matrix& sxx = model.sigma_xx();
  const Vector hi = model.h().row(i).transpose();
  Matrix j(n + 1, n + 1);
  j.topLeftCorner(n, n) = sxx;
  j.topRightCorner(n, 1) = sxx * hi;
  j.bottomLeftCorner(1, n) = (sxx * hi).transpose();
  j(n, n) = hi.dot(sxx * hi) + model.sigma2() + v_i;
  return 0.5 * (lu_log_det(sxx) + std::log(j(n, n)) - lu_log_det(j));
}

/// D(N(0, a) || N(0, b)).
inline double oracle_kl(const Matrix& a, const Matrix& b) {
  const Matrix binv = Eigen::PartialPivLU<Matrix>(b).inverse();
  return 0.5 * ((binv * a).trace() - static_cast<double>(a.rows()) + lu_log_det(b) -
                lu_log_det(a));
}

inline Matrix clean_cov(const MeasurementModel& model) {
  Matrix s = model.h() * model.sigma_xx() * model.h().transpose();
  s.diagonal().array() += model.sigma2();
  return s;
}

inline Matrix attacked_cov_ref(const MeasurementModel& model, const Vector& v) {
  Matrix s = clean_cov(model);
  s.diagonal() += v;
  return s;
}

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Monte-Carlo E_a[log N(y; 0, a) - log N(y; 0, b)], Cholesky sampling with
/// std::normal_distribution.
inline Estimate mc_kl(const Matrix& a, const Matrix& b, int n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const Matrix la = Eigen::LLT<Matrix>(a).matrixL();
  const Matrix ainv = Eigen::PartialPivLU<Matrix>(a).inverse();
  const Matrix binv = Eigen::PartialPivLU<Matrix>(b).inverse();
  const double offset = 0.5 * (lu_log_det(b) - lu_log_det(a));
  double sum = 0.0;
  double sum_sq = 0.0;
  Vector z(a.rows());
  for (int k = 0; k < n_samples; ++k) {
    for (auto& x : z) x = gauss(rng);
    const Vector y = la * z;
    const double r = offset + 0.5 * (y.dot(binv * y) - y.dot(ainv * y));
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / n_samples;
  const double var = (sum_sq - n_samples * mean * mean) / (n_samples - 1);
  return {mean, std::sqrt(var / n_samples)};
}

}  // namespace testing
