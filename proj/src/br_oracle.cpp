// Golden-section reference for the best responses. Everything here is
// recomputed from the raw model inputs in 128-bit floating point and shares
// no code with the closed forms in best_response.cpp.

#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>
#include <fmt/format.h>

#include "stealthgame/best_response.hpp"
#include "stealthgame/errors.hpp"

namespace stealthgame {
namespace {

using Quad = boost::multiprecision::float128;
using QuadMatrix = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;
using QuadVector = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;

Quad quad_log_det(const QuadMatrix& m) {
  Eigen::LLT<QuadMatrix> llt(m);
  if (llt.info() != Eigen::Success) throw NumericalError("oracle: matrix is not PD");
  Quad acc = 0;
  for (Eigen::Index k = 0; k < m.rows(); ++k) acc += log(Quad(llt.matrixL()(k, k)));
  return 2 * acc;
}

// Player i's cost as a function of its own variance t, others fixed.
class QuadCost {
 public:
  QuadCost(const GameSpec& spec, const MeasurementModel& model, Eigen::Index i,
           const AttackProfile& v)
      : p_(spec.p), lambda_(spec.lambda), i_(i), sigma2_(model.sigma2()) {
    const QuadMatrix h = model.h().cast<Quad>();
    const QuadMatrix sxx = model.sigma_xx().cast<Quad>();
    signal_ = h * sxx * h.transpose();
    clean_ = signal_;
    for (Eigen::Index k = 0; k < clean_.rows(); ++k) clean_(k, k) += sigma2_;
    log_det_clean_ = quad_log_det(clean_);
    const QuadMatrix inv =
        clean_.llt().solve(QuadMatrix::Identity(clean_.rows(), clean_.cols()));
    clean_inv_diag_ = inv.diagonal();
    v_ = v.values().cast<Quad>();
  }

  Quad operator()(Quad t) const {
    QuadVector v = v_;
    v(i_) = t;
    switch (p_) {
      case 1:
        return mi_global(v) + lambda_ * kl_global(v);
      case 2:
        return mi_local(t) + lambda_ * kl_global(v);
      default:
        return mi_global(v) + lambda_ * kl_local(t);
    }
  }

 private:
  Quad attacked_log_det(const QuadVector& v) const {
    QuadMatrix a = clean_;
    for (Eigen::Index k = 0; k < a.rows(); ++k) a(k, k) += v(k);
    return quad_log_det(a);
  }

  Quad mi_global(const QuadVector& v) const {
    Quad noise = 0;
    for (Eigen::Index k = 0; k < v.size(); ++k) noise += log(sigma2_ + v(k));
    return (attacked_log_det(v) - noise) / 2;
  }

  Quad kl_global(const QuadVector& v) const {
    return (log_det_clean_ - attacked_log_det(v) + clean_inv_diag_.dot(v)) / 2;
  }

  Quad mi_local(Quad t) const { return log(1 + signal_(i_, i_) / (sigma2_ + t)) / 2; }

  Quad kl_local(Quad t) const {
    const Quad s = clean_(i_, i_);
    return (t / s - log((s + t) / s)) / 2;
  }

  int p_;
  Quad lambda_;
  Eigen::Index i_;
  Quad sigma2_;
  QuadMatrix signal_;
  QuadMatrix clean_;
  QuadVector clean_inv_diag_;
  Quad log_det_clean_;
  QuadVector v_;
};

}  // namespace

double br_numeric(const GameSpec& spec, const MeasurementModel& model, Eigen::Index i,
                  const AttackProfile& v) {
  validate_game(spec);
  if (i < 0 || i >= model.m()) {
    throw std::out_of_range(fmt::format("player {} outside [1, {}]", i + 1, model.m()));
  }
  if (v.size() != model.m()) throw std::invalid_argument("attack profile length differs from m");
  const QuadCost f(spec, model, i, v);

  // Bracket: grow the upper end until the cost is increasing there.
  const Quad rel_step = Quad(1e-9);
  Quad hi = 1;
  while (f(hi * (1 + rel_step)) - f(hi * (1 - rel_step)) <= 0) {
    hi *= 2;
    if (hi > Quad(kVMax)) {
      throw NumericalError(fmt::format(
          "br_numeric: cost of player {} still decreasing at {:g}", i + 1, kVMax));
    }
  }

  const Quad inv_phi = (sqrt(Quad(5)) - 1) / 2;
  Quad a = 0;
  Quad b = hi;
  Quad x1 = b - inv_phi * (b - a);
  Quad x2 = a + inv_phi * (b - a);
  Quad f1 = f(x1);
  Quad f2 = f(x2);
  const Quad width = Quad(1e-10);
  while (b - a > width) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  const Quad best = (a + b) / 2;
  return static_cast<double>(best);
}

}  // namespace stealthgame
