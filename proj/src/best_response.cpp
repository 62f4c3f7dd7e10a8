#include "stealthgame/best_response.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "stealthgame/errors.hpp"

namespace stealthgame {
namespace {

constexpr double kBisectionRelTol = 1e-12;

// Smallest root of a non-decreasing g on [0, kVMax]; 0 if g(0) >= 0 and
// kVMax if g stays negative.
template <typename G>
double monotone_root(G&& g) {
  if (g(0.0) >= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > kVMax) return kVMax;
  }
  for (int iter = 0; iter < 400; ++iter) {
    if (hi - lo <= kBisectionRelTol * (1.0 + lo)) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    (gm < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BRContext br_context(const MeasurementModel& model, Eigen::Index i, const AttackProfile& v) {
  const Eigen::Index m = model.m();
  if (i < 0 || i >= m) {
    throw std::out_of_range(fmt::format("player {} outside [1, {}]", i + 1, m));
  }
  if (v.size() != m) throw std::invalid_argument("attack profile length differs from m");

  BRContext ctx;
  ctx.s = model.s(i);
  ctx.c = model.c(i);
  ctx.beta = model.sigma_yy_inv()(i, i);

  Vector others = v.values();
  others(i) = 0.0;
  Matrix partial = model.sigma_yy();
  partial.diagonal() += others;
  Eigen::LLT<Matrix> llt(partial);
  if (llt.info() != Eigen::Success) throw NumericalError("attacked covariance is not PD");
  const Vector ei = Vector::Unit(m, i);
  ctx.alpha = llt.solve(ei)(i);

  Vector weights = (model.sigma2() + others.array()).inverse().matrix();
  weights(i) = 0.0;
  Matrix a = model.signal_cov() * weights.asDiagonal();
  a.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Matrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) {
    throw NumericalError(fmt::format("A is ill-conditioned (rcond = {:.3g})", rcond));
  }
  ctx.gamma = lu.solve(Vector(model.signal_cov().col(i)))(i);
  return ctx;
}

double cost_slope(int p, const BRContext& ctx, double sigma2, double lambda, double l,
                  Br3Variant variant) {
  switch (p) {
    case 1:
      return (1.0 - lambda) * ctx.alpha / (1.0 + l * ctx.alpha) - 1.0 / (sigma2 + l) +
             lambda * ctx.beta;
    case 2:
      return -ctx.c / ((sigma2 + l) * (ctx.s + l)) - lambda * ctx.alpha / (1.0 + l * ctx.alpha) +
             lambda * ctx.beta;
    case 3: {
      const double inner = variant == Br3Variant::kConsistent ? ctx.gamma : ctx.alpha;
      return lambda * l / ((ctx.s + l) * ctx.s) -
             ctx.gamma / ((sigma2 + l) * (sigma2 + l + inner));
    }
    default:
      throw std::invalid_argument(fmt::format("game index {} not in {{1,2,3}}", p));
  }
}

double log_det_term_slope(double gamma, double sigma2, double v_i) {
  return -gamma / ((sigma2 + v_i) * (sigma2 + v_i + gamma));
}

double br_g1(const BRContext& ctx, double sigma2, double lambda) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("game 1 best response requires lambda >= 1");
  if (cost_slope(1, ctx, sigma2, lambda, 0.0) >= 0.0) return 0.0;

  // Stationarity, multiplied through by (1 + l alpha)(sigma2 + l) / lambda:
  //   alpha beta l^2 + b l + c0 = 0
  const double a2 = ctx.alpha * ctx.beta;
  const double b = ctx.beta + ctx.alpha * sigma2 * ctx.beta - ctx.alpha;
  const double c0 = ctx.beta * sigma2 - ctx.alpha * sigma2 + (ctx.alpha * sigma2 - 1.0) / lambda;
  const double disc = b * b - 4.0 * a2 * c0;
  if (disc < 0.0) return 0.0;
  const double root = std::sqrt(disc);
  // larger root, written without cancellation
  const double l = b > 0.0 ? 2.0 * c0 / (-b - root) : (-b + root) / (2.0 * a2);
  return std::max(l, 0.0);
}

double br_g2(const BRContext& ctx, double sigma2, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("game 2 best response requires lambda >= 0");
  return monotone_root([&](double l) { return cost_slope(2, ctx, sigma2, lambda, l); });
}

double br_g3(const BRContext& ctx, double sigma2, double lambda, Br3Variant variant) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("game 3 best response requires lambda >= 0");
  return monotone_root(
      [&](double l) { return cost_slope(3, ctx, sigma2, lambda, l, variant); });
}

double best_response(const GameSpec& spec, const MeasurementModel& model, Eigen::Index i,
                     const AttackProfile& v, Br3Variant variant) {
  validate_game(spec);
  const BRContext ctx = br_context(model, i, v);
  switch (spec.p) {
    case 1:
      return br_g1(ctx, model.sigma2(), spec.lambda);
    case 2:
      return br_g2(ctx, model.sigma2(), spec.lambda);
    default:
      return br_g3(ctx, model.sigma2(), spec.lambda, variant);
  }
}

}  // namespace stealthgame
