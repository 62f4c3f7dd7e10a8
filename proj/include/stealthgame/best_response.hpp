#pragma once

#include "stealthgame/game.hpp"

namespace stealthgame {

/// Upper end of the action search; a best response equal to this value
/// means the cost has no finite minimiser (lambda = 0 in games 2 and 3).
inline constexpr double kVMax = 1e12;

/// Scalars that determine player i's best response given v_{-i}.
struct BRContext {
  double alpha = 0.0;  // e_i^T (Syy + sum_{j != i} v_j e_j e_j^T)^{-1} e_i
  double beta = 0.0;   // e_i^T Syy^{-1} e_i
  double gamma = 0.0;  // e_i^T A^{-1} K e_i, A = K sum_{j != i} (sigma2 + v_j)^{-1} e_j e_j^T + I
  double s = 0.0;      // e_i^T Syy e_i
  double c = 0.0;      // e_i^T K e_i, K = H Sxx H^T
};

/// Pairing of gamma_i / alpha_i in the game-3 stationarity condition.
enum class Br3Variant {
  kConsistent,  // gamma_i in both places: the zero of the true derivative
  kLiteral,     // gamma_i numerator, alpha_i inside the quadratic
};

/// Builds the context for player i. v_i itself is ignored. Throws
/// NumericalError if A is singular to working precision (cond > 1e12).
BRContext br_context(const MeasurementModel& model, Eigen::Index i, const AttackProfile& v);

/// Twice the partial derivative of player i's cost in v_i, evaluated at
/// v_i = l. Non-decreasing in l whenever the cost is convex.
double cost_slope(int p, const BRContext& ctx, double sigma2, double lambda, double l,
                  Br3Variant variant = Br3Variant::kConsistent);

/// d/dv_i log|K (sigma2 I + diag v)^{-1} + I| = -gamma / ((sigma2 + v_i)(sigma2 + v_i + gamma)).
double log_det_term_slope(double gamma, double sigma2, double v_i);

/// Game 1: closed-form positive root of the stationarity quadratic, clamped
/// to 0 when the cost is non-decreasing at the origin. Requires lambda >= 1.
double br_g1(const BRContext& ctx, double sigma2, double lambda);

/// Game 2: bisection on the monotone stationarity function.
double br_g2(const BRContext& ctx, double sigma2, double lambda);

/// Game 3: bisection on the monotone stationarity function.
double br_g3(const BRContext& ctx, double sigma2, double lambda,
             Br3Variant variant = Br3Variant::kConsistent);

/// Dispatches on spec.p; validates the spec.
double best_response(const GameSpec& spec, const MeasurementModel& model, Eigen::Index i,
                     const AttackProfile& v, Br3Variant variant = Br3Variant::kConsistent);

/// Reference minimiser: golden-section search of t -> cost(v with v_i = t)
/// on [0, V], V found by doubling until the cost slope is positive. The cost
/// is re-evaluated from H, Sxx and sigma2 in 128-bit floating point so the
/// argmin is resolved well below 1e-8. Throws NumericalError if no bracket
/// is found below kVMax.
double br_numeric(const GameSpec& spec, const MeasurementModel& model, Eigen::Index i,
                  const AttackProfile& v);

}  // namespace stealthgame
