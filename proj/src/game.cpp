#include "stealthgame/game.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "stealthgame/info_metrics.hpp"

namespace stealthgame {

void validate_game(const GameSpec& spec) {
  if (spec.p < 1 || spec.p > 3) {
    throw std::invalid_argument(fmt::format("game index {} not in {{1,2,3}}", spec.p));
  }
  if (!std::isfinite(spec.lambda)) throw std::invalid_argument("lambda must be finite");
  if (spec.p == 1 && spec.lambda < 1.0) {
    throw std::invalid_argument(fmt::format("game 1 requires lambda >= 1 (got {})", spec.lambda));
  }
  if (spec.lambda < 0.0) {
    throw std::invalid_argument(
        fmt::format("game {} requires lambda >= 0 (got {})", spec.p, spec.lambda));
  }
}

std::optional<std::string> lambda_warning(const GameSpec& spec) {
  if (spec.p != 1 && spec.lambda >= 0.0 && spec.lambda < 1.0) {
    return fmt::format("lambda = {} < 1: outside the convexity hypothesis for game {}",
                       spec.lambda, spec.p);
  }
  return std::nullopt;
}

double cost(const GameSpec& spec, const MeasurementModel& model, Eigen::Index i,
            const AttackProfile& v) {
  validate_game(spec);
  if (i < 0 || i >= model.m()) {
    throw std::out_of_range(fmt::format("player {} outside [1, {}]", i + 1, model.m()));
  }
  switch (spec.p) {
    case 1:
      return mi_global(model, v) + spec.lambda * kl_global(model, v);
    case 2:
      return mi_local(model, i, v[i]) + spec.lambda * kl_global(model, v);
    default:
      return mi_global(model, v) + spec.lambda * kl_local(model, i, v[i]);
  }
}

double potential(const GameSpec& spec, const MeasurementModel& model, const AttackProfile& v) {
  validate_game(spec);
  switch (spec.p) {
    case 1:
      return mi_global(model, v) + spec.lambda * kl_global(model, v);
    case 2: {
      double local = 0.0;
      for (Eigen::Index j = 0; j < model.m(); ++j) local += mi_local(model, j, v[j]);
      return local + spec.lambda * kl_global(model, v);
    }
    default: {
      double local = 0.0;
      for (Eigen::Index j = 0; j < model.m(); ++j) local += kl_local(model, j, v[j]);
      return mi_global(model, v) + spec.lambda * local;
    }
  }
}

}  // namespace stealthgame
