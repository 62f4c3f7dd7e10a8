#pragma once

#include <optional>
#include <string>

#include "stealthgame/gaussian_model.hpp"

namespace stealthgame {

/// Which of the three attack games is played, and the detection weight.
///   p = 1: global MI  + lambda * global KL   (lambda >= 1)
///   p = 2: local MI   + lambda * global KL   (lambda >= 0)
///   p = 3: global MI  + lambda * local KL    (lambda >= 0)
struct GameSpec {
  int p = 1;
  double lambda = 1.0;
};

/// Throws std::invalid_argument for p outside {1,2,3} or lambda below the
/// game's bound.
void validate_game(const GameSpec& spec);

/// Non-fatal caveat: lambda in [0,1) for p in {2,3} lies outside the
/// convexity hypothesis (lambda >= 1). Returns nullopt when nothing to report.
std::optional<std::string> lambda_warning(const GameSpec& spec);

/// Cost of player i (0-based) under profile v.
double cost(const GameSpec& spec, const MeasurementModel& model, Eigen::Index i,
            const AttackProfile& v);

/// Exact potential: psi_1 = phi_1; psi_2 = sum_j mi_local(j) + lambda kl_global;
/// psi_3 = mi_global + lambda sum_j kl_local(j).
double potential(const GameSpec& spec, const MeasurementModel& model, const AttackProfile& v);

}  // namespace stealthgame
