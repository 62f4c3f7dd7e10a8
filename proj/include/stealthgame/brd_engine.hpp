#pragma once

#include <optional>
#include <vector>

#include "stealthgame/best_response.hpp"

namespace stealthgame {

/// One best-response update. The record with round 0 and no player is the
/// initial profile.
struct TrajectoryRecord {
  int round = 0;
  std::optional<Eigen::Index> player;  // 0-based
  Vector v;
  double potential = 0.0;
  double mi_global = 0.0;
  double kl_global = 0.0;
};

struct ConvergenceReport {
  bool converged = false;
  int rounds_used = 0;
  double max_delta_last_round = 0.0;
  double ne_residual = 0.0;
  // Some best response hit kVMax (no finite minimiser, lambda = 0).
  bool degenerate = false;
};

struct BrdOptions {
  int t_max = 100;
  double tol = 1e-9;
  Br3Variant br3 = Br3Variant::kConsistent;
  // Player order within a round; empty means 0, 1, ..., m-1.
  std::vector<Eigen::Index> order;
  bool record_trajectory = true;
};

struct BrdResult {
  AttackProfile v_star;
  std::vector<TrajectoryRecord> trajectory;
  ConvergenceReport report;
};

/// Round-robin (Gauss-Seidel) best-response dynamics from v0. Each round
/// updates every player once, in order, against the freshest profile. Stops
/// after the first round whose largest coordinate change is below tol, or
/// after t_max rounds. Throws NumericalError on non-finite values.
BrdResult run_brd(const GameSpec& spec, const MeasurementModel& model, const AttackProfile& v0,
                  const BrdOptions& options = {});

/// max_i |v_i - BR_i(v_{-i})|.
double verify_ne(const GameSpec& spec, const MeasurementModel& model, const AttackProfile& v,
                 Br3Variant variant = Br3Variant::kConsistent);

struct PotentialViolation {
  std::size_t index = 0;  // trajectory[index - 1] -> trajectory[index]
  double increase = 0.0;
};

inline constexpr double kPotentialSlack = 1e-9;

/// Every consecutive pair of records whose potential rose by more than slack.
std::vector<PotentialViolation> potential_audit(const std::vector<TrajectoryRecord>& trajectory,
                                                double slack = kPotentialSlack);

}  // namespace stealthgame
