#include "stealthgame/brd_engine.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "stealthgame/errors.hpp"
#include "stealthgame/info_metrics.hpp"

namespace stealthgame {
namespace {

TrajectoryRecord snapshot(const GameSpec& spec, const MeasurementModel& model,
                          const AttackProfile& v, int round,
                          std::optional<Eigen::Index> player) {
  TrajectoryRecord rec;
  rec.round = round;
  rec.player = player;
  rec.v = v.values();
  rec.potential = potential(spec, model, v);
  rec.mi_global = mi_global(model, v);
  rec.kl_global = kl_global(model, v);
  return rec;
}

std::vector<Eigen::Index> resolve_order(const BrdOptions& options, Eigen::Index m) {
  if (options.order.empty()) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    return order;
  }
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (const auto i : options.order) {
    if (i < 0 || i >= m || seen[static_cast<std::size_t>(i)]) {
      throw std::invalid_argument("player order must be a permutation of 0..m-1");
    }
    seen[static_cast<std::size_t>(i)] = true;
  }
  if (static_cast<Eigen::Index>(options.order.size()) != m) {
    throw std::invalid_argument("player order must be a permutation of 0..m-1");
  }
  return options.order;
}

}  // namespace

BrdResult run_brd(const GameSpec& spec, const MeasurementModel& model, const AttackProfile& v0,
                  const BrdOptions& options) {
  validate_game(spec);
  if (v0.size() != model.m()) throw std::invalid_argument("initial profile length differs from m");
  if (options.t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");

  const auto order = resolve_order(options, model.m());
  BrdResult result;
  Vector v = v0.values();
  if (options.record_trajectory) {
    result.trajectory.push_back(snapshot(spec, model, v0, 0, std::nullopt));
  }

  for (int t = 1; t <= options.t_max; ++t) {
    double max_delta = 0.0;
    for (const auto i : order) {
      const AttackProfile current(v);
      const double next = best_response(spec, model, i, current, options.br3);
      if (!std::isfinite(next)) {
        throw NumericalError(
            fmt::format("non-finite best response for player {} in round {}", i + 1, t));
      }
      if (next >= kVMax) result.report.degenerate = true;
      max_delta = std::max(max_delta, std::abs(next - v(i)));
      v(i) = next;
      if (options.record_trajectory) {
        result.trajectory.push_back(snapshot(spec, model, AttackProfile(v), t, i));
      }
    }
    result.report.rounds_used = t;
    result.report.max_delta_last_round = max_delta;
    if (max_delta < options.tol) {
      result.report.converged = true;
      break;
    }
  }

  result.v_star = AttackProfile(v);
  result.report.ne_residual = verify_ne(spec, model, result.v_star, options.br3);
  return result;
}

double verify_ne(const GameSpec& spec, const MeasurementModel& model, const AttackProfile& v,
                 Br3Variant variant) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < model.m(); ++i) {
    worst = std::max(worst, std::abs(v[i] - best_response(spec, model, i, v, variant)));
  }
  return worst;
}

std::vector<PotentialViolation> potential_audit(const std::vector<TrajectoryRecord>& trajectory,
                                                double slack) {
  std::vector<PotentialViolation> out;
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    const double rise = trajectory[k].potential - trajectory[k - 1].potential;
    if (rise > slack) out.push_back({k, rise});
  }
  return out;
}

}  // namespace stealthgame
