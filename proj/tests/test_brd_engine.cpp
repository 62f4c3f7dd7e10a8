#include <doctest.h>

#include <random>

#include "stealthgame/brd_engine.hpp"
#include "stealthgame/game.hpp"
#include "stealthgame/info_metrics.hpp"
#include "support.hpp"

using namespace stealthgame;

namespace {

MeasurementModel three_bus() { return testing::case_model("case3.net", 0.5, 20.0); }

AttackProfile random_start(std::mt19937_64& rng, const MeasurementModel& model) {
  return testing::random_profile(rng, model, 10.0);
}

}  // namespace

TEST_CASE("scalar game converges in one round of updates") {
  const auto model = testing::scalar_model();
  for (int p = 1; p <= 3; ++p) {
    const auto r = run_brd({p, 2.0}, model, AttackProfile::zeros(1));
    CHECK(r.report.converged);
    CHECK(r.v_star[0] == doctest::Approx(testing::kGoldenRatioConj).epsilon(1e-9));
    REQUIRE(r.trajectory.size() >= 2);
    CHECK(r.trajectory[1].round == 1);
    CHECK(r.trajectory[1].v(0) == doctest::Approx(testing::kGoldenRatioConj).epsilon(1e-9));
    CHECK(r.report.rounds_used == 2);  // the second round certifies convergence
  }
}

TEST_CASE("overwhelming detection weight keeps the origin") {
  // From v = 0 every cost still slopes down at the origin, so the best
  // responses are O(1/lambda) rather than exactly 0. Game 3's constant
  // carries s_i^2 / sigma2 and is much larger.
  const auto model = three_bus();
  for (int p = 1; p <= 2; ++p) {
    const auto r = run_brd({p, 1e9}, model, AttackProfile::zeros(model.m()));
    CAPTURE(p);
    CHECK(r.report.converged);
    CHECK(r.report.rounds_used == 1);
    CHECK(r.v_star.values().cwiseAbs().maxCoeff() <= 1e-8);
  }
  const auto r3 = run_brd({3, 1e9}, model, AttackProfile::zeros(model.m()));
  CHECK(r3.report.converged);
  CHECK(r3.v_star.values().cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("trajectory bookkeeping") {
  const auto model = three_bus();
  const GameSpec spec{2, 3.0};
  const auto r = run_brd(spec, model, AttackProfile::zeros(model.m()));
  REQUIRE(r.report.converged);
  const auto m = model.m();
  CHECK(r.trajectory.size() == static_cast<std::size_t>(1 + r.report.rounds_used * m));
  CHECK_FALSE(r.trajectory[0].player.has_value());
  CHECK(r.trajectory[0].round == 0);
  for (std::size_t k = 1; k < r.trajectory.size(); ++k) {
    const auto& rec = r.trajectory[k];
    REQUIRE(rec.player.has_value());
    CHECK(*rec.player == static_cast<Eigen::Index>((k - 1) % m));
    CHECK(rec.round == static_cast<int>((k - 1) / m) + 1);
    Vector diff = rec.v - r.trajectory[k - 1].v;
    diff(*rec.player) = 0.0;
    CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
    const AttackProfile v(rec.v);
    CHECK(rec.potential == potential(spec, model, v));
    CHECK(rec.mi_global == mi_global(model, v));
    CHECK(rec.kl_global == kl_global(model, v));
  }
  CHECK(r.trajectory.back().v == r.v_star.values());

  BrdOptions quiet;
  quiet.record_trajectory = false;
  const auto q = run_brd(spec, model, AttackProfile::zeros(m), quiet);
  CHECK(q.trajectory.empty());
  CHECK(q.v_star == r.v_star);
}

TEST_CASE("uniqueness from random starts and order invariance") {
  std::mt19937_64 rng(40);
  for (const auto& model : {three_bus(), testing::case9_model()}) {
    for (int p = 1; p <= 3; ++p) {
      const GameSpec spec{p, 2.0};
      BrdOptions opts;
      opts.tol = 1e-8;
      const auto base = run_brd(spec, model, AttackProfile::zeros(model.m()), opts);
      REQUIRE(base.report.converged);
      CHECK(base.report.ne_residual <= 10 * opts.tol);
      CHECK(verify_ne(spec, model, base.v_star) <= 10 * opts.tol);
      CHECK(potential_audit(base.trajectory).empty());
      for (int trial = 0; trial < 10; ++trial) {
        const auto r = run_brd(spec, model, random_start(rng, model), opts);
        CAPTURE(p);
        CAPTURE(trial);
        REQUIRE(r.report.converged);
        CHECK((r.v_star.values() - base.v_star.values()).lpNorm<Eigen::Infinity>() <= 1e-5);
        CHECK(potential_audit(r.trajectory).empty());
      }
      BrdOptions reversed = opts;
      for (Eigen::Index i = model.m() - 1; i >= 0; --i) reversed.order.push_back(i);
      const auto r = run_brd(spec, model, AttackProfile::zeros(model.m()), reversed);
      CHECK((r.v_star.values() - base.v_star.values()).lpNorm<Eigen::Infinity>() <= 1e-5);
    }
  }
}

TEST_CASE("random desk models") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto model = testing::random_model(rng, 10);
    for (int p = 1; p <= 3; ++p) {
      const GameSpec spec{p, testing::uniform(rng, 1.0, 10.0)};
      const auto r = run_brd(spec, model, random_start(rng, model));
      CAPTURE(trial);
      CAPTURE(p);
      CHECK(r.report.converged);
      CHECK(r.report.ne_residual <= 1e-8);
      const auto violations = potential_audit(r.trajectory);
      CHECK(violations.empty());
    }
  }
}

TEST_CASE("verify_ne") {
  const auto model = three_bus();
  const GameSpec spec{1, 2.0};
  CHECK(verify_ne(spec, model, AttackProfile::zeros(model.m())) > 0.0);
  const auto r = run_brd(spec, model, AttackProfile::zeros(model.m()));
  for (Eigen::Index i = 0; i < model.m(); ++i)
    CHECK(verify_ne(spec, model, r.v_star.with(i, r.v_star[i] + 0.1)) >= 0.09);
}

TEST_CASE("non-convergence is reported") {
  const auto model = testing::case9_model();
  BrdOptions opts;
  opts.t_max = 2;
  const auto r = run_brd({1, 2.0}, model, AttackProfile::zeros(model.m()), opts);
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.rounds_used == 2);
  CHECK(r.report.max_delta_last_round >= opts.tol);
}

TEST_CASE("argument checks") {
  const auto model = three_bus();
  BrdOptions bad;
  bad.t_max = 0;
  CHECK_THROWS_AS(run_brd({1, 2.0}, model, AttackProfile::zeros(model.m()), bad),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_brd({1, 2.0}, model, AttackProfile::zeros(2)), std::invalid_argument);
  BrdOptions order;
  order.order = {0, 0, 1, 2, 3, 4};
  CHECK_THROWS_AS(run_brd({1, 2.0}, model, AttackProfile::zeros(model.m()), order),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_brd({1, 0.5}, model, AttackProfile::zeros(model.m())),
                  std::invalid_argument);
}

TEST_CASE("zero lambda is flagged as degenerate") {
  const auto model = testing::scalar_model();
  const auto r = run_brd({2, 0.0}, model, AttackProfile::zeros(1));
  CHECK(r.report.degenerate);
  CHECK(r.v_star[0] == kVMax);
}

TEST_CASE("potential audit") {
  std::vector<TrajectoryRecord> flat(4);
  for (auto& rec : flat) rec.potential = 1.0;
  CHECK(potential_audit(flat).empty());
  flat[2].potential = 1.0 + 2e-9;
  const auto v = potential_audit(flat);
  REQUIRE(v.size() == 1);
  CHECK(v[0].index == 2);
  CHECK(v[0].increase == doctest::Approx(2e-9));
  flat[2].potential = 1.0 + 5e-10;
  CHECK(potential_audit(flat).empty());
}
