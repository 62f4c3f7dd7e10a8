#include <doctest.h>

#include <cmath>
#include <random>

#include "stealthgame/best_response.hpp"
#include "stealthgame/game.hpp"
#include "stealthgame/info_metrics.hpp"
#include "support.hpp"

using namespace stealthgame;

TEST_CASE("lambda bounds") {
  CHECK_THROWS_AS(validate_game({1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_game({1, 0.999}), std::invalid_argument);
  CHECK_NOTHROW(validate_game({1, 1.0}));
  CHECK_THROWS_AS(validate_game({2, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(validate_game({3, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(validate_game({4, 2.0}), std::invalid_argument);
  CHECK_NOTHROW(validate_game({2, 0.0}));
  CHECK(lambda_warning({2, 0.5}).has_value());
  CHECK(lambda_warning({3, 0.0}).has_value());
  CHECK_FALSE(lambda_warning({2, 1.0}).has_value());
  CHECK_FALSE(lambda_warning({1, 3.0}).has_value());
  const auto model = testing::scalar_model();
  CHECK_THROWS_AS(cost({1, 0.0}, model, 0, AttackProfile::zeros(1)), std::invalid_argument);
}

TEST_CASE("scalar cost values") {
  const auto model = testing::scalar_model();
  const auto zero = AttackProfile::zeros(1);
  CHECK(cost({1, 2.0}, model, 0, zero) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  for (double x : {0.0, 0.2, 1.0, 4.0}) {
    const auto v = zero.with(0, x);
    const double c1 = cost({1, 2.0}, model, 0, v);
    CHECK(cost({2, 2.0}, model, 0, v) == doctest::Approx(c1).epsilon(1e-14));
    CHECK(cost({3, 2.0}, model, 0, v) == doctest::Approx(c1).epsilon(1e-14));
    // phi(v) = -1/2 ln(2+v) - 1/2 ln(1+v) + ln 2 + v/2
    CHECK(c1 == doctest::Approx(-0.5 * std::log(2 + x) - 0.5 * std::log(1 + x) + std::log(2.0) +
                                x / 2)
                    .epsilon(1e-13));
  }
}

TEST_CASE("potential definitions") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto model = testing::random_model(rng);
    const auto v = testing::random_profile(rng, model);
    const double lambda = testing::uniform(rng, 1.0, 10.0);
    for (Eigen::Index i = 0; i < model.m(); ++i)
      CHECK(potential({1, lambda}, model, v) == cost({1, lambda}, model, i, v));

    double expect = 0.0;
    for (Eigen::Index j = 0; j < model.m(); ++j)
      expect += 0.5 * std::log1p(model.c(j) / model.sigma2());
    CHECK(potential({2, lambda}, model, AttackProfile::zeros(model.m())) ==
          doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("exact potential identity") {
  std::mt19937_64 rng(13);
  for (int p = 1; p <= 3; ++p) {
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
      const auto model = testing::random_model(rng);
      const GameSpec spec{p, testing::uniform(rng, p == 1 ? 1.0 : 0.0, 10.0)};
      const auto v = testing::random_profile(rng, model);
      const auto i = testing::uniform_int(rng, 0, static_cast<int>(model.m()) - 1);
      const auto w = v.with(i, testing::uniform(rng, 0.0, 3.0 * testing::mean_s(model)));
      const double d_cost = cost(spec, model, i, w) - cost(spec, model, i, v);
      const double d_pot = potential(spec, model, w) - potential(spec, model, v);
      worst = std::max(worst, std::abs(d_cost - d_pot));
    }
    CAPTURE(p);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("convexity in own action") {
  std::mt19937_64 rng(14);
  for (int p = 1; p <= 3; ++p) {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto model = testing::random_model(rng);
      const GameSpec spec{p, testing::uniform(rng, 1.0, 10.0)};
      const auto v = testing::random_profile(rng, model);
      const auto i = testing::uniform_int(rng, 0, static_cast<int>(model.m()) - 1);
      const double top = 5.0 * testing::mean_s(model);
      const double h = top / 50.0;
      for (int k = 1; k <= 50; ++k) {
        const double t = k * h;
        const double d2 = cost(spec, model, i, v.with(i, t + h)) -
                          2 * cost(spec, model, i, v.with(i, t)) +
                          cost(spec, model, i, v.with(i, t - h));
        worst = std::min(worst, d2);
      }
    }
    CAPTURE(p);
    CHECK(worst >= -1e-8);
  }
}

TEST_CASE("cost slope matches finite differences") {
  std::mt19937_64 rng(15);
  for (int p = 1; p <= 3; ++p) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto model = testing::random_model(rng);
      const GameSpec spec{p, testing::uniform(rng, 1.0, 10.0)};
      const auto v = testing::random_profile(rng, model);
      const auto i = testing::uniform_int(rng, 0, static_cast<int>(model.m()) - 1);
      const auto ctx = br_context(model, i, v);
      const double l = v[i] + 0.01;
      const double h = 1e-5 * (1 + l);
      const double fd = (cost(spec, model, i, v.with(i, l + h)) -
                         cost(spec, model, i, v.with(i, l - h))) / (2 * h);
      const double slope = 0.5 * cost_slope(p, ctx, model.sigma2(), spec.lambda, l);
      CAPTURE(p);
      CAPTURE(trial);
      CHECK(std::abs(slope - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("log-det derivative") {
  // d/dv_i log|K (sigma2 I + diag v)^{-1} + I|
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    const auto model = testing::random_model(rng);
    const auto v = testing::random_profile(rng, model);
    const auto i = testing::uniform_int(rng, 0, static_cast<int>(model.m()) - 1);
    const Matrix k = model.signal_cov();
    auto term = [&](double t) {
      Vector d = v.values();
      d(i) = t;
      const Vector w = (model.sigma2() + d.array()).inverse();
      return testing::lu_log_det(k * w.asDiagonal() +
                                 Matrix::Identity(model.m(), model.m()));
    };
    const double h = 1e-5 * (1 + v[i]);
    const double fd = (term(v[i] + h) - term(v[i] - h)) / (2 * h);
    const double gamma = br_context(model, i, v).gamma;
    const double analytic = log_det_term_slope(gamma, model.sigma2(), v[i]);
    CAPTURE(trial);
    CHECK(std::abs(analytic - fd) <= 1e-6 * std::max(std::abs(fd), 1e-12) + 1e-11);
  }
}
