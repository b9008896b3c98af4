/*
 Copyright 2026 The ocdr Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "ocdr/certificate.hpp"
#include "ocdr/dr_solver.hpp"
#include "ocdr/prox_duality.hpp"
#include "support.hpp"

using namespace ocdr;
using ocdr::test::Rng;

TEST_CASE("prox_f examples") {
  const auto di = test::double_integrator();
  const TimeGrid g = TimeGrid::over(1.0, 20);
  CHECK(norm_linf(prox_f(di, Signal::constant(g, 2.0)) - Signal::constant(g, 1.5)) <= 1e-15);
  CHECK(norm_linf(prox_f(di, Signal::zero(g))) == 0.0);
  CHECK(norm_linf(prox_f(di, Signal::constant(g, 5.0)) - Signal::constant(g, 2.5)) == 0.0);
  LtiSystem heavy = di;
  heavy.r = 7.0;
  CHECK(norm_linf(prox_f(heavy, Signal::zero(g))) == 0.0);
}

TEST_CASE("prox_g examples") {
  const TimeGrid g = TimeGrid::over(1.0, 200);
  const ShootingOperator di(test::double_integrator(), g);
  Rng rng(1);
  const Signal in_a = di.project(rng.smooth(g));
  CHECK(norm_linf(prox_g(di, in_a) - in_a) <= 1e-10);
  const Signal ramp = prox_g(di, Signal::zero(g));
  for (int i = 0; i < g.nodes(); ++i) CHECK(std::abs(ramp[i] - (6 * g.node(i) - 4)) <= 1e-10);
  const ShootingOperator sc(test::scalar_integrator(), g);
  CHECK(norm_linf(prox_g(sc, Signal::zero(g)) - Signal::constant(g, 1.0)) <= 1e-13);
}

TEST_CASE("vartheta examples and branch edges") {
  const auto di = test::double_integrator();
  CHECK(vartheta(di, 1.0) == doctest::Approx(2.5 - 6.25 / 6.0).epsilon(1e-15));
  CHECK(vartheta(di, 1.0) == doctest::Approx(1.4583333333333333).epsilon(1e-15));
  CHECK(vartheta(di, 0.0) == 0.0);
  CHECK(vartheta(di, 0.5) == doctest::Approx(0.375).epsilon(1e-15));
  const double edge = di.r * di.upper;
  CHECK(vartheta(di, edge) == edge * edge / (2 * di.r));
  CHECK(vartheta(di, -edge) == edge * edge / (2 * di.r));
  CHECK(vartheta(di, -1.0) == doctest::Approx(1.4583333333333333).epsilon(1e-15));
}

TEST_CASE("vartheta matches the distance form of the conjugate") {
  const auto di = test::double_integrator();
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const double w = rng.uniform(-4, 4);
    const double d = w / di.r - std::clamp(w / di.r, di.lower, di.upper);
    CHECK(vartheta(di, w) == doctest::Approx(w * w / (2 * di.r) - di.r / 2 * d * d).epsilon(1e-12));
  }
}

TEST_CASE("vartheta is convex") {
  const auto di = test::double_integrator();
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3), s = rng.uniform(0, 1);
    CHECK(vartheta(di, s * a + (1 - s) * b) <= s * vartheta(di, a) + (1 - s) * vartheta(di, b) + 1e-14);
  }
}

TEST_CASE("theta and gradient examples") {
  const auto di = test::double_integrator();
  const auto zero = theta_and_grad(di, Eigen::Vector2d(0.7, 0.0));
  CHECK(zero.value == 0.0);
  CHECK(zero.gradient.norm() == 0.0);

  const auto up = theta_and_grad(di, Eigen::Vector2d(0.3, 1.0));
  CHECK(up.value == doctest::Approx(1.4583333333333333).epsilon(1e-15));
  CHECK((up.gradient - 2.5 * di.b).norm() <= 1e-15);

  const auto mid = theta_and_grad(di, Eigen::Vector2d(0.0, 0.2));
  CHECK((mid.gradient - Eigen::Vector2d(0.0, 0.6)).norm() <= 1e-15);

  const auto low = theta_and_grad(di, Eigen::Vector2d(0.0, -1.0));
  CHECK((low.gradient - (-2.5) * di.b).norm() <= 1e-15);
}

TEST_CASE("theta gradient matches finite differences") {
  const auto osc = test::oscillator();
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd p = rng.vector(2, 3.0);
    const auto tg = theta_and_grad(osc, p);
    for (int j = 0; j < 2; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(2);
      e[j] = 1e-6;
      const double fd = (theta_and_grad(osc, p + e).value - theta_and_grad(osc, p - e).value) / 2e-6;
      CHECK(fd == doctest::Approx(tg.gradient[j]).epsilon(1e-6));
    }
  }
}

TEST_CASE("primal objective examples") {
  const auto di = test::double_integrator();
  const TimeGrid g = TimeGrid::over(1.0, 1000);
  CHECK(primal_objective(di, Signal::zero(g)) == 0.0);
  const Signal ramp = Signal::sample(g, [](double t) { return 6 * t - 4; });
  CHECK(std::abs(primal_objective(di, ramp) - 2.0 / 3.0) <= 1e-4);
  LtiSystem s = di;
  s.r = 2.0;
  CHECK(primal_objective(s, Signal::constant(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dual objective examples") {
  const auto di = test::double_integrator();
  const TimeGrid g = TimeGrid::over(1.0, 1000);
  const Signal ap = Signal::sample(g, [](double t) { return 6 * t - 4; });
  CHECK(dual_objective(di, ap, Signal::zero(g)) == 0.0);
  CHECK(std::abs(dual_objective(di, ap, Signal::constant(g, 0.1)) - 0.115) <= 1e-4);

  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const Signal w = rng.nodes(g, 3.0);
    CHECK(dual_objective(di, Signal::zero(g), w) ==
          doctest::Approx(dual_objective(di, Signal::zero(g), -w)).epsilon(1e-14));
  }
}

TEST_CASE("duality gap examples") {
  const TimeGrid g = TimeGrid::over(1.0, 100);
  const auto rest = test::double_integrator_at_rest();
  const auto z = duality_gap(rest, Signal::zero(g), Signal::zero(g), Signal::zero(g));
  CHECK(z.primal_value == 0.0);
  CHECK(z.dual_value == 0.0);
  CHECK(z.gap == 0.0);

  const auto sc = test::scalar_integrator();
  const Signal one = Signal::constant(g, 1.0);
  const auto s = duality_gap(sc, one, one, one);
  CHECK(s.primal_value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.dual_value == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(std::abs(s.gap) <= 1e-14);
}

TEST_CASE("converged double-integrator pair closes the gap") {
  const auto di = test::double_integrator();
  const ShootingOperator p(di, TimeGrid::over(1.0, 1000));
  DrConfig cfg;
  cfg.gamma = 0.75;
  const DrRun run = solve(p, cfg);
  REQUIRE(run.converged);
  const auto gap = duality_gap(di, run.u_tilde, run.w, run.a_perp);
  CHECK(std::abs(gap.gap) <= 1e-4 * (1.0 + std::abs(gap.primal_value)));
}

TEST_CASE("residual of the affine prox is an adjoint output") {
  Rng rng(6);
  for (const auto& sys : {test::double_integrator(), test::oscillator()}) {
    const ShootingOperator p(sys, TimeGrid::over(sys.t_final, 1000));
    for (int i = 0; i < 5; ++i) {
      const Signal u = rng.smooth(p.grid(), 3.0);
      const Signal pg = prox_g(p, u);
      CHECK(norm_linf(pg + (u - pg) - u) <= 1e-14 * (1.0 + norm_linf(u)));
      CHECK(fit_adjoint(p.propagator(), u - pg).residual <= 1e-7);
    }
  }
}

TEST_CASE("prox_f is firmly nonexpansive") {
  Rng rng(7);
  const auto di = test::double_integrator();
  const TimeGrid g = TimeGrid::over(1.0, 300);
  for (int i = 0; i < 50; ++i) {
    const Signal u = rng.nodes(g, 6.0), v = rng.nodes(g, 6.0);
    const Signal d = prox_f(di, u) - prox_f(di, v);
    CHECK(inner_product(d, d) <= inner_product(d, u - v) + 1e-10);
  }
}

TEST_CASE("weak duality") {
  // Bounds wide enough that a_perp = 6t - 4 and small feasible perturbations of it
  // stay inside the box, so every u below lies in both constraint sets.
  Rng rng(8);
  LtiSystem wide = test::double_integrator();
  wide.lower = -5.0;
  wide.upper = 5.0;
  const TimeGrid g = TimeGrid::over(1.0, 20000);
  const ShootingOperator p(wide, g);
  const Signal ap = p.a_perp();
  for (int i = 0; i < 20; ++i) {
    const Signal d = p.project(rng.smooth(g)) - ap;
    const Signal u = ap + (0.9 / std::max(1.0, norm_linf(d))) * d;
    REQUIRE(norm_linf(u) <= 5.0);
    const Signal w = adjoint_output(wide, g, rng.vector(2, 4.0));
    CHECK(primal_objective(wide, u) + dual_objective(wide, ap, w) >= -1e-6);
  }

  const auto di = test::double_integrator();
  const ShootingOperator pd(di, TimeGrid::over(1.0, 1000));
  DrConfig cfg;
  cfg.gamma = 0.75;
  const DrRun run = solve(pd, cfg);
  for (int i = 0; i < 20; ++i) {
    const Signal w = adjoint_output(di, pd.grid(), rng.vector(2, 6.0));
    CHECK(primal_objective(di, run.u_tilde) + dual_objective(di, run.a_perp, w) >= -1e-6);
  }
}
