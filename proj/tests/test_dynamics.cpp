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

#include <cmath>

#include "ocdr/dynamics.hpp"
#include "ocdr/model_zoo.hpp"
#include "support.hpp"

using namespace ocdr;
using ocdr::test::Rng;

namespace {

LtiSystem zero_dynamics(int n) {
  LtiSystem s;
  s.A = Eigen::MatrixXd::Zero(n, n);
  s.b = Eigen::VectorXd::Zero(n);
  s.b[0] = 1.0;
  s.x0 = Eigen::VectorXd::Zero(n);
  s.xf = Eigen::VectorXd::Zero(n);
  return s;
}

}  // namespace

TEST_CASE("system validation names the field") {
  LtiSystem s = test::double_integrator();
  s.lower = s.upper;
  CHECK_THROWS_WITH_AS(s.validate(), "bounds must satisfy lower < upper", ProblemError);
  s = test::double_integrator();
  s.r = 0.0;
  CHECK_THROWS_AS(s.validate(), ProblemError);
  s = test::double_integrator();
  s.b.setZero();
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("'b'"), ProblemError);
  s = test::double_integrator();
  s.A(0, 0) = INFINITY;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("'A'"), ProblemError);
}

TEST_CASE("transition cache substeps and round trip") {
  const auto man = build(kMachineToolManipulator).system;
  const TransitionCache cache(man, 0.522 / 2000);
  CHECK(man.A.cwiseAbs().colwise().sum().maxCoeff() * cache.substep() <= 0.5);
  CHECK(cache.round_trip_error() <= 1e-10);

  const TransitionCache di(test::double_integrator(), 1e-3);
  CHECK(di.substeps() == 1);
  Eigen::Matrix2d expected;
  expected << 1.0, 1e-3, 0.0, 1.0;
  CHECK((di.interval_exponential() - expected).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("state propagation examples") {
  const auto di = test::double_integrator();
  const TimeGrid g = TimeGrid::over(1.0, 1000);

  const Trajectory free = propagate_state(di, Signal::zero(g), Eigen::Vector2d(0.0, 1.0));
  CHECK(free.terminal()[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(free.terminal()[1] == doctest::Approx(1.0).epsilon(1e-13));

  const Signal u = Signal::sample(g, [](double t) { return 6 * t - 4; });
  const Trajectory x = propagate_state(di, u, Eigen::Vector2d(0.0, 1.0));
  CHECK(std::abs(x.terminal()[0]) <= 1e-6);
  CHECK(std::abs(x.terminal()[1]) <= 1e-6);
  // exact for linear controls: x2 = 1 - 4t + 3t^2, x1 = t - 2t^2 + t^3
  for (int i = 0; i < g.nodes(); i += 97) {
    const double t = g.node(i);
    CHECK(x.at(i)[1] == doctest::Approx(1 - 4 * t + 3 * t * t).epsilon(1e-12));
    CHECK(std::abs(x.at(i)[0] - (t - 2 * t * t + t * t * t)) <= 1e-12);
  }

  const auto z = zero_dynamics(3);
  const Eigen::Vector3d x_init(1.0, -2.0, 0.5);
  const Trajectory frozen = propagate_state(z, Signal::zero(TimeGrid::over(1.0, 10)), x_init);
  for (int i = 0; i < 11; ++i) CHECK((frozen.at(i) - x_init).norm() == 0.0);
}

TEST_CASE("adjoint propagation examples") {
  const auto di = test::double_integrator();
  const TimeGrid g = TimeGrid::over(1.0, 100);
  const Trajectory lam = propagate_adjoint(di, g, Eigen::Vector2d(6.0, 4.0));
  for (int i = 0; i < g.nodes(); ++i) {
    CHECK(lam.at(i)[0] == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(std::abs(lam.at(i)[1] - (4.0 - 6.0 * g.node(i))) <= 1e-12);
  }
  const Signal w = adjoint_output(di, g, Eigen::Vector2d(6.0, 4.0));
  for (int i = 0; i < g.nodes(); ++i) CHECK(std::abs(w[i] - (4.0 - 6.0 * g.node(i))) <= 1e-12);

  CHECK(norm_linf(adjoint_output(di, g, Eigen::Vector2d::Zero())) == 0.0);
  const auto man = build(kMachineToolManipulator).system;
  const TimeGrid gm = TimeGrid::over(man.t_final, 200);
  CHECK(propagate_adjoint(man, gm, Eigen::VectorXd::Zero(7)).values().cwiseAbs().maxCoeff() == 0.0);

  const auto z = zero_dynamics(3);
  const Eigen::Vector3d l0(1.0, 0.0, 0.0);
  const Trajectory still = propagate_adjoint(z, TimeGrid::over(1.0, 5), l0);
  for (int i = 0; i < 6; ++i) CHECK((still.at(i) - l0).norm() == 0.0);
  const Signal one = adjoint_output(z, TimeGrid::over(1.0, 5), l0);
  for (int i = 0; i < 6; ++i) CHECK(one[i] == 1.0);
}

TEST_CASE("terminal-anchored adjoint matches the initial anchor") {
  const auto osc = test::oscillator();
  const LtiPropagator prop(osc, TimeGrid::over(osc.t_final, 400));
  const Eigen::Vector2d l0(0.7, -1.3);
  const Trajectory fwd = prop.adjoint(AdjointState::at_start(l0));
  const Trajectory bwd = prop.adjoint(AdjointState::at_end(fwd.terminal()));
  CHECK((fwd.values() - bwd.values()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("semigroup property") {
  Rng rng(3);
  const auto osc = test::oscillator();
  const int n = 400;
  const TimeGrid full = TimeGrid::over(osc.t_final, n);
  const TimeGrid first = TimeGrid::over(osc.t_final / 2, n / 2);
  LtiSystem half = osc;
  half.t_final = osc.t_final / 2;
  for (int trial = 0; trial < 5; ++trial) {
    const Signal u = rng.nodes(full, 2.0);
    const Eigen::VectorXd x0 = rng.vector(2);
    const Eigen::VectorXd direct = propagate_state(osc, u, x0).terminal();

    const Signal u1(first, u.values().head(n / 2 + 1));
    const Signal u2(first, u.values().tail(n / 2 + 1));
    const Eigen::VectorXd mid = propagate_state(half, u1, x0).terminal();
    const Eigen::VectorXd restarted = propagate_state(half, u2, mid).terminal();
    CHECK((direct - restarted).norm() <= 1e-9 * (1.0 + direct.norm()));
  }
}

TEST_CASE("linearity in initial state and control") {
  Rng rng(5);
  for (const auto& sys : {test::oscillator(), build(kMachineToolManipulator).system}) {
    const TimeGrid g = TimeGrid::over(sys.t_final, 300);
    const int n = sys.dim();
    const Signal u1 = rng.nodes(g), u2 = rng.nodes(g);
    const Eigen::VectorXd x1 = rng.vector(n, 1e-3), x2 = rng.vector(n, 1e-3);
    const double al = rng.uniform(), be = rng.uniform();
    const Eigen::MatrixXd lhs = propagate_state(sys, al * u1 + be * u2, al * x1 + be * x2).values();
    const Eigen::MatrixXd rhs =
        al * propagate_state(sys, u1, x1).values() + be * propagate_state(sys, u2, x2).values();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("adjoint pairing identity") {
  Rng rng(7);
  const auto osc = test::oscillator();
  auto pairing_gap = [&](int n) {
    const TimeGrid g = TimeGrid::over(osc.t_final, n);
    const Signal u = Signal::sample(g, [](double t) { return std::sin(2 * t) + 0.3 * t; });
    const Eigen::Vector2d x0(0.4, -0.2), l0(1.1, 0.5);
    const Trajectory x = propagate_state(osc, u, x0);
    const Trajectory lam = propagate_adjoint(osc, g, l0);
    const double lhs = x.terminal().dot(lam.terminal()) - x0.dot(l0);
    const double rhs = inner_product(u, adjoint_output(osc, g, l0));
    return std::abs(lhs - rhs);
  };
  const double coarse = pairing_gap(200);
  const double fine = pairing_gap(400);
  CHECK(coarse <= 1e-4);
  CHECK(coarse / fine >= 3.5);  // quadrature error only
}

TEST_CASE("non-finite propagation is reported") {
  LtiSystem s = test::oscillator();
  s.A << 800.0, 0.0, 0.0, 800.0;
  s.t_final = 2.0;
  const Signal u = Signal::zero(TimeGrid::over(2.0, 10));
  CHECK_THROWS_WITH_AS(propagate_state(s, u, Eigen::Vector2d(1.0, 1.0)), "dynamics overflow", DynamicsError);
}
