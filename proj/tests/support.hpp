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

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "ocdr/dynamics.hpp"
#include "ocdr/model_zoo.hpp"
#include "ocdr/signals.hpp"

namespace ocdr::test {

inline LtiSystem double_integrator() { return build(kDoubleIntegrator).system; }

inline LtiSystem double_integrator_at_rest() {
  ProblemOverrides o;
  o.x0 = Eigen::Vector2d::Zero();
  o.xf = Eigen::Vector2d::Zero();
  return build(kDoubleIntegrator, o).system;
}

/// x' = u on [0, 1] from 0 to 1, r = 1, bounds +-2. Optimum u = 1, J = 1/2.
inline LtiSystem scalar_integrator() {
  LtiSystem s;
  s.A = Eigen::MatrixXd::Zero(1, 1);
  s.b = Eigen::VectorXd::Ones(1);
  s.r = 1.0;
  s.lower = -2.0;
  s.upper = 2.0;
  s.x0 = Eigen::VectorXd::Zero(1);
  s.xf = Eigen::VectorXd::Ones(1);
  s.t_final = 1.0;
  return s;
}

/// Lightly damped oscillator with a non-trivial A, for properties that should
/// not hinge on the double integrator's nilpotent structure.
inline LtiSystem oscillator() {
  LtiSystem s;
  s.A.resize(2, 2);
  s.A << 0.0, 1.0, -4.0, -0.3;
  s.b = Eigen::Vector2d(0.0, 1.0);
  s.r = 0.5;
  s.lower = -3.0;
  s.upper = 3.0;
  s.x0 = Eigen::Vector2d(1.0, 0.0);
  s.xf = Eigen::Vector2d(0.0, 0.0);
  s.t_final = 2.0;
  return s;
}

class Rng {
 public:
  explicit Rng(unsigned seed) : gen_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

  Eigen::VectorXd vector(int n, double scale = 1.0) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = scale * uniform();
    return v;
  }

  /// Smooth random signal: a few random Fourier modes plus a linear trend.
  Signal smooth(const TimeGrid& grid, double scale = 1.0) {
    const double a0 = uniform(), a1 = uniform(), c1 = uniform(), c2 = uniform(), s3 = uniform();
    const double T = grid.span();
    return Signal::sample(grid, [&](double t) {
      const double s = t / T;
      return scale * (a0 + a1 * s + c1 * std::cos(2 * M_PI * s) + c2 * std::sin(3 * M_PI * s) +
                      s3 * std::sin(7 * M_PI * s));
    });
  }

  /// Piecewise-linear signal with independent random node values.
  Signal nodes(const TimeGrid& grid, double scale = 1.0) {
    return Signal(grid, vector(grid.nodes(), scale));
  }

 private:
  std::mt19937_64 gen_;
};

inline double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace ocdr::test
