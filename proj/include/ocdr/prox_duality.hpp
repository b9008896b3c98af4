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

#include "ocdr/dynamics.hpp"
#include "ocdr/projections.hpp"
#include "ocdr/signals.hpp"

namespace ocdr {

/// Primal value (r/2)||u||^2, dual value int vartheta(w) - <a_perp, w>, and
/// their sum. The sum vanishes at an optimal primal-dual pair.
struct ObjectivePair {
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
};

/// Prox of f = (r/2)||.||^2 + indicator of the box: P_box(u / (1 + r)).
Signal prox_f(const LtiSystem& sys, const Signal& u);

/// Prox of the indicator of the affine set, i.e. the affine projection.
Signal prox_g(const AffineProjector& projector, const Signal& u);

/// Pointwise conjugate integrand. Band edges w = r*lower and w = r*upper belong
/// to the quadratic branch.
double vartheta(const LtiSystem& sys, double w);

struct ThetaValue {
  double value;
  Eigen::VectorXd gradient;
};

/// theta(p) and its gradient in p; branch chosen on b^T p.
ThetaValue theta_and_grad(const LtiSystem& sys, const Eigen::VectorXd& p);

double primal_objective(const LtiSystem& sys, const Signal& u);
double dual_objective(const LtiSystem& sys, const Signal& a_perp, const Signal& w);
ObjectivePair duality_gap(const LtiSystem& sys, const Signal& u, const Signal& w, const Signal& a_perp);

}  // namespace ocdr
