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

#include "ocdr/prox_duality.hpp"

namespace ocdr {

Signal prox_f(const LtiSystem& sys, const Signal& u) {
  return project_box(sys, (1.0 / (1.0 + sys.r)) * u);
}

Signal prox_g(const AffineProjector& projector, const Signal& u) { return projector.project(u); }

double vartheta(const LtiSystem& sys, double w) {
  const double r = sys.r;
  if (w > r * sys.upper) return sys.upper * w - 0.5 * r * sys.upper * sys.upper;
  if (w < r * sys.lower) return sys.lower * w - 0.5 * r * sys.lower * sys.lower;
  return w * w / (2.0 * r);
}

ThetaValue theta_and_grad(const LtiSystem& sys, const Eigen::VectorXd& p) {
  const double bp = sys.b.dot(p);
  if (bp > sys.r * sys.upper) return {vartheta(sys, bp), sys.upper * sys.b};
  if (bp < sys.r * sys.lower) return {vartheta(sys, bp), sys.lower * sys.b};
  return {vartheta(sys, bp), sys.b * (bp / sys.r)};
}

double primal_objective(const LtiSystem& sys, const Signal& u) {
  return 0.5 * sys.r * inner_product(u, u);
}

double dual_objective(const LtiSystem& sys, const Signal& a_perp, const Signal& w) {
  const Signal conj = w.map([&](double v) { return vartheta(sys, v); });
  return inner_product(conj, Signal::constant(w.grid(), 1.0)) - inner_product(a_perp, w);
}

ObjectivePair duality_gap(const LtiSystem& sys, const Signal& u, const Signal& w, const Signal& a_perp) {
  ObjectivePair out;
  out.primal_value = primal_objective(sys, u);
  out.dual_value = dual_objective(sys, a_perp, w);
  out.gap = out.primal_value + out.dual_value;
  return out;
}

}  // namespace ocdr
