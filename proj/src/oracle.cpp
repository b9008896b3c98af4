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

#include "ocdr/oracle.hpp"

#include <limits>
#include <stdexcept>

#include "ocdr/projections.hpp"
#include "ocdr/prox_duality.hpp"

namespace ocdr {

namespace {

struct Dykstra {
  const ShootingOperator& affine;
  const LtiSystem& sys;
  int budget;

  Signal operator()(const Signal& v) const {
    Signal x = v;
    Signal p = Signal::zero(v.grid());
    Signal q = Signal::zero(v.grid());
    for (int i = 0; i < budget; ++i) {
      const Signal y = affine.project(x + p);
      p = x + p - y;
      Signal next = project_box(sys, y + q);
      q = y + q - next;
      const double change = norm_linf(next - x);
      x = std::move(next);
      if (i > 0 && change <= 1e-13 * (1.0 + norm_linf(x))) break;
    }
    return x;
  }
};

}  // namespace

OracleResult projected_gradient_solve(const LtiSystem& sys, const TimeGrid& grid, const OracleOptions& options) {
  sys.validate();
  if (grid.intervals() > kOracleMaxIntervals)
    throw std::invalid_argument("oracle grid limited to " + std::to_string(kOracleMaxIntervals) + " intervals");
  const double step = options.step == 0.0 ? 0.5 / sys.r : options.step;
  if (!(step > 0.0 && step < 1.0 / sys.r)) throw std::invalid_argument("oracle step outside (0, 1/r)");
  if (options.outer_iterations < 1 || options.inner_budget < 1)
    throw std::invalid_argument("oracle iteration budgets must be positive");

  const ShootingOperator affine(sys, grid);
  const Dykstra feasible{affine, sys, options.inner_budget};
  const LtiPropagator& prop = affine.propagator();
  const double tol = options.feasibility_tolerance * (1.0 + sys.xf.norm());

  constexpr double inf = std::numeric_limits<double>::infinity();
  OracleResult best{Signal::zero(grid), inf, false, 0, inf};
  bool have_feasible = false;

  Signal u = feasible(Signal::zero(grid));
  for (int k = 1; k <= options.outer_iterations; ++k) {
    Signal next = feasible(u - (step * sys.r) * u);
    const double change = norm_linf(next - u);
    u = std::move(next);

    const double residual = (prop.terminal_state(u, sys.x0) - sys.xf).norm();
    const double objective = primal_objective(sys, u);
    const bool ok = residual <= tol;
    if ((ok && (!have_feasible || objective < best.objective)) ||
        (!have_feasible && !ok && residual < best.terminal_residual)) {
      best.u = u;
      best.objective = objective;
      best.terminal_residual = residual;
      best.iterations = k;
      have_feasible = have_feasible || ok;
    }
    if (change <= 1e-11 * (1.0 + norm_linf(u))) {
      best.converged = have_feasible;
      break;
    }
  }
  return best;
}

OracleResult projected_gradient_solve(const LtiSystem& sys, const TimeGrid& grid, double step, int iters) {
  OracleOptions options;
  options.step = step;
  options.outer_iterations = iters;
  return projected_gradient_solve(sys, grid, options);
}

}  // namespace ocdr
