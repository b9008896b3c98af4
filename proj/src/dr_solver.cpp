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

#include "ocdr/dr_solver.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

namespace ocdr {

namespace {

void validate(const DrConfig& c) {
  if (!(c.gamma > 0.0 && c.gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (!(c.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (c.max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  if (c.snapshot_stride < 1) throw std::invalid_argument("snapshot_stride must be positive");
}

}  // namespace

DrConfig DrConfig::for_system(const LtiSystem& sys) {
  DrConfig c;
  c.gamma = 1.0 / (1.0 + sys.r);
  return c;
}

bool gamma_overrides_r(const LtiSystem& sys, double gamma) {
  return std::abs(gamma - 1.0 / (1.0 + sys.r)) > 1e-12;
}

Signal dr_apply(const LtiSystem& sys, const AffineProjector& projector, double gamma, const Signal& u) {
  const Signal box = project_box(sys, gamma * u);
  const Signal affine = projector.project(2.0 * box - u);
  return (u - box) + affine;
}

DrRun solve(const AffineProjector& projector, const DrConfig& config) {
  validate(config);
  const LtiSystem& sys = projector.system();
  const TimeGrid& grid = projector.grid();
  Signal u = config.initial_iterate.value_or(Signal::zero(grid));
  require_same_grid(u.grid(), grid);

  const Signal a_perp = projector.a_perp();
  DrRun run{.u_tilde = u, .u_hat = u, .w = u, .phi = u, .a_perp = a_perp};
  run.gamma_overrides_r = gamma_overrides_r(sys, config.gamma);
  run.history.reserve(std::min(config.max_iterations, 100000));
  run.snapshots.push_back({0, u});

  for (int k = 0; k < config.max_iterations; ++k) {
    const Signal u_tilde = project_box(sys, config.gamma * u);
    const Signal u_hat = projector.project(2.0 * u_tilde - u);
    const Signal w = u - u_tilde;
    Signal next = w + u_hat;
    if (!next.all_finite()) throw DivergenceError(k);

    const double residual = norm_linf(next - u);
    run.history.push_back({k, residual, primal_objective(sys, u_tilde), dual_objective(sys, a_perp, w)});
    run.iterations = k + 1;
    run.final_residual = residual;
    run.u_tilde = u_tilde;
    run.u_hat = u_hat;
    run.w = w;
    u = std::move(next);
    if ((k + 1) % config.snapshot_stride == 0) run.snapshots.push_back({k + 1, u});
    if (residual <= config.epsilon) {
      run.converged = true;
      break;
    }
  }
  run.phi = u;
  if (run.snapshots.back().k != run.iterations) run.snapshots.push_back({run.iterations, u});
  return run;
}

std::vector<SweepRow> gamma_sweep(const AffineProjector& projector, std::span<const double> gammas,
                                  const DrConfig& base) {
  auto run_row = [&projector, &base](double g) {
    DrConfig c = base;
    c.gamma = g;
    try {
      const DrRun run = solve(projector, c);
      return SweepRow{g, run.iterations, run.converged, run.final_residual, {}};
    } catch (const std::exception& e) {
      return SweepRow{g, 0, false, NAN, e.what()};
    }
  };

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows;
  rows.reserve(gammas.size());
  for (std::size_t start = 0; start < gammas.size(); start += workers) {
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = start; i < std::min(gammas.size(), start + workers); ++i)
      batch.push_back(std::async(std::launch::async, run_row, gammas[i]));
    for (auto& f : batch) rows.push_back(f.get());
  }
  return rows;
}

}  // namespace ocdr
