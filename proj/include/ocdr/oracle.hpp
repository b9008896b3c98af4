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

#include "ocdr/dynamics.hpp"
#include "ocdr/signals.hpp"

namespace ocdr {

/// Direct-transcription reference solver for small grids.
struct OracleOptions {
  /// Gradient step; 0 selects 1 / (2 r). Valid range is (0, 1 / r).
  double step = 0.0;
  int outer_iterations = 200;
  /// Dykstra iterations per feasibility step; stops early once the iterate settles.
  int inner_budget = 2000;
  /// Terminal residual, relative to 1 + ||xf||, for an iterate to count as feasible.
  double feasibility_tolerance = 1e-6;
};

struct OracleResult {
  Signal u;
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;
  double terminal_residual = 0.0;
};

inline constexpr int kOracleMaxIntervals = 500;

/// Projected gradient on (r/2)<u, u> over the controls that are both in the box
/// and steer x0 to xf. The projection onto the intersection uses Dykstra's
/// alternating projections between the shooting projector and the box clamp.
/// Returns the best feasible iterate; converged is false when the outer loop
/// ran out of iterations or no iterate was feasible.
OracleResult projected_gradient_solve(const LtiSystem& sys, const TimeGrid& grid,
                                      const OracleOptions& options = {});
OracleResult projected_gradient_solve(const LtiSystem& sys, const TimeGrid& grid, double step, int iters);

}  // namespace ocdr
