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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ocdr/projections.hpp"
#include "ocdr/prox_duality.hpp"
#include "ocdr/signals.hpp"

namespace ocdr {

struct DrConfig {
  double gamma = 0.5;
  double epsilon = 1e-8;
  int max_iterations = 10000;
  /// Zero signal when empty.
  std::optional<Signal> initial_iterate;
  /// Full governing-sequence snapshots are kept for k = 0, every stride-th k,
  /// and the final iterate.
  int snapshot_stride = 50;

  /// gamma = 1 / (1 + r), the value that makes P_box(gamma .) the prox of f.
  static DrConfig for_system(const LtiSystem& sys);
};

/// True when gamma differs from 1 / (1 + r) by more than 1e-12.
bool gamma_overrides_r(const LtiSystem& sys, double gamma);

struct IterationRecord {
  int k;
  double residual_linf;
  double primal_objective;  // of u_tilde
  double dual_objective;    // of w_k
};

struct Snapshot {
  int k;
  Signal u;
};

struct DrRun {
  std::vector<IterationRecord> history;
  std::vector<Snapshot> snapshots;
  Signal u_tilde;  // returned primal candidate, inside the box
  Signal u_hat;    // last affine projection
  Signal w;        // dual candidate u_k - u_tilde
  Signal phi;      // final governing iterate w + u_hat
  Signal a_perp;
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  bool gamma_overrides_r = false;
};

/// T u = u - P_B(gamma u) + P_A(2 P_B(gamma u) - u).
Signal dr_apply(const LtiSystem& sys, const AffineProjector& projector, double gamma, const Signal& u);

/// Douglas-Rachford iteration on the governing sequence, stopping when
/// ||u_{k+1} - u_k||_inf <= epsilon. Throws DivergenceError on non-finite
/// iterates and std::invalid_argument on a bad configuration.
DrRun solve(const AffineProjector& projector, const DrConfig& config);

struct SweepRow {
  double gamma;
  int iterations;
  bool converged;
  double final_residual;
  std::string error;  // empty unless the row failed
};

/// One solve per gamma sharing epsilon, max_iterations and initial iterate.
/// Rows run concurrently and come back in input order.
std::vector<SweepRow> gamma_sweep(const AffineProjector& projector, std::span<const double> gammas,
                                  const DrConfig& base);

}  // namespace ocdr
