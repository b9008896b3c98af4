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

#include "ocdr/signals.hpp"

namespace ocdr {

/// Single-input LTI control system with box-bounded control and fixed
/// endpoints: x' = A x + b u on [0, t_final], x(0) = x0, x(t_final) = xf,
/// lower <= u <= upper, cost (r/2) * integral of u^2.
struct LtiSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double r = 1.0;
  double lower = -1.0;
  double upper = 1.0;
  Eigen::VectorXd x0;
  Eigen::VectorXd xf;
  double t_final = 1.0;

  int dim() const { return static_cast<int>(b.size()); }

  /// Throws ProblemError naming the offending field.
  void validate() const;

  bool operator==(const LtiSystem& other) const;
};

/// Where the adjoint flow is pinned: lambda(t) = exp(-A^T (t - t_anchor)) * value.
enum class AdjointAnchor { Initial, Terminal };

/// Adjoint (or dual-variable) flow, identified by its value at one end of the
/// horizon.
struct AdjointState {
  AdjointAnchor anchor = AdjointAnchor::Initial;
  Eigen::VectorXd value;

  static AdjointState at_start(Eigen::VectorXd v) { return {AdjointAnchor::Initial, std::move(v)}; }
  static AdjointState at_end(Eigen::VectorXd v) { return {AdjointAnchor::Terminal, std::move(v)}; }
  AdjointState operator-() const { return {anchor, -value}; }
};

/// Per-interval transition data for one system and one grid step.
///
/// Each grid interval is split into substeps with ||A||_1 * h_sub <= 0.5 and the
/// interval maps are composed from the substep exponentials. For a control
/// that is linear on [t_k, t_k+1]:
///   x_{k+1} = E x_k + g_left u_k + g_right u_{k+1}.
class TransitionCache {
 public:
  TransitionCache(const LtiSystem& sys, double interval);

  int substeps() const { return substeps_; }
  double substep() const { return substep_; }

  /// exp(A h_sub) and exp(-A^T h_sub).
  const Eigen::MatrixXd& step_exponential() const { return step_exp_; }
  const Eigen::MatrixXd& adjoint_step_exponential() const { return adjoint_step_exp_; }

  /// exp(A h) and exp(-A^T h) over a full grid interval.
  const Eigen::MatrixXd& interval_exponential() const { return interval_exp_; }
  const Eigen::MatrixXd& adjoint_interval_exponential() const { return adjoint_interval_exp_; }

  const Eigen::VectorXd& input_left() const { return input_left_; }
  const Eigen::VectorXd& input_right() const { return input_right_; }

  /// max-abs entry of exp(A h_sub) exp(-A h_sub) - I.
  double round_trip_error() const { return round_trip_error_; }

 private:
  int substeps_;
  double substep_;
  Eigen::MatrixXd step_exp_;
  Eigen::MatrixXd adjoint_step_exp_;
  Eigen::MatrixXd interval_exp_;
  Eigen::MatrixXd adjoint_interval_exp_;
  Eigen::VectorXd input_left_;
  Eigen::VectorXd input_right_;
  double round_trip_error_;
};

/// Exact propagation of a system on a fixed grid, controls piecewise linear.
/// Immutable after construction; safe to share across threads.
class LtiPropagator {
 public:
  LtiPropagator(LtiSystem sys, TimeGrid grid);

  const LtiSystem& system() const { return sys_; }
  const TimeGrid& grid() const { return grid_; }
  const TransitionCache& cache() const { return cache_; }

  Trajectory state(const Signal& u, const Eigen::VectorXd& x_init) const;
  Eigen::VectorXd terminal_state(const Signal& u, const Eigen::VectorXd& x_init) const;

  /// lambda(t_i) for lambda' = -A^T lambda.
  Trajectory adjoint(const AdjointState& lambda) const;
  /// t -> b^T lambda(t).
  Signal adjoint_output(const AdjointState& lambda) const;

  /// Row i holds the basis vector s(t_i) with b^T lambda(t_i) = s(t_i)^T value:
  /// exp(-A t_i) b for the initial anchor, exp(A (t_f - t_i)) b for the terminal one.
  Eigen::MatrixXd adjoint_output_basis(AdjointAnchor anchor) const;

 private:
  void check_control(const Signal& u) const;

  LtiSystem sys_;
  TimeGrid grid_;
  TransitionCache cache_;
};

/// Picks the adjoint anchor that keeps exp(-A^T t) bounded: the initial anchor
/// unless ||A||_1 * t_f is large enough for the backward flow to overflow in
/// conditioning.
AdjointAnchor preferred_anchor(const LtiSystem& sys);

Trajectory propagate_state(const LtiSystem& sys, const Signal& u, const Eigen::VectorXd& x_init);
Trajectory propagate_adjoint(const LtiSystem& sys, const TimeGrid& grid, const Eigen::VectorXd& lambda0);
Signal adjoint_output(const LtiSystem& sys, const TimeGrid& grid, const Eigen::VectorXd& lambda0);

}  // namespace ocdr
