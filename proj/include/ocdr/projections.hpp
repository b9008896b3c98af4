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
#include "ocdr/signals.hpp"

namespace ocdr {

/// Nodewise clamp into [lower, upper].
Signal project_box(const LtiSystem& sys, const Signal& u_minus);
Signal project_box(double lower, double upper, const Signal& u_minus);

/// Projection onto the affine set of controls that steer x0 to xf.
///
/// Implementations are immutable after construction and may be shared across
/// threads.
class AffineProjector {
 public:
  virtual ~AffineProjector() = default;

  virtual Signal project(const Signal& u_minus) const = 0;
  virtual const LtiSystem& system() const = 0;
  virtual const TimeGrid& grid() const = 0;
  /// Propagator used to evaluate terminal states consistently with project().
  virtual const LtiPropagator& propagator() const = 0;

  /// Minimum-norm feasible control, the projection of zero.
  Signal a_perp() const { return project(Signal::zero(grid())); }
};

/// Closed-form projector for the double integrator x1' = x2, x2' = u on [0,1].
///
/// P(u)(t) = u(t) + c1 t + c2 with
///   c1 = 12 (s0 + v0 - sf + I1) - 6 (v0 - vf + I0),
///   c2 = -6 (s0 + v0 - sf + I1) + 2 (v0 - vf + I0),
/// I1 = int (1 - tau) u, I0 = int u. Both integrals are exact for the linear
/// interpolant of u, which keeps this projector consistent with the shooting one.
class DoubleIntegratorProjector final : public AffineProjector {
 public:
  /// Throws ProjectorError("analytic projector unavailable") for any other system.
  DoubleIntegratorProjector(LtiSystem sys, TimeGrid grid);

  struct Coefficients {
    double c1;
    double c2;
  };
  Coefficients coefficients(const Signal& u_minus) const;

  Signal project(const Signal& u_minus) const override;
  const LtiSystem& system() const override { return propagator_.system(); }
  const TimeGrid& grid() const override { return propagator_.grid(); }
  const LtiPropagator& propagator() const override { return propagator_; }

  static bool applicable(const LtiSystem& sys);

 private:
  LtiPropagator propagator_;
};

Signal project_affine_di(const LtiSystem& sys, const Signal& u_minus);

enum class AnchorPolicy { Automatic, Initial, Terminal };

/// Shooting-based projector for a general controllable LTI system.
///
/// The projection of u is u - b^T lambda(.), lambda' = -A^T lambda, with the
/// anchor value of lambda chosen so that the terminal state hits xf:
///   M lambda_anchor = x(t_f; u, x0) - xf,
/// where column j of M is the terminal state reached from zero under control
/// s_j(t) = [basis row t]_j. M is row/column equilibrated before an LU with
/// partial pivoting; a single refinement pass follows each solve.
class ShootingOperator final : public AffineProjector {
 public:
  ShootingOperator(LtiSystem sys, TimeGrid grid, AnchorPolicy policy = AnchorPolicy::Automatic);

  struct Projection {
    Signal projected;
    AdjointState multiplier;
  };
  Projection project_with_multiplier(const Signal& u_minus) const;
  Signal project(const Signal& u_minus) const override;

  const LtiSystem& system() const override { return propagator_.system(); }
  const TimeGrid& grid() const override { return propagator_.grid(); }
  const LtiPropagator& propagator() const override { return propagator_; }

  AdjointAnchor anchor() const { return anchor_; }
  /// The factorized matrix (propagation route).
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  /// Trapezoid quadrature of int exp(A (t_f - tau)) b s(tau)^T dtau.
  const Eigen::MatrixXd& quadrature_matrix() const { return quadrature_matrix_; }
  /// ||matrix - quadrature_matrix||_max / ||matrix||_max.
  double route_discrepancy() const;
  /// 1-norm condition estimate of the equilibrated matrix.
  double condition_estimate() const { return condition_; }
  /// (N+1) x n matrix of basis output samples.
  const Eigen::MatrixXd& basis() const { return basis_; }
  Signal basis_signal(int j) const;
  /// Terminal state reached from x0 with u = 0.
  const Eigen::VectorXd& free_terminal_state() const { return free_terminal_; }

  /// Solves M lambda = residual.
  Eigen::VectorXd solve(const Eigen::VectorXd& residual) const;

  static constexpr double kConditionLimit = 1e12;

 private:
  LtiPropagator propagator_;
  AdjointAnchor anchor_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd quadrature_matrix_;
  Eigen::VectorXd row_scale_;
  Eigen::VectorXd col_scale_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double condition_ = 0.0;
  Eigen::VectorXd free_terminal_;
};

ShootingOperator build_shooting(const LtiSystem& sys, const TimeGrid& grid);
Signal project_affine_shooting(const ShootingOperator& op, const Signal& u_minus);
Signal a_perp(const AffineProjector& projector);

}  // namespace ocdr
