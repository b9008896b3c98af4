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

#include "ocdr/projections.hpp"

#include <algorithm>
#include <cmath>

namespace ocdr {

Signal project_box(double lower, double upper, const Signal& u_minus) {
  return u_minus.map([=](double v) { return std::clamp(v, lower, upper); });
}

Signal project_box(const LtiSystem& sys, const Signal& u_minus) {
  return project_box(sys.lower, sys.upper, u_minus);
}

bool DoubleIntegratorProjector::applicable(const LtiSystem& sys) {
  if (sys.dim() != 2 || sys.A.rows() != 2 || sys.A.cols() != 2) return false;
  Eigen::Matrix2d A;
  A << 0, 1, 0, 0;
  return sys.A == A && sys.b == Eigen::Vector2d(0, 1) && sys.t_final == 1.0;
}

namespace {

LtiSystem require_double_integrator(LtiSystem sys) {
  if (!DoubleIntegratorProjector::applicable(sys))
    throw ProjectorError("analytic projector unavailable");
  return sys;
}

}  // namespace

DoubleIntegratorProjector::DoubleIntegratorProjector(LtiSystem sys, TimeGrid grid)
    : propagator_(require_double_integrator(std::move(sys)), grid) {}

DoubleIntegratorProjector::Coefficients DoubleIntegratorProjector::coefficients(
    const Signal& u_minus) const {
  require_same_grid(u_minus.grid(), grid());
  const auto& g = grid();
  const auto& u = u_minus.values();
  const double h = g.step();

  // Exact integrals of the piecewise-linear interpolant against 1 and (1 - tau).
  double i0 = 0.0;
  double i1 = 0.0;
  for (int k = 0; k < g.intervals(); ++k) {
    const double a = 1.0 - g.node(k);
    const double c = 1.0 - g.node(k + 1);
    i0 += 0.5 * h * (u[k] + u[k + 1]);
    i1 += h / 6.0 * (2.0 * a * u[k] + a * u[k + 1] + c * u[k] + 2.0 * c * u[k + 1]);
  }

  const auto& sys = system();
  const double s0 = sys.x0[0], v0 = sys.x0[1], sf = sys.xf[0], vf = sys.xf[1];
  const double pos = s0 + v0 - sf + i1;
  const double vel = v0 - vf + i0;
  return {12.0 * pos - 6.0 * vel, -6.0 * pos + 2.0 * vel};
}

Signal DoubleIntegratorProjector::project(const Signal& u_minus) const {
  const auto [c1, c2] = coefficients(u_minus);
  const Eigen::VectorXd t = grid().node_vector();
  return Signal::unchecked(grid(), u_minus.values() + (c1 * t.array() + c2).matrix());
}

Signal project_affine_di(const LtiSystem& sys, const Signal& u_minus) {
  return DoubleIntegratorProjector(sys, u_minus.grid()).project(u_minus);
}

ShootingOperator::ShootingOperator(LtiSystem sys, TimeGrid grid, AnchorPolicy policy)
    : propagator_(std::move(sys), grid) {
  const auto& s = system();
  const int n = s.dim();
  switch (policy) {
    case AnchorPolicy::Automatic: anchor_ = preferred_anchor(s); break;
    case AnchorPolicy::Initial: anchor_ = AdjointAnchor::Initial; break;
    case AnchorPolicy::Terminal: anchor_ = AdjointAnchor::Terminal; break;
  }
  basis_ = propagator_.adjoint_output_basis(anchor_);

  // Quadrature route: kernel exp(A (t_f - t_k)) b is the terminal-anchored basis.
  const Eigen::MatrixXd kernel = anchor_ == AdjointAnchor::Terminal
                                     ? basis_
                                     : propagator_.adjoint_output_basis(AdjointAnchor::Terminal);
  const Eigen::VectorXd w = grid.trapezoid_weights();
  quadrature_matrix_ = kernel.transpose() * w.asDiagonal() * basis_;

  // Propagation route.
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  matrix_.resize(n, n);
  for (int j = 0; j < n; ++j) matrix_.col(j) = propagator_.terminal_state(basis_signal(j), zero);

  row_scale_ = matrix_.cwiseAbs().rowwise().maxCoeff().cwiseInverse();
  Eigen::MatrixXd scaled = row_scale_.asDiagonal() * matrix_;
  col_scale_ = scaled.cwiseAbs().colwise().maxCoeff().transpose().cwiseInverse();
  if (!row_scale_.allFinite() || !col_scale_.allFinite())
    throw ProjectorError("system not controllable on this grid");
  scaled = scaled * col_scale_.asDiagonal();
  lu_.compute(scaled);
  const double rcond = lu_.rcond();
  condition_ = rcond > 0.0 ? 1.0 / rcond : INFINITY;
  if (!(condition_ < kConditionLimit)) throw ProjectorError("system not controllable on this grid");

  free_terminal_ = propagator_.terminal_state(Signal::zero(grid), s.x0);
}

double ShootingOperator::route_discrepancy() const {
  return (matrix_ - quadrature_matrix_).cwiseAbs().maxCoeff() / matrix_.cwiseAbs().maxCoeff();
}

Signal ShootingOperator::basis_signal(int j) const {
  return Signal::unchecked(grid(), basis_.col(j));
}

Eigen::VectorXd ShootingOperator::solve(const Eigen::VectorXd& residual) const {
  return col_scale_.asDiagonal() * lu_.solve(row_scale_.asDiagonal() * residual);
}

ShootingOperator::Projection ShootingOperator::project_with_multiplier(const Signal& u_minus) const {
  require_same_grid(u_minus.grid(), grid());
  const auto& s = system();
  Eigen::VectorXd lambda = solve(propagator_.terminal_state(u_minus, s.x0) - s.xf);
  Eigen::VectorXd out = u_minus.values() - basis_ * lambda;

  // One refinement pass against the propagated residual.
  const Signal first = Signal::unchecked(grid(), out);
  lambda += solve(propagator_.terminal_state(first, s.x0) - s.xf);
  out = u_minus.values() - basis_ * lambda;
  return {Signal::unchecked(grid(), std::move(out)), AdjointState{anchor_, std::move(lambda)}};
}

Signal ShootingOperator::project(const Signal& u_minus) const {
  return project_with_multiplier(u_minus).projected;
}

ShootingOperator build_shooting(const LtiSystem& sys, const TimeGrid& grid) {
  return ShootingOperator(sys, grid);
}

Signal project_affine_shooting(const ShootingOperator& op, const Signal& u_minus) {
  return op.project(u_minus);
}

Signal a_perp(const AffineProjector& projector) { return projector.a_perp(); }

}  // namespace ocdr
