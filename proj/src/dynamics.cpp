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

#include "ocdr/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace ocdr {

namespace {

constexpr double kMaxStepNorm = 0.5;
constexpr double kRoundTripTolerance = 1e-10;
constexpr double kInitialAnchorLimit = 8.0;

void require_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw DynamicsError("dynamics overflow");
}

}  // namespace

void LtiSystem::validate() const {
  const Eigen::Index n = b.size();
  if (n < 1) throw ProblemError("field 'b': state dimension must be positive");
  if (A.rows() != n || A.cols() != n)
    throw ProblemError("field 'A': expected " + std::to_string(n) + "x" + std::to_string(n) +
                       " matrix, got " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
  if (x0.size() != n) throw ProblemError("field 'x0': expected length " + std::to_string(n));
  if (xf.size() != n) throw ProblemError("field 'xf': expected length " + std::to_string(n));
  if (!A.allFinite()) throw ProblemError("field 'A': entries must be finite");
  if (!b.allFinite()) throw ProblemError("field 'b': entries must be finite");
  if (!x0.allFinite()) throw ProblemError("field 'x0': entries must be finite");
  if (!xf.allFinite()) throw ProblemError("field 'xf': entries must be finite");
  if (b.isZero(0.0)) throw ProblemError("field 'b': b must not be the zero vector");
  if (!std::isfinite(r) || !(r > 0.0)) throw ProblemError("field 'r': weight must be positive");
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper))
    throw ProblemError("bounds must satisfy lower < upper");
  if (!std::isfinite(t_final) || !(t_final > 0.0))
    throw ProblemError("field 't_final': horizon must be positive");
}

bool LtiSystem::operator==(const LtiSystem& o) const {
  return A.rows() == o.A.rows() && A.cols() == o.A.cols() && A == o.A && b.size() == o.b.size() &&
         b == o.b && r == o.r && lower == o.lower && upper == o.upper && x0.size() == o.x0.size() &&
         x0 == o.x0 && xf.size() == o.xf.size() && xf == o.xf && t_final == o.t_final;
}

TransitionCache::TransitionCache(const LtiSystem& sys, double interval) {
  const int n = sys.dim();
  const double a_norm = sys.A.cwiseAbs().colwise().sum().maxCoeff();
  substeps_ = std::max(1, static_cast<int>(std::ceil(a_norm * interval / kMaxStepNorm)));
  substep_ = interval / substeps_;

  // Augmented generator for (x, u, du/dt) with du/dt constant on the interval.
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n + 2, n + 2);
  gen.topLeftCorner(n, n) = sys.A;
  gen.block(0, n, n, 1) = sys.b;
  gen(n, n + 1) = 1.0;

  Eigen::MatrixXd aug_step = (gen * substep_).exp();
  step_exp_ = aug_step.topLeftCorner(n, n);
  adjoint_step_exp_ = (-sys.A.transpose() * substep_).exp();
  require_finite(aug_step);
  require_finite(adjoint_step_exp_);

  round_trip_error_ = (step_exp_ * adjoint_step_exp_.transpose() - Eigen::MatrixXd::Identity(n, n))
                          .cwiseAbs()
                          .maxCoeff();
  if (!(round_trip_error_ <= kRoundTripTolerance))
    throw DynamicsError("transition round-trip check failed (error " +
                        std::to_string(round_trip_error_) + ")");

  Eigen::MatrixXd aug = aug_step;
  adjoint_interval_exp_ = adjoint_step_exp_;
  for (int s = 1; s < substeps_; ++s) {
    aug = aug_step * aug;
    adjoint_interval_exp_ = adjoint_step_exp_ * adjoint_interval_exp_;
  }
  require_finite(aug);
  require_finite(adjoint_interval_exp_);

  interval_exp_ = aug.topLeftCorner(n, n);
  const Eigen::VectorXd level = aug.block(0, n, n, 1);
  const Eigen::VectorXd ramp = aug.block(0, n + 1, n, 1) / interval;
  input_left_ = level - ramp;
  input_right_ = ramp;
}

LtiPropagator::LtiPropagator(LtiSystem sys, TimeGrid grid)
    : sys_(std::move(sys)), grid_(grid), cache_((sys_.validate(), sys_), grid.step()) {
  if (grid_.t_start() != 0.0 || std::abs(grid_.t_final() - sys_.t_final) > 1e-12 * sys_.t_final)
    throw ProblemError("grid must span [0, t_final] of the system");
}

void LtiPropagator::check_control(const Signal& u) const { require_same_grid(u.grid(), grid_); }

Trajectory LtiPropagator::state(const Signal& u, const Eigen::VectorXd& x_init) const {
  check_control(u);
  if (x_init.size() != sys_.dim()) throw ProblemError("initial state has wrong dimension");
  const int N = grid_.intervals();
  const auto& E = cache_.interval_exponential();
  const auto& gl = cache_.input_left();
  const auto& gr = cache_.input_right();
  const auto& uv = u.values();

  Eigen::MatrixXd x(sys_.dim(), N + 1);
  x.col(0) = x_init;
  for (int k = 0; k < N; ++k) x.col(k + 1) = E * x.col(k) + gl * uv[k] + gr * uv[k + 1];
  require_finite(x);
  return Trajectory(grid_, std::move(x));
}

Eigen::VectorXd LtiPropagator::terminal_state(const Signal& u, const Eigen::VectorXd& x_init) const {
  check_control(u);
  if (x_init.size() != sys_.dim()) throw ProblemError("initial state has wrong dimension");
  const int N = grid_.intervals();
  const auto& E = cache_.interval_exponential();
  const auto& gl = cache_.input_left();
  const auto& gr = cache_.input_right();
  const auto& uv = u.values();

  Eigen::VectorXd x = x_init;
  Eigen::VectorXd next(x.size());
  for (int k = 0; k < N; ++k) {
    next.noalias() = E * x;
    next += gl * uv[k] + gr * uv[k + 1];
    x.swap(next);
  }
  require_finite(x);
  return x;
}

Trajectory LtiPropagator::adjoint(const AdjointState& lambda) const {
  if (lambda.value.size() != sys_.dim()) throw ProblemError("adjoint state has wrong dimension");
  const int N = grid_.intervals();
  Eigen::MatrixXd out(sys_.dim(), N + 1);
  if (lambda.anchor == AdjointAnchor::Initial) {
    const auto& F = cache_.adjoint_interval_exponential();
    out.col(0) = lambda.value;
    for (int k = 0; k < N; ++k) out.col(k + 1) = F * out.col(k);
  } else {
    // exp(A^T h) = exp(A h)^T steps backwards from t_f.
    const Eigen::MatrixXd Bt = cache_.interval_exponential().transpose();
    out.col(N) = lambda.value;
    for (int k = N; k > 0; --k) out.col(k - 1) = Bt * out.col(k);
  }
  require_finite(out);
  return Trajectory(grid_, std::move(out));
}

Signal LtiPropagator::adjoint_output(const AdjointState& lambda) const {
  if (lambda.value.size() != sys_.dim()) throw ProblemError("adjoint state has wrong dimension");
  Eigen::VectorXd v = adjoint(lambda).values().transpose() * sys_.b;
  return Signal::unchecked(grid_, std::move(v));
}

Eigen::MatrixXd LtiPropagator::adjoint_output_basis(AdjointAnchor anchor) const {
  const int N = grid_.intervals();
  Eigen::MatrixXd basis(N + 1, sys_.dim());
  Eigen::VectorXd s = sys_.b;
  if (anchor == AdjointAnchor::Initial) {
    // exp(-A h) = exp(-A^T h)^T
    const Eigen::MatrixXd F = cache_.adjoint_interval_exponential().transpose();
    basis.row(0) = s.transpose();
    for (int k = 1; k <= N; ++k) {
      s = F * s;
      basis.row(k) = s.transpose();
    }
  } else {
    const auto& E = cache_.interval_exponential();
    basis.row(N) = s.transpose();
    for (int k = N - 1; k >= 0; --k) {
      s = E * s;
      basis.row(k) = s.transpose();
    }
  }
  require_finite(basis);
  return basis;
}

AdjointAnchor preferred_anchor(const LtiSystem& sys) {
  const double a_norm = sys.A.cwiseAbs().colwise().sum().maxCoeff();
  return a_norm * sys.t_final <= kInitialAnchorLimit ? AdjointAnchor::Initial
                                                     : AdjointAnchor::Terminal;
}

Trajectory propagate_state(const LtiSystem& sys, const Signal& u, const Eigen::VectorXd& x_init) {
  return LtiPropagator(sys, u.grid()).state(u, x_init);
}

Trajectory propagate_adjoint(const LtiSystem& sys, const TimeGrid& grid, const Eigen::VectorXd& lambda0) {
  return LtiPropagator(sys, grid).adjoint(AdjointState::at_start(lambda0));
}

Signal adjoint_output(const LtiSystem& sys, const TimeGrid& grid, const Eigen::VectorXd& lambda0) {
  return LtiPropagator(sys, grid).adjoint_output(AdjointState::at_start(lambda0));
}

}  // namespace ocdr
