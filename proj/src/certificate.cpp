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

#include "ocdr/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ocdr {

namespace {

constexpr double kGramConditionLimit = 1e12;

// Weighted least squares min ||basis p - target||_W restricted to the rows with
// positive weight.
Eigen::VectorXd weighted_fit(const Eigen::MatrixXd& basis, const Eigen::VectorXd& weights,
                             const Eigen::VectorXd& target) {
  const Eigen::MatrixXd gram = basis.transpose() * weights.asDiagonal() * basis;
  const Eigen::VectorXd rhs = basis.transpose() * weights.asDiagonal() * target;
  const Eigen::VectorXd diag = gram.diagonal();
  if (!(diag.array() > 0.0).all()) throw DualRepresentationError();
  const Eigen::VectorXd d = diag.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = d.asDiagonal() * gram * d.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kGramConditionLimit) throw DualRepresentationError();

  const Eigen::VectorXd y = eig.eigenvectors() *
                            (eig.eigenvalues().cwiseInverse().asDiagonal() *
                             (eig.eigenvectors().transpose() * (d.asDiagonal() * rhs)));
  return d.asDiagonal() * y;
}

AdjointAnchor resolve(const LtiSystem& sys, AnchorPolicy policy) {
  switch (policy) {
    case AnchorPolicy::Initial: return AdjointAnchor::Initial;
    case AnchorPolicy::Terminal: return AdjointAnchor::Terminal;
    case AnchorPolicy::Automatic: break;
  }
  return preferred_anchor(sys);
}

Eigen::VectorXd value_at_start(const LtiPropagator& prop, const AdjointState& s) {
  if (s.anchor == AdjointAnchor::Initial) return s.value;
  return prop.adjoint(s).at(0);
}

double fixed_point_value(const LtiSystem& sys, double z) {
  if (z > sys.r * sys.upper) return sys.upper + z;
  if (z < sys.r * sys.lower) return sys.lower + z;
  return (1.0 + sys.r) * z / sys.r;
}

}  // namespace

AdjointFit fit_adjoint(const LtiPropagator& prop, const Signal& w, AnchorPolicy policy) {
  require_same_grid(w.grid(), prop.grid());
  const AdjointAnchor anchor = resolve(prop.system(), policy);
  const Eigen::MatrixXd basis = prop.adjoint_output_basis(anchor);
  const Eigen::VectorXd weights = prop.grid().trapezoid_weights();

  AdjointFit fit;
  fit.p = AdjointState{anchor, weighted_fit(basis, weights, w.values())};
  fit.p0 = value_at_start(prop, fit.p);
  const Signal model = Signal::unchecked(prop.grid(), basis * fit.p.value);
  fit.residual = norm_l2(w - model) / (1.0 + norm_l2(w));
  return fit;
}

AdjointFit fit_adjoint(const LtiSystem& sys, const Signal& w) {
  return fit_adjoint(LtiPropagator(sys, w.grid()), w);
}

Signal estimate_dual(const LtiPropagator& prop, const Signal& u) {
  require_same_grid(u.grid(), prop.grid());
  const LtiSystem& sys = prop.system();
  const AdjointAnchor anchor = preferred_anchor(sys);
  const Eigen::MatrixXd basis = prop.adjoint_output_basis(anchor);
  Eigen::VectorXd weights = prop.grid().trapezoid_weights();
  const double margin = 1e-9 * (1.0 + std::max(std::abs(sys.lower), std::abs(sys.upper)));
  for (int i = 0; i < u.size(); ++i)
    if (u[i] <= sys.lower + margin || u[i] >= sys.upper - margin) weights[i] = 0.0;
  const Eigen::VectorXd p = weighted_fit(basis, weights, sys.r * u.values());
  return Signal::unchecked(prop.grid(), basis * p);
}

Signal rebuild_fixed_point(const LtiPropagator& prop, const AdjointState& lambda) {
  const LtiSystem& sys = prop.system();
  return prop.adjoint_output(lambda).map([&](double bl) { return fixed_point_value(sys, -bl); });
}

Signal rebuild_fixed_point(const LtiSystem& sys, const TimeGrid& grid, const Eigen::VectorXd& lambda0) {
  return rebuild_fixed_point(LtiPropagator(sys, grid), AdjointState::at_start(lambda0));
}

const CheckResult& CertificateReport::worst() const {
  return *std::max_element(checks.begin(), checks.end(), [](const auto& a, const auto& b) {
    return a.residual / a.tolerance < b.residual / b.tolerance;
  });
}

std::string CertificateReport::to_key_value() const {
  std::ostringstream os;
  os.precision(17);
  os << "phi_decomposition_residual=" << phi_decomposition_residual << '\n'
     << "dual_feasibility_residual=" << dual_feasibility_residual << '\n'
     << "primal_terminal_residual=" << primal_terminal_residual << '\n'
     << "box_violation=" << box_violation << '\n'
     << "kkt_residual=" << kkt_residual << '\n'
     << "reconstructed_phi_residual=" << reconstructed_phi_residual << '\n'
     << "primal_objective=" << gap.primal_value << '\n'
     << "dual_objective=" << gap.dual_value << '\n'
     << "duality_gap=" << gap.gap << '\n'
     << "verdict=" << (pass ? "pass" : "fail") << '\n';
  return os.str();
}

CertificateReport certify(const AffineProjector& projector, const Signal& u, const Signal& w,
                          const Signal& phi, const CertificateTolerances& tol) {
  const LtiPropagator& prop = projector.propagator();
  const LtiSystem& sys = prop.system();
  require_same_grid(u.grid(), prop.grid());
  require_same_grid(w.grid(), prop.grid());
  require_same_grid(phi.grid(), prop.grid());

  CertificateReport rep;
  rep.phi_decomposition_residual = norm_linf(phi - (u + w));

  rep.dual_adjoint = fit_adjoint(prop, w);
  rep.dual_feasibility_residual = rep.dual_adjoint.residual;

  rep.primal_terminal_residual = (prop.terminal_state(u, sys.x0) - sys.xf).norm();

  double excess = 0.0;
  for (int i = 0; i < u.size(); ++i)
    excess = std::max({excess, u[i] - sys.upper, sys.lower - u[i]});
  rep.box_violation = excess;

  rep.kkt_residual = norm_linf(u - project_box(sys, (1.0 / sys.r) * w));

  const Signal rebuilt = rebuild_fixed_point(prop, -rep.dual_adjoint.p);
  rep.reconstructed_phi_residual = norm_linf(phi - rebuilt);

  rep.gap = duality_gap(sys, u, w, projector.a_perp());

  const double phi_scale = 1.0 + norm_linf(phi);
  const double bound_scale = 1.0 + std::max(std::abs(sys.lower), std::abs(sys.upper));
  auto add = [&rep](std::string name, double residual, double tolerance) {
    rep.checks.push_back({std::move(name), residual, tolerance, residual <= tolerance});
  };
  add("phi_decomposition", rep.phi_decomposition_residual, tol.phi_decomposition * phi_scale);
  add("dual_feasibility", rep.dual_feasibility_residual, tol.dual_feasibility);
  add("primal_terminal", rep.primal_terminal_residual, tol.primal_terminal * (1.0 + sys.xf.norm()));
  add("box_violation", rep.box_violation, tol.box_violation * bound_scale);
  add("kkt", rep.kkt_residual, tol.kkt * (1.0 + norm_linf(u)));
  add("reconstructed_phi", rep.reconstructed_phi_residual, tol.reconstructed_phi * phi_scale);
  add("duality_gap", std::abs(rep.gap.gap), tol.gap * (1.0 + std::abs(rep.gap.primal_value)));

  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.pass; });
  return rep;
}

}  // namespace ocdr
