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

#include <string>
#include <vector>

#include "ocdr/dynamics.hpp"
#include "ocdr/projections.hpp"
#include "ocdr/prox_duality.hpp"
#include "ocdr/signals.hpp"

namespace ocdr {

/// Least-squares representation w(t) ~ b^T p(t), p' = -A^T p.
struct AdjointFit {
  AdjointState p;
  /// p(0), whatever the anchor used for the fit.
  Eigen::VectorXd p0;
  /// ||w - b^T p||_L2 / (1 + ||w||_L2).
  double residual = 0.0;
};

/// Fits p over the n-dimensional family t -> b^T exp(-A^T t) p0 by normal
/// equations. Throws DualRepresentationError when the (equilibrated) basis Gram
/// matrix has condition above 1e12.
AdjointFit fit_adjoint(const LtiPropagator& propagator, const Signal& w,
                       AnchorPolicy policy = AnchorPolicy::Automatic);
AdjointFit fit_adjoint(const LtiSystem& sys, const Signal& w);

/// Dual estimate for an arbitrary primal control: fits b^T p to r*u on the
/// nodes where u is strictly inside the box, then returns b^T p.
Signal estimate_dual(const LtiPropagator& propagator, const Signal& u);

/// Fixed point of the DR operator expressed through the adjoint, with
/// z = -b^T lambda:
///   upper + z          if z > r*upper
///   (1 + r) z / r      if r*lower <= z <= r*upper
///   lower + z          if z < r*lower
Signal rebuild_fixed_point(const LtiPropagator& propagator, const AdjointState& lambda);
Signal rebuild_fixed_point(const LtiSystem& sys, const TimeGrid& grid, const Eigen::VectorXd& lambda0);

/// Tolerances before scaling. Each check multiplies its tolerance by the factor
/// noted, so the same defaults stay meaningful across problems whose control
/// magnitudes differ by orders of magnitude.
struct CertificateTolerances {
  double phi_decomposition = 1e-6;  // x (1 + ||phi||_inf)
  double dual_feasibility = 1e-5;   // residual already relative
  double primal_terminal = 1e-6;    // x (1 + ||xf||)
  double box_violation = 1e-12;     // x (1 + max |bound|)
  double kkt = 1e-5;                // x (1 + ||u||_inf)
  double reconstructed_phi = 1e-6;  // x (1 + ||phi||_inf)
  double gap = 1e-4;                // x (1 + |primal|)
};

struct CheckResult {
  std::string name;
  double residual;
  double tolerance;  // after scaling
  bool pass;
};

struct CertificateReport {
  double phi_decomposition_residual = 0.0;
  double dual_feasibility_residual = 0.0;
  double primal_terminal_residual = 0.0;
  double box_violation = 0.0;
  double kkt_residual = 0.0;
  double reconstructed_phi_residual = 0.0;
  ObjectivePair gap;
  AdjointFit dual_adjoint;
  std::vector<CheckResult> checks;
  bool pass = false;

  /// Check with the largest residual / tolerance ratio.
  const CheckResult& worst() const;
  /// Flat key=value block, one entry per line.
  std::string to_key_value() const;
};

/// Verifies optimality of (u, w) with fixed point phi:
///   phi = u + w, w = b^T p for an adjoint p, x(t_f; u) = xf, u in the box,
///   u = P_box(w / r), phi matches its adjoint reconstruction, and the
///   duality gap closes. Failing checks fail the verdict, not the call.
CertificateReport certify(const AffineProjector& projector, const Signal& u, const Signal& w,
                          const Signal& phi, const CertificateTolerances& tolerances = {});

}  // namespace ocdr
