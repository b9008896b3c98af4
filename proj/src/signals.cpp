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

#include "ocdr/signals.hpp"

#include <cmath>
#include <string>

namespace ocdr {

TimeGrid::TimeGrid(double t_start, double t_final, int n_intervals)
    : t_start_(t_start), t_final_(t_final), n_(n_intervals) {
  if (n_intervals < 2) throw ProblemError("grid needs at least 2 intervals");
  if (!std::isfinite(t_start) || !std::isfinite(t_final) || !(t_final > t_start))
    throw ProblemError("grid horizon must satisfy t_start < t_final");
}

double TimeGrid::node(int i) const {
  if (i == n_) return t_final_;
  return t_start_ + span() * (static_cast<double>(i) / n_);
}

Eigen::VectorXd TimeGrid::node_vector() const {
  Eigen::VectorXd t(nodes());
  for (int i = 0; i <= n_; ++i) t[i] = node(i);
  return t;
}

Eigen::VectorXd TimeGrid::trapezoid_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(nodes(), step());
  w[0] *= 0.5;
  w[n_] *= 0.5;
  return w;
}

Signal::Signal(TimeGrid grid, Eigen::VectorXd values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.nodes())
    throw ProblemError("signal has " + std::to_string(values_.size()) + " values for " +
                       std::to_string(grid_.nodes()) + " grid nodes");
  if (!values_.allFinite()) throw ProblemError("signal values must be finite");
}

Signal::Signal(TimeGrid grid, Eigen::VectorXd values, NoCheck)
    : grid_(grid), values_(std::move(values)) {}

Signal Signal::unchecked(TimeGrid grid, Eigen::VectorXd values) {
  return Signal(grid, std::move(values), NoCheck{});
}

Signal Signal::constant(const TimeGrid& grid, double value) {
  return Signal(grid, Eigen::VectorXd::Constant(grid.nodes(), value));
}

Signal operator+(const Signal& a, const Signal& b) {
  require_same_grid(a.grid_, b.grid_);
  return Signal::unchecked(a.grid_, a.values_ + b.values_);
}

Signal operator-(const Signal& a, const Signal& b) {
  require_same_grid(a.grid_, b.grid_);
  return Signal::unchecked(a.grid_, a.values_ - b.values_);
}

Signal operator*(double s, const Signal& a) { return Signal::unchecked(a.grid_, s * a.values_); }

Trajectory::Trajectory(TimeGrid grid, Eigen::MatrixXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.cols() != grid_.nodes() || values_.rows() < 1)
    throw ProblemError("trajectory shape does not match grid");
}

Signal Trajectory::component(int i) const {
  return Signal::unchecked(grid_, values_.row(i).transpose());
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b) {
  if (!(a == b)) throw GridMismatch();
}

double inner_product(const Signal& a, const Signal& b) {
  require_same_grid(a.grid(), b.grid());
  const auto& x = a.values();
  const auto& y = b.values();
  const Eigen::Index n = x.size() - 1;
  double interior = x.segment(1, n - 1).dot(y.segment(1, n - 1));
  return a.grid().step() * (0.5 * x[0] * y[0] + interior + 0.5 * x[n] * y[n]);
}

double norm_l2(const Signal& a) { return std::sqrt(std::max(0.0, inner_product(a, a))); }

double norm_linf(const Signal& a) { return a.values().lpNorm<Eigen::Infinity>(); }

}  // namespace ocdr
