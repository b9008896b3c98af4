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

#include <cstddef>
#include <utility>

#include "ocdr/error.hpp"

namespace ocdr {

/// Uniform time grid t_i = t_start + i*h, i = 0..N.
///
/// The last node is pinned to t_final so that repeated refinement never drifts
/// off the horizon.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_final, int n_intervals);

  /// Grid over [0, t_final].
  static TimeGrid over(double t_final, int n_intervals) { return {0.0, t_final, n_intervals}; }

  double t_start() const { return t_start_; }
  double t_final() const { return t_final_; }
  int intervals() const { return n_; }
  int nodes() const { return n_ + 1; }
  double step() const { return (t_final_ - t_start_) / n_; }
  double span() const { return t_final_ - t_start_; }

  double node(int i) const;
  Eigen::VectorXd node_vector() const;

  /// Composite trapezoid weights h*(1/2, 1, ..., 1, 1/2).
  Eigen::VectorXd trapezoid_weights() const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double t_start_;
  double t_final_;
  int n_;
};

/// Scalar function of time sampled at the nodes of a TimeGrid.
///
/// Between nodes a signal is understood as the linear interpolant. Signals are
/// values: arithmetic returns fresh objects.
class Signal {
 public:
  /// Throws ProblemError when the length is wrong or a value is not finite.
  Signal(TimeGrid grid, Eigen::VectorXd values);

  static Signal zero(const TimeGrid& grid) { return constant(grid, 0.0); }
  static Signal constant(const TimeGrid& grid, double value);

  template <class F>
  static Signal sample(const TimeGrid& grid, F&& f) {
    Eigen::VectorXd v(grid.nodes());
    for (int i = 0; i < grid.nodes(); ++i) v[i] = f(grid.node(i));
    return Signal(grid, std::move(v));
  }

  const TimeGrid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  bool all_finite() const { return values_.allFinite(); }

  friend Signal operator+(const Signal& a, const Signal& b);
  friend Signal operator-(const Signal& a, const Signal& b);
  friend Signal operator*(double s, const Signal& a);
  friend Signal operator*(const Signal& a, double s) { return s * a; }
  friend Signal operator-(const Signal& a) { return -1.0 * a; }

  /// Applies f nodewise.
  template <class F>
  Signal map(F&& f) const {
    Eigen::VectorXd v(values_.size());
    for (Eigen::Index i = 0; i < values_.size(); ++i) v[i] = f(values_[i]);
    return unchecked(grid_, std::move(v));
  }

  /// Builds a signal without the finiteness scan. Arithmetic results use this so
  /// that iterative solvers can detect blow-up themselves.
  static Signal unchecked(TimeGrid grid, Eigen::VectorXd values);

 private:
  struct NoCheck {};
  Signal(TimeGrid grid, Eigen::VectorXd values, NoCheck);

  TimeGrid grid_;
  Eigen::VectorXd values_;
};

/// Vector-valued function of time: one column per grid node.
class Trajectory {
 public:
  Trajectory(TimeGrid grid, Eigen::MatrixXd values);

  const TimeGrid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(values_.rows()); }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::VectorXd at(int node) const { return values_.col(node); }
  Eigen::VectorXd terminal() const { return values_.col(values_.cols() - 1); }

  /// Component i as a scalar signal.
  Signal component(int i) const;

 private:
  TimeGrid grid_;
  Eigen::MatrixXd values_;
};

void require_same_grid(const TimeGrid& a, const TimeGrid& b);

/// Trapezoid quadrature of a(t)b(t).
double inner_product(const Signal& a, const Signal& b);
double norm_l2(const Signal& a);
/// Max over grid nodes, no inter-node interpolation.
double norm_linf(const Signal& a);

}  // namespace ocdr
