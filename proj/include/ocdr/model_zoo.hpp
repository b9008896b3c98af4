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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ocdr/dynamics.hpp"

namespace ocdr {

/// A named system together with its default grid resolution.
struct Problem {
  std::string name;
  LtiSystem system;
  int grid_intervals = 1000;

  TimeGrid grid() const { return TimeGrid::over(system.t_final, grid_intervals); }
};

struct ProblemOverrides {
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> r;
  std::optional<double> t_final;
  std::optional<Eigen::VectorXd> x0;
  std::optional<Eigen::VectorXd> xf;
  std::optional<int> grid_intervals;

  /// Applies every set field, then validates.
  Problem apply(Problem p) const;
};

inline constexpr std::string_view kDoubleIntegrator = "double-integrator";
inline constexpr std::string_view kMachineToolManipulator = "machine-tool-manipulator";

std::vector<std::string> catalog_names();

/// Builds a catalog instance. Throws ProblemError listing the available names
/// when the name is unknown, or naming the violated invariant when an override
/// is invalid.
Problem build(std::string_view name, const ProblemOverrides& overrides = {});

/// Problem file: a JSON object with exactly the fields
///   name, n, A, b, r, lower, upper, x0, xf, t_final.
Problem load_problem(const std::filesystem::path& path);
Problem parse_problem(std::string_view text, std::string_view source = "<string>");
void save_problem(const Problem& problem, const std::filesystem::path& path);

nlohmann::json problem_to_json(const Problem& problem);
Problem problem_from_json(const nlohmann::json& j, std::string_view source = "<json>");

}  // namespace ocdr
