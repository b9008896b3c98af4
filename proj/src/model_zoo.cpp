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

#include "ocdr/model_zoo.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ocdr {

namespace {

using nlohmann::json;

Problem double_integrator() {
  Problem p;
  p.name = std::string(kDoubleIntegrator);
  auto& s = p.system;
  s.A = Eigen::MatrixXd::Zero(2, 2);
  s.A(0, 1) = 1.0;
  s.b = Eigen::Vector2d(0.0, 1.0);
  s.r = 1.0 / 3.0;
  s.lower = -2.5;
  s.upper = 2.5;
  s.x0 = Eigen::Vector2d(0.0, 1.0);
  s.xf = Eigen::Vector2d(0.0, 0.0);
  s.t_final = 1.0;
  p.grid_intervals = 1000;
  return p;
}

Problem machine_tool_manipulator() {
  Problem p;
  p.name = std::string(kMachineToolManipulator);
  auto& s = p.system;
  s.A = Eigen::MatrixXd::Zero(7, 7);
  s.A(0, 3) = 1.0;
  s.A(1, 4) = 1.0;
  s.A(2, 5) = 1.0;
  s.A(3, 0) = -4.441e7 / 450.0;
  s.A(3, 3) = -8500.0 / 450.0;
  s.A(3, 6) = -1.0 / 450.0;
  s.A(4, 6) = 1.0 / 750.0;
  s.A(5, 2) = -8.2e6 / 40.0;
  s.A(5, 5) = -1800.0 / 40.0;
  s.A(5, 6) = 0.25 / 40.0;
  s.A(6, 6) = -1.0 / 0.0025;
  s.b = Eigen::VectorXd::Zero(7);
  s.b[6] = 1.0 / 0.0025;
  s.r = 1.0 / 0.55 - 1.0;
  s.lower = -2000.0;
  s.upper = 2000.0;
  s.x0 = Eigen::VectorXd::Zero(7);
  s.xf = Eigen::VectorXd::Zero(7);
  s.xf[1] = 2.7e-3;
  s.xf[4] = 0.1;
  // The data list gives 0.522; the box-projector remark quotes 0.0522.
  s.t_final = 0.522;
  p.grid_intervals = 2000;
  return p;
}

[[noreturn]] void fail(std::string_view source, const std::string& msg) {
  throw ProblemError(std::string(source) + ": " + msg);
}

double number(const json& j, const char* field, std::string_view source) {
  if (!j.is_number()) fail(source, std::string("field '") + field + "': expected a number");
  return j.get<double>();
}

Eigen::VectorXd vector(const json& j, const char* field, std::string_view source) {
  if (!j.is_array()) fail(source, std::string("field '") + field + "': expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = number(j[i], field, source);
  return v;
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

Problem ProblemOverrides::apply(Problem p) const {
  auto& s = p.system;
  if (lower) s.lower = *lower;
  if (upper) s.upper = *upper;
  if (r) s.r = *r;
  if (t_final) s.t_final = *t_final;
  if (x0) s.x0 = *x0;
  if (xf) s.xf = *xf;
  if (grid_intervals) p.grid_intervals = *grid_intervals;
  s.validate();
  if (p.grid_intervals < 2) throw ProblemError("grid must have at least 2 intervals");
  return p;
}

std::vector<std::string> catalog_names() {
  return {std::string(kDoubleIntegrator), std::string(kMachineToolManipulator)};
}

Problem build(std::string_view name, const ProblemOverrides& overrides) {
  if (name == kDoubleIntegrator) return overrides.apply(double_integrator());
  if (name == kMachineToolManipulator) return overrides.apply(machine_tool_manipulator());
  std::string msg = "unknown problem '" + std::string(name) + "'; available:";
  for (const auto& n : catalog_names()) msg += " " + n;
  throw ProblemError(msg);
}

Problem problem_from_json(const json& j, std::string_view source) {
  static const std::set<std::string> kFields = {"name", "n",     "A",  "b",  "r",
                                                "lower", "upper", "x0", "xf", "t_final"};
  if (!j.is_object()) fail(source, "problem must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kFields.contains(key)) fail(source, "unknown field '" + key + "'");
  for (const auto& key : kFields)
    if (!j.contains(key)) fail(source, "missing field '" + key + "'");

  Problem p;
  if (!j["name"].is_string()) fail(source, "field 'name': expected a string");
  p.name = j["name"].get<std::string>();
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1)
    fail(source, "field 'n': expected a positive integer");
  const auto n = static_cast<Eigen::Index>(j["n"].get<long long>());

  const json& a = j["A"];
  if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != n)
    fail(source, "field 'A': expected " + std::to_string(n) + " rows");
  auto& s = p.system;
  s.A.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd row = vector(a[i], "A", source);
    if (row.size() != n)
      fail(source, "field 'A': row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(n));
    s.A.row(i) = row.transpose();
  }
  s.b = vector(j["b"], "b", source);
  s.x0 = vector(j["x0"], "x0", source);
  s.xf = vector(j["xf"], "xf", source);
  for (const auto& [field, v] : {std::pair{"b", &s.b}, {"x0", &s.x0}, {"xf", &s.xf}})
    if (v->size() != n) fail(source, std::string("field '") + field + "': expected length " + std::to_string(n));
  s.r = number(j["r"], "r", source);
  s.lower = number(j["lower"], "lower", source);
  s.upper = number(j["upper"], "upper", source);
  s.t_final = number(j["t_final"], "t_final", source);
  try {
    s.validate();
  } catch (const ProblemError& e) {
    fail(source, e.what());
  }
  return p;
}

Problem parse_problem(std::string_view text, std::string_view source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
    fail(source, "parse error at line " + std::to_string(line) + ": " + e.what());
  }
  return problem_from_json(j, source);
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open problem file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path.string());
}

json problem_to_json(const Problem& p) {
  const auto& s = p.system;
  json a = json::array();
  for (Eigen::Index i = 0; i < s.A.rows(); ++i) a.push_back(to_json(s.A.row(i).transpose()));
  return json{{"name", p.name},   {"n", s.dim()},       {"A", a},         {"b", to_json(s.b)},
              {"r", s.r},         {"lower", s.lower},   {"upper", s.upper}, {"x0", to_json(s.x0)},
              {"xf", to_json(s.xf)}, {"t_final", s.t_final}};
}

void save_problem(const Problem& problem, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ProblemError("cannot write problem file '" + path.string() + "'");
  out << problem_to_json(problem).dump(2) << '\n';
}

}  // namespace ocdr
