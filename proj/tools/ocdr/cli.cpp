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

#include "ocdr/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ocdr/certificate.hpp"
#include "ocdr/dr_solver.hpp"
#include "ocdr/model_zoo.hpp"
#include "ocdr/oracle.hpp"
#include "ocdr/projections.hpp"

namespace ocdr::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

// Problem selection shared by every command.
struct ProblemArgs {
  std::string builtin;
  std::string file;
  double t_final = 0.0;
  int grid = 0;
  std::string projector = "shooting";
  CLI::Option* tf_opt = nullptr;
  CLI::Option* grid_opt = nullptr;

  void attach(CLI::App* app) {
    auto* b = app->add_option("--builtin", builtin, "catalog problem name");
    auto* p = app->add_option("--problem", file, "problem JSON file");
    b->excludes(p);
    tf_opt = app->add_option("--tf", t_final, "override the final time");
    grid_opt = app->add_option("--grid", grid, "grid intervals");
    app->add_option("--projector", projector, "affine projector: shooting, analytic or auto")
        ->check(CLI::IsMember({"shooting", "analytic", "auto"}));
  }

  Problem resolve(int default_grid = 0) const {
    ProblemOverrides o;
    if (tf_opt && tf_opt->count()) o.t_final = t_final;
    if (grid_opt && grid_opt->count()) {
      o.grid_intervals = grid;
    } else if (default_grid > 0) {
      o.grid_intervals = default_grid;
    }
    if (!builtin.empty()) return build(builtin, o);
    if (!file.empty()) return o.apply(load_problem(file));
    throw InputError("one of --builtin or --problem is required");
  }
};

std::unique_ptr<AffineProjector> make_projector(const std::string& kind, const LtiSystem& sys,
                                                const TimeGrid& grid) {
  if (kind == "analytic" || (kind == "auto" && DoubleIntegratorProjector::applicable(sys)))
    return std::make_unique<DoubleIntegratorProjector>(sys, grid);
  if (kind == "shooting" || kind == "auto") return std::make_unique<ShootingOperator>(sys, grid);
  throw InputError("unknown projector '" + kind + "'");
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  ProblemArgs problem;
  double gamma = 0.0;
  double eps = 1e-8;
  int max_iter = 10000;
  std::string out_dir = "ocdr-run";
  CLI::Option* gamma_opt = nullptr;
};

void write_solution(const fs::path& path, const Problem& problem, const DrConfig& cfg, const DrRun& run,
                    const AffineProjector& projector) {
  const auto& sys = problem.system;
  const auto& prop = projector.propagator();
  const TimeGrid& grid = projector.grid();
  const Trajectory x = prop.state(run.u_tilde, sys.x0);
  const Trajectory lambda = prop.adjoint(-fit_adjoint(prop, run.w).p);

  auto out = open_output(path);
  out << "# problem: " << problem.name << '\n'
      << "# gamma: " << fmt(cfg.gamma) << '\n'
      << "# eps: " << fmt(cfg.epsilon) << '\n'
      << "# N: " << grid.intervals() << '\n'
      << "# iterations: " << run.iterations << '\n'
      << "# converged: " << (run.converged ? "true" : "false") << '\n';
  out << "t,u,w,phi,u_tilde";
  for (int i = 1; i <= sys.dim(); ++i) out << ",x_" << i;
  for (int i = 1; i <= sys.dim(); ++i) out << ",lambda_" << i;
  out << '\n';
  for (int k = 0; k < grid.nodes(); ++k) {
    out << fmt(grid.node(k)) << ',' << fmt(run.u_hat[k]) << ',' << fmt(run.w[k]) << ',' << fmt(run.phi[k]) << ','
        << fmt(run.u_tilde[k]);
    for (int i = 0; i < sys.dim(); ++i) out << ',' << fmt(x.values()(i, k));
    for (int i = 0; i < sys.dim(); ++i) out << ',' << fmt(lambda.values()(i, k));
    out << '\n';
  }
}

void write_history(const fs::path& path, const DrRun& run) {
  auto out = open_output(path);
  out << "k,residual_linf,primal_objective,dual_objective\n";
  for (const auto& h : run.history)
    out << h.k << ',' << fmt(h.residual_linf) << ',' << fmt(h.primal_objective) << ',' << fmt(h.dual_objective)
        << '\n';
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const Problem problem = a.problem.resolve();
  const TimeGrid grid = problem.grid();
  const auto projector = make_projector(a.problem.projector, problem.system, grid);

  DrConfig cfg = DrConfig::for_system(problem.system);
  if (a.gamma_opt->count()) cfg.gamma = a.gamma;
  cfg.epsilon = a.eps;
  cfg.max_iterations = a.max_iter;
  const DrRun run = solve(*projector, cfg);
  const ObjectivePair obj = duality_gap(problem.system, run.u_tilde, run.w, run.a_perp);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_solution(dir / "solution.csv", problem, cfg, run, *projector);
  write_history(dir / "history.csv", run);

  json j;
  j["problem"] = problem_to_json(problem);
  j["grid_intervals"] = grid.intervals();
  j["projector"] = a.problem.projector;
  j["gamma"] = cfg.gamma;
  j["gamma_overrides_r"] = run.gamma_overrides_r;
  j["epsilon"] = cfg.epsilon;
  j["max_iterations"] = cfg.max_iterations;
  j["initial_iterate"] = "zero";
  j["result"] = {{"converged", run.converged},
                 {"iterations", run.iterations},
                 {"final_residual", run.final_residual},
                 {"primal_objective", obj.primal_value},
                 {"dual_objective", obj.dual_value},
                 {"gap", obj.gap}};
  j["files"] = {{"solution", "solution.csv"}, {"history", "history.csv"}};
  open_output(dir / "run.json") << j.dump(2) << '\n';

  out << (run.converged ? "converged" : "max-iter") << " k=" << run.iterations << " residual=" << fmt(run.final_residual)
      << " primal=" << fmt(obj.primal_value) << " dual=" << fmt(obj.dual_value) << " gap=" << fmt(obj.gap) << '\n';
  return run.converged ? kConverged : kMaxIterations;
}

// ---------------------------------------------------------------- certify

struct CertifyArgs {
  ProblemArgs problem;
  std::string run_dir;
  std::string solution;
  std::string out_dir;
  double kkt_tol = CertificateTolerances{}.kkt;
  double gap_tol = CertificateTolerances{}.gap;
};

struct SolutionTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  Eigen::VectorXd column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw InputError("solution is missing column '" + name + "'");
    const auto c = static_cast<std::size_t>(it - columns.begin());
    Eigen::VectorXd v(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) v[static_cast<Eigen::Index>(i)] = rows[i][c];
    return v;
  }
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

double parse_number(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InputError(where + ": not a number: '" + s + "'");
  return v;
}

SolutionTable read_solution(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open solution '" + path.string() + "'");
  SolutionTable t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (t.columns.empty()) {
      t.columns = split(line, ',');
      continue;
    }
    const auto cells = split(line, ',');
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (cells.size() != t.columns.size()) throw InputError(where + ": wrong number of fields");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_number(c, where));
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty() || t.rows.size() < 3) throw InputError(path.string() + ": no solution data");
  return t;
}

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  Problem problem;
  std::string projector_kind = a.problem.projector;
  fs::path solution_path;
  fs::path out_dir;
  if (!a.run_dir.empty()) {
    const fs::path dir(a.run_dir);
    const json j = read_json(dir / "run.json");
    try {
      problem = problem_from_json(j.at("problem"), (dir / "run.json").string());
      projector_kind = j.at("projector").get<std::string>();
      solution_path = dir / j.at("files").at("solution").get<std::string>();
    } catch (const json::exception& e) {
      throw InputError((dir / "run.json").string() + ": " + e.what());
    }
    out_dir = dir;
  } else if (!a.solution.empty()) {
    problem = a.problem.resolve();
    solution_path = a.solution;
    out_dir = solution_path.parent_path();
  } else {
    throw InputError("certify needs --run DIR or --solution CSV with --builtin/--problem");
  }
  if (!a.out_dir.empty()) out_dir = a.out_dir;

  const SolutionTable table = read_solution(solution_path);
  const auto& sys = problem.system;
  const TimeGrid grid = TimeGrid::over(sys.t_final, static_cast<int>(table.rows.size()) - 1);
  const Eigen::VectorXd t = table.column("t");
  for (int i = 0; i < grid.nodes(); ++i)
    if (std::abs(t[i] - grid.node(i)) > 1e-9 * (1.0 + sys.t_final))
      throw InputError(solution_path.string() + ": time column does not match a uniform grid on [0, " +
                       fmt(sys.t_final) + "]");

  const auto projector = make_projector(projector_kind, sys, grid);
  CertificateTolerances tol;
  tol.kkt = a.kkt_tol;
  tol.gap = a.gap_tol;
  const CertificateReport report =
      certify(*projector, Signal(grid, table.column("u_tilde")), Signal(grid, table.column("w")),
              Signal(grid, table.column("phi")), tol);

  json checks = json::array();
  for (const auto& c : report.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " residual=" << fmt(c.residual)
        << " tolerance=" << fmt(c.tolerance) << '\n';
    checks.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  json j;
  j["verdict"] = report.pass ? "pass" : "fail";
  j["worst"] = report.worst().name;
  j["checks"] = checks;
  j["primal_objective"] = report.gap.primal_value;
  j["dual_objective"] = report.gap.dual_value;
  j["gap"] = report.gap.gap;
  j["dual_p0"] = to_json(report.dual_adjoint.p0);
  if (!out_dir.empty()) fs::create_directories(out_dir);
  open_output(out_dir / "certificate.json") << j.dump(2) << '\n';

  out << "verdict " << (report.pass ? "pass" : "fail") << " worst=" << report.worst().name << '\n';
  return report.pass ? kConverged : kCertificateFailed;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  ProblemArgs problem;
  std::vector<double> gammas;
  std::string range;
  double eps = 1e-8;
  int max_iter = 10000;
  std::string out_dir = "ocdr-sweep";
};

std::vector<double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InputError("gamma range must be lo:hi:steps, got '" + text + "'");
  const double lo = parse_number(parts[0], "gamma range");
  const double hi = parse_number(parts[1], "gamma range");
  const double steps_real = parse_number(parts[2], "gamma range");
  const int steps = static_cast<int>(steps_real);
  if (steps < 1 || steps != steps_real) throw InputError("gamma range: steps must be a positive integer");
  if (!(lo <= hi)) throw InputError("gamma range: lo must not exceed hi");
  if (steps == 1 && lo != hi) throw InputError("gamma range: a single step needs lo == hi");
  std::vector<double> g(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) g[static_cast<std::size_t>(i)] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  return g;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<double> gammas = a.gammas;
  if (!a.range.empty() && !gammas.empty()) throw InputError("use either --gammas or --gamma-range");
  if (!a.range.empty()) gammas = parse_range(a.range);
  if (gammas.empty()) throw InputError("sweep needs --gammas or --gamma-range");
  for (double g : gammas)
    if (!(g > 0.0 && g < 1.0)) throw InputError("gamma " + fmt(g) + " outside (0, 1)");

  const Problem problem = a.problem.resolve();
  const auto projector = make_projector(a.problem.projector, problem.system, problem.grid());
  DrConfig base = DrConfig::for_system(problem.system);
  base.epsilon = a.eps;
  base.max_iterations = a.max_iter;
  const auto rows = gamma_sweep(*projector, gammas, base);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  auto csv = open_output(dir / "sweep.csv");
  csv << "gamma,iterations,converged,final_residual\n";
  for (const auto& r : rows) {
    csv << fmt(r.gamma) << ',' << r.iterations << ',' << (r.converged ? "true" : "false") << ','
        << fmt(r.final_residual) << '\n';
    out << "gamma=" << fmt(r.gamma) << " iterations=" << r.iterations << " converged=" << (r.converged ? "true" : "false")
        << " residual=" << fmt(r.final_residual) << '\n';
    if (!r.error.empty()) err << "gamma=" << fmt(r.gamma) << ": " << r.error << '\n';
  }
  return kConverged;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  ProblemArgs problem;
  double gamma = 0.0;
  double eps = 1e-8;
  int max_iter = 10000;
  int oracle_iters = 200;
  double oracle_step = 0.0;
  double tol = 1e-3;
  std::string out_dir;
  CLI::Option* gamma_opt = nullptr;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const Problem problem = a.problem.resolve(200);
  const TimeGrid grid = problem.grid();
  if (grid.intervals() > kOracleMaxIntervals)
    throw InputError("compare needs --grid <= " + std::to_string(kOracleMaxIntervals));
  const auto projector = make_projector(a.problem.projector, problem.system, grid);
  DrConfig cfg = DrConfig::for_system(problem.system);
  if (a.gamma_opt->count()) cfg.gamma = a.gamma;
  cfg.epsilon = a.eps;
  cfg.max_iterations = a.max_iter;
  const DrRun run = solve(*projector, cfg);
  const double dr = primal_objective(problem.system, run.u_tilde);

  OracleOptions opt;
  opt.step = a.oracle_step;
  opt.outer_iterations = a.oracle_iters;
  const OracleResult oracle = projected_gradient_solve(problem.system, grid, opt);
  const double rel = std::abs(dr - oracle.objective) / std::max(1e-300, std::abs(oracle.objective));
  const double diff = std::abs(dr - oracle.objective);
  const bool agree = diff <= a.tol * std::abs(oracle.objective);

  out << "dr_objective=" << fmt(dr) << " oracle_objective=" << fmt(oracle.objective)
      << " relative_difference=" << fmt(rel) << " dr_iterations=" << run.iterations
      << " oracle_converged=" << (oracle.converged ? "true" : "false") << '\n';
  if (!a.out_dir.empty()) {
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    json j{{"problem", problem.name},
           {"grid_intervals", grid.intervals()},
           {"dr_objective", dr},
           {"dr_iterations", run.iterations},
           {"dr_converged", run.converged},
           {"oracle_objective", oracle.objective},
           {"oracle_converged", oracle.converged},
           {"oracle_terminal_residual", oracle.terminal_residual},
           {"relative_difference", rel},
           {"tolerance", a.tol},
           {"agree", agree}};
    open_output(dir / "compare.json") << j.dump(2) << '\n';
  }
  if (!run.converged) return kMaxIterations;
  return agree ? kConverged : kCertificateFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Douglas-Rachford solver for control-constrained minimum-energy control", "ocdr"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "run the DR iteration and write solution, history and run.json");
  solve_args.problem.attach(solve_cmd);
  solve_args.gamma_opt = solve_cmd->add_option("--gamma", solve_args.gamma, "step parameter, default 1/(1+r)");
  solve_cmd->add_option("--eps", solve_args.eps, "stopping tolerance on ||u_{k+1} - u_k||_inf");
  solve_cmd->add_option("--max-iter", solve_args.max_iter, "iteration limit");
  solve_cmd->add_option("--out", solve_args.out_dir, "output directory");

  CertifyArgs cert_args;
  auto* cert_cmd = app.add_subcommand("certify", "verify optimality of a solved run");
  cert_args.problem.attach(cert_cmd);
  cert_cmd->add_option("--run", cert_args.run_dir, "directory written by solve");
  cert_cmd->add_option("--solution", cert_args.solution, "solution.csv (needs --builtin or --problem)");
  cert_cmd->add_option("--out", cert_args.out_dir, "directory for certificate.json");
  cert_cmd->add_option("--kkt-tol", cert_args.kkt_tol, "kkt tolerance before scaling by 1 + ||u||_inf");
  cert_cmd->add_option("--gap-tol", cert_args.gap_tol, "gap tolerance before scaling by 1 + |primal|");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "iteration counts over a set of gamma values");
  sweep_args.problem.attach(sweep_cmd);
  sweep_cmd->add_option("--gammas", sweep_args.gammas, "comma separated gamma values")->delimiter(',');
  sweep_cmd->add_option("--gamma-range", sweep_args.range, "lo:hi:steps");
  sweep_cmd->add_option("--eps", sweep_args.eps, "stopping tolerance");
  sweep_cmd->add_option("--max-iter", sweep_args.max_iter, "iteration limit");
  sweep_cmd->add_option("--out", sweep_args.out_dir, "output directory");

  CompareArgs cmp_args;
  auto* cmp_cmd = app.add_subcommand("compare", "compare the DR objective with the projected-gradient oracle");
  cmp_args.problem.attach(cmp_cmd);
  cmp_args.gamma_opt = cmp_cmd->add_option("--gamma", cmp_args.gamma, "step parameter, default 1/(1+r)");
  cmp_cmd->add_option("--eps", cmp_args.eps, "DR stopping tolerance");
  cmp_cmd->add_option("--max-iter", cmp_args.max_iter, "DR iteration limit");
  cmp_cmd->add_option("--oracle-iters", cmp_args.oracle_iters, "oracle outer iterations");
  cmp_cmd->add_option("--oracle-step", cmp_args.oracle_step, "oracle gradient step, default 1/(2r)");
  cmp_cmd->add_option("--tol", cmp_args.tol, "relative agreement tolerance");
  cmp_cmd->add_option("--out", cmp_args.out_dir, "directory for compare.json");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args, out);
    if (cert_cmd->parsed()) return cmd_certify(cert_args, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, out, err);
    return cmd_compare(cmp_args, out);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kMaxIterations;
  } catch (const ProjectorError& e) {
    err << "error: " << e.what() << '\n';
    return kProjectorFailure;
  } catch (const DynamicsError& e) {
    err << "error: " << e.what() << '\n';
    return kProjectorFailure;
  } catch (const DualRepresentationError& e) {
    err << "error: " << e.what() << '\n';
    return kProjectorFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace ocdr::cli
