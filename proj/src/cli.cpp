#include "mofw/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "mofw/bench.hpp"
#include "mofw/error.hpp"
#include "mofw/solvers.hpp"

namespace mofw::cli {

namespace {

struct SolveArgs {
  std::string problem = "quad";
  int p = 10;
  int n = 10;
  int m = 2;
  std::uint64_t seed = 1;
  std::string solver;
  double eps = 1e-4;
  int max_iter = 10000;
  std::string step_mode = "adaptive";
  std::string stop_mode = "pairwise_gap";
  std::string trace;
  std::string instance;
  std::string polytope;
  std::string save_instance;
};

struct BenchArgs {
  std::string config;
  std::string out;
  int jobs = 0;
};

struct ProfileArgs {
  std::string in;
  std::string metric = "iters";
  std::string svg;
};

int do_solve(const SolveArgs& a) {
  QuadraticInstance inst =
      a.instance.empty() ? make_quadratic(a.p, a.n, a.m, a.seed) : read_instance_file(a.instance);
  if (!a.save_instance.empty()) {
    std::ofstream out(a.save_instance);
    if (!out) throw IoError("cannot open '" + a.save_instance + "' for writing");
    write_instance(out, inst);
    if (!out) throw IoError("write failed for '" + a.save_instance + "'");
  }
  const QuadraticProblem prob(std::move(inst));
  const int n = prob.dimension();

  const Polytope P = a.polytope.empty() ? unit_simplex(n) : read_polytope_file(a.polytope);
  if (P.dimension() != n)
    throw DimensionError("polytope dimension " + std::to_string(P.dimension()) +
                         " does not match instance dimension " + std::to_string(n));

  SolverConfig cfg;
  cfg.eps = a.eps;
  cfg.max_iter = a.max_iter;
  cfg.step_mode = parse_step_mode(a.step_mode);
  cfg.stop_mode = parse_stop_mode(a.stop_mode);
  cfg.validate();

  const SolverId id = parse_solver(a.solver);
  const bool simplex = is_unit_simplex(P);
  if (id == SolverId::pg && !simplex)
    throw PreconditionError("pg runs on the unit simplex only");

  // Start at the barycenter of the vertex set, which is feasible for any polytope.
  const VertexSet V = simplex ? simplex_vertices(n) : enumerate_vertices(P);
  const Vector weights = Vector::Constant(static_cast<Eigen::Index>(V.size()), 1.0 / V.size());
  Vector x0 = Vector::Zero(n);
  for (std::size_t i = 0; i < V.size(); ++i) x0 += weights[static_cast<Eigen::Index>(i)] * V.vertices[i];

  SolverTrace trace;
  switch (id) {
    case SolverId::dipfw: trace = run_dipfw(prob, P, x0, cfg); break;
    case SolverId::fw: trace = run_fw(prob, P, x0, cfg); break;
    case SolverId::afw: trace = run_afw(prob, V, weights, cfg); break;
    case SolverId::pg: trace = run_pg(prob, x0, cfg); break;
  }

  if (!a.trace.empty()) write_trace_csv_file(a.trace, trace);
  std::cout << std::setprecision(10) << "solver=" << to_string(trace.solver)
            << " status=" << to_string(trace.status) << " iterations=" << trace.iterations()
            << " final_gap=" << trace.final_gap << " time_ms=" << trace.elapsed_ns * 1e-6 << '\n';
  std::cout << "F =";
  for (Eigen::Index j = 0; j < trace.final_objectives.size(); ++j)
    std::cout << ' ' << trace.final_objectives[j];
  std::cout << '\n';
  if (trace.status == RunStatus::error) {
    std::cerr << "mofw: solver failed: " << trace.message << '\n';
    return kSolverFailure;
  }
  return kSuccess;
}

int do_bench(const BenchArgs& a) {
  ExperimentPlan plan = parse_plan_file(a.config);
  if (!a.out.empty()) plan.out_dir = a.out;
  if (a.jobs > 0) plan.jobs = a.jobs;
  const ResultMatrix results = run_experiment(plan);

  std::vector<PerformanceProfile> profiles;
  if (results.solvers.size() >= 2) {
    for (Metric metric : {Metric::time, Metric::iterations}) {
      try {
        profiles.push_back(profile_from_results(results, metric));
        for (const auto& w : profiles.back().warnings) std::cerr << "mofw: warning: " << w << '\n';
      } catch (const PreconditionError& e) {
        std::cerr << "mofw: warning: no " << to_string(metric) << " profile: " << e.what() << '\n';
      }
    }
  }
  emit_outputs(results, profiles, plan.out_dir, &plan);
  write_summary_csv(std::cout, results);
  std::cout << "wrote " << plan.out_dir << '\n';

  for (const auto& cell : results.cells)
    if (cell.status == RunStatus::error) return kSolverFailure;
  return kSuccess;
}

int do_profile(const ProfileArgs& a) {
  namespace fs = std::filesystem;
  const fs::path in(a.in);
  const std::string path = fs::is_directory(in) ? (in / "results.csv").string() : a.in;
  const ResultMatrix results = read_results_csv_file(path);
  const PerformanceProfile prof = profile_from_results(results, parse_metric(a.metric));
  for (const auto& w : prof.warnings) std::cerr << "mofw: warning: " << w << '\n';
  write_profile_svg_file(a.svg, prof);
  std::cout << "problems=" << prof.num_problems() << " tau_max=" << prof.tau_grid.back() << '\n';
  for (std::size_t s = 0; s < prof.solvers.size(); ++s)
    std::cout << prof.solvers[s] << " rho(1)=" << prof.rho_at(s, 1.0)
              << " rho(tau_max)=" << prof.rho.at(s).back() << '\n';
  return kSuccess;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Multiobjective Frank-Wolfe solvers and benchmarks"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* sc = app.add_subcommand("solve", "Run one solver on one quadratic instance");
  sc->add_option("--problem", solve.problem, "Problem family")->check(CLI::IsMember({"quad"}));
  sc->add_option("--p", solve.p, "Rows of G")->check(CLI::PositiveNumber);
  sc->add_option("--n", solve.n, "Variables")->check(CLI::PositiveNumber);
  sc->add_option("--m", solve.m, "Objectives")->check(CLI::PositiveNumber);
  sc->add_option("--seed", solve.seed, "Instance seed");
  sc->add_option("--solver", solve.solver, "fw | afw | dipfw | pg")
      ->required()
      ->check(CLI::IsMember({"fw", "afw", "dipfw", "pg"}));
  sc->add_option("--eps", solve.eps, "Stopping tolerance")->check(CLI::PositiveNumber);
  sc->add_option("--max-iter", solve.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  sc->add_option("--step-mode", solve.step_mode, "adaptive | exact_line_search");
  sc->add_option("--stop-mode", solve.stop_mode, "pairwise_gap | fw_gap");
  sc->add_option("--trace", solve.trace, "Write the trace CSV here");
  sc->add_option("--instance", solve.instance, "Read the instance from a file instead of --p/--n/--m/--seed");
  sc->add_option("--polytope", solve.polytope, "Feasible set file (default: unit simplex)");
  sc->add_option("--save-instance", solve.save_instance, "Write the instance used to a file");

  BenchArgs bench;
  auto* bc = app.add_subcommand("bench", "Run an experiment plan");
  bc->add_option("--config", bench.config, "Plan file")->required();
  bc->add_option("--out", bench.out, "Output directory (overrides out_dir)");
  bc->add_option("--jobs", bench.jobs, "Worker threads (overrides jobs)")->check(CLI::PositiveNumber);

  ProfileArgs profile;
  auto* pc = app.add_subcommand("profile", "Build a performance profile from stored results");
  pc->add_option("--in", profile.in, "Bench output directory or results.csv")->required();
  pc->add_option("--metric", profile.metric, "time | iters")
      ->check(CLI::IsMember({"time", "iters", "iterations"}));
  pc->add_option("--svg", profile.svg, "SVG output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*sc) return do_solve(solve);
    if (*bc) return do_bench(bench);
    if (*pc) return do_profile(profile);
  } catch (const IoError& e) {
    std::cerr << "mofw: " << e.what() << '\n';
    return kIoError;
  } catch (const ParseError& e) {
    std::cerr << "mofw: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "mofw: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    std::cerr << "mofw: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "mofw: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kUsage;
}

}  // namespace mofw::cli
