#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mofw/profile.hpp"
#include "mofw/solvers.hpp"

namespace mofw {

inline constexpr const char* kVersion = "0.1.0";

struct Dims {
  int p = 0;
  int n = 0;
  int m = 0;

  /// "10x10x2".
  std::string label() const;
  bool operator==(const Dims&) const = default;
};

/// A benchmark grid: every (dims, seed) pair builds one quadratic instance
/// over the unit simplex and every solver runs on it from the barycenter.
struct ExperimentPlan {
  std::vector<Dims> dims;
  std::vector<std::uint64_t> seeds;
  std::vector<SolverId> solvers;
  SolverConfig config;
  std::string out_dir = "bench_out";
  /// Worker threads; 1 runs everything on the calling thread.
  int jobs = 1;

  void validate() const;
};

/// Plain-text `key = value` plan, one key per line, `#` starts a comment.
///
///   dims      = 10,10,2; 20,10,2     (p,n,m triples; "10x10x2" also accepted)
///   seeds     = 1..10, 42            (values and inclusive ranges)
///   solvers   = dipfw, pg, fw, afw   (or "all")
///   eps       = 1e-4
///   max_iter  = 10000
///   step_mode = adaptive | exact_line_search
///   stop_mode = pairwise_gap | fw_gap
///   eta       = 0.9
///   tau       = 2
///   out_dir   = bench_out
///   jobs      = 1
///
/// dims, seeds and solvers are required. Unknown or repeated keys are errors.
ExperimentPlan parse_plan(std::istream& in);
ExperimentPlan parse_plan_file(const std::string& path);
/// Canonical text form, readable by parse_plan.
void write_plan(std::ostream& out, const ExperimentPlan& plan);

struct InstanceKey {
  Dims dims;
  std::uint64_t seed = 0;
};

struct RunResult {
  RunStatus status = RunStatus::error;
  int iterations = 0;
  std::int64_t elapsed_ns = 0;
  double final_gap = 0.0;
  std::string message;
};

/// instances x solvers, row-major. traces is either empty (results read
/// back from disk) or parallel to cells.
struct ResultMatrix {
  std::vector<InstanceKey> instances;
  std::vector<SolverId> solvers;
  std::vector<RunResult> cells;
  std::vector<SolverTrace> traces;

  bool empty() const { return cells.empty(); }
  std::size_t index(std::size_t instance, std::size_t solver) const {
    return instance * solvers.size() + solver;
  }
  const RunResult& at(std::size_t instance, std::size_t solver) const {
    return cells.at(index(instance, solver));
  }
};

/// Runs the plan. Per-run errors are stored in the matrix and the rest of
/// the plan still runs. Results are placed by index, so the matrix does not
/// depend on the number of jobs.
ResultMatrix run_experiment(const ExperimentPlan& plan);

/// One cell of the plan on its own (used by run_experiment).
SolverTrace run_single(const QuadraticProblem& prob, SolverId solver, const SolverConfig& cfg);

/// Profile over the matrix; only converged runs count as solved. Iterations
/// are floored at 1 and times at 1 ns.
PerformanceProfile profile_from_results(const ResultMatrix& results, Metric metric);

struct SummaryRow {
  std::string method;  // upper-case solver name
  std::string dim;
  std::string metric;  // "time" (seconds) or "iterations"
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  int runs = 0;      // runs entering the statistics
  int capped = 0;    // of those, runs that stopped at max_iter
  int failed = 0;    // runs with status error, left out of the statistics
};

/// Rows grouped by dims, then metric, then solver in plan order.
std::vector<SummaryRow> summarize(const ResultMatrix& results);
/// `method,dim,metric,min,mean,max` rows followed by `#` lines for capped or failed runs.
void write_summary_csv(std::ostream& out, const ResultMatrix& results);

/// `p,n,m,seed,solver,status,iterations,elapsed_ns,final_gap`.
void write_results_csv(std::ostream& out, const ResultMatrix& results);
void write_results_csv_file(const std::string& path, const ResultMatrix& results);
ResultMatrix read_results_csv(std::istream& in);
ResultMatrix read_results_csv_file(const std::string& path);

/// Writes summary.csv, results.csv, traces/<solver>_<dims>_s<seed>.csv,
/// profile_<metric>.svg for each profile and manifest.txt into dir.
/// Throws PreconditionError (writing nothing) for an empty matrix.
void emit_outputs(const ResultMatrix& results, const std::vector<PerformanceProfile>& profiles,
                  const std::string& dir, const ExperimentPlan* plan = nullptr);

}  // namespace mofw
