#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mofw/directions.hpp"
#include "mofw/geometry.hpp"
#include "mofw/problems.hpp"

namespace mofw {

enum class SolverId { fw, afw, dipfw, pg };
enum class StepMode { adaptive, exact_line_search };
enum class StopMode { pairwise_gap, fw_gap };
enum class StepClass { good, bad };
enum class RunStatus { converged, iter_cap, error };

const char* to_string(SolverId s);
const char* to_string(StepMode s);
const char* to_string(StopMode s);
const char* to_string(StepClass s);
const char* to_string(RunStatus s);
/// Accepts the lower-case names printed by to_string (plus "exact" and
/// "pairwise"/"fw" shorthands for the modes); throws ParseError otherwise.
SolverId parse_solver(const std::string& s);
StepMode parse_step_mode(const std::string& s);
StopMode parse_stop_mode(const std::string& s);
RunStatus parse_status(const std::string& s);

struct SolverConfig {
  double eps = 1e-4;
  int max_iter = 10000;
  StepMode step_mode = StepMode::adaptive;
  StopMode stop_mode = StopMode::pairwise_gap;
  double eta = 0.9;
  double tau = 2.0;
  /// Initial smoothness estimate; defaults to the problem's L.
  std::optional<double> L0;
  double active_tol = kActiveTolerance;
  int max_backtracks = 100;
  double pg_inner_tol = kPgInnerTolerance;
  int pg_max_inner = kPgInnerIterations;

  void validate() const;
};

/// One step of a solver run, taken from iterate x^k.
struct IterateRecord {
  int k = 0;
  DirectionKind kind = DirectionKind::fw;
  std::optional<double> theta_pw;
  std::optional<double> theta_fw;
  /// Quantity compared against eps by the stopping rule at x^k.
  double stop_measure = 0.0;
  double lambda = 0.0;
  double lambda_max = 0.0;
  StepClass step_class = StepClass::good;
  /// max_j <grad f_j(x^k), d> and |d|^2 for the direction actually stepped along.
  double slope = 0.0;
  double dir_norm_sq = 0.0;
  /// Smoothness estimate that accepted the step (adaptive mode only).
  std::optional<double> smoothness;
  int backtracks = 0;
  std::int64_t elapsed_ns = 0;
  Vector point;       // x^k
  Vector direction;   // d^k, so x^{k+1} = x^k + lambda d^k
  Vector objectives;  // F(x^k)
};

struct SolverTrace {
  SolverId solver = SolverId::dipfw;
  RunStatus status = RunStatus::error;
  std::string message;
  std::vector<IterateRecord> records;
  Vector final_x;
  Vector final_objectives;
  /// Stopping measure at final_x (theta for the FW family, |p - x|^2 / 2 for PG).
  double final_gap = 0.0;
  std::int64_t elapsed_ns = 0;

  int iterations() const { return static_cast<int>(records.size()); }
};

/// Bad iff the step reached its cap (an inequality becomes tight).
StepClass classify_step(double lambda, double lambda_max);

/// Decomposition-invariant pairwise Frank-Wolfe.
///
/// Each round solves the pairwise subproblem at x^k, tests the stopping rule
/// (theta_pw >= -eps, or |theta_fw| <= eps with StopMode::fw_gap), ratio-tests
/// lambda_max along d = p - q, picks lambda in [0, lambda_max] and sets
/// x^{k+1} = x^k + lambda d. Throws InfeasiblePoint if x0 is not in P; failures
/// after the first round end the run with RunStatus::error.
SolverTrace run_dipfw(const MultiobjectiveProblem& prob, const Polytope& P, const Vector& x0,
                      const SolverConfig& cfg);

/// Classical multiobjective Frank-Wolfe: d = p_fw - x, lambda_max = 1, stop on |theta_fw| <= eps.
SolverTrace run_fw(const MultiobjectiveProblem& prob, const Polytope& P, const Vector& x0,
                   const SolverConfig& cfg);

/// Away-step Frank-Wolfe over an explicit vertex set, starting from the
/// convex decomposition `weights` (one entry per vertex, summing to one).
SolverTrace run_afw(const MultiobjectiveProblem& prob, const VertexSet& V, const Vector& weights,
                    const SolverConfig& cfg);
/// Same, starting at vertex V[start].
SolverTrace run_afw(const MultiobjectiveProblem& prob, const VertexSet& V, std::size_t start,
                    const SolverConfig& cfg);

/// Projected gradient over the unit simplex with Armijo steps; stops when
/// |p(x) - x|^2 / 2 < eps.
SolverTrace run_pg(const MultiobjectiveProblem& prob, const Vector& x0, const SolverConfig& cfg);

/// Vertices e_1..e_n of the unit simplex.
VertexSet simplex_vertices(int n);
Vector barycenter(int n);

/// Header `k,theta_pw,theta_fw,lambda,lambda_max,step_class,backtracks,elapsed_ns,f_1,...,f_m`,
/// one row per record (empty cells for absent gaps), then `# status=...` comment.
void write_trace_csv(std::ostream& out, const SolverTrace& trace);
void write_trace_csv_file(const std::string& path, const SolverTrace& trace);

}  // namespace mofw
