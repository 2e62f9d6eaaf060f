#include "mofw/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <span>

#include "mofw/error.hpp"
#include "mofw/stepsize.hpp"

namespace mofw {

const char* to_string(SolverId s) {
  switch (s) {
    case SolverId::fw: return "fw";
    case SolverId::afw: return "afw";
    case SolverId::dipfw: return "dipfw";
    case SolverId::pg: return "pg";
  }
  return "unknown";
}

const char* to_string(StepMode s) {
  return s == StepMode::adaptive ? "adaptive" : "exact_line_search";
}

const char* to_string(StopMode s) { return s == StopMode::pairwise_gap ? "pairwise_gap" : "fw_gap"; }

const char* to_string(StepClass s) { return s == StepClass::good ? "good" : "bad"; }

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::iter_cap: return "iter_cap";
    case RunStatus::error: return "error";
  }
  return "unknown";
}

SolverId parse_solver(const std::string& s) {
  if (s == "fw") return SolverId::fw;
  if (s == "afw") return SolverId::afw;
  if (s == "dipfw") return SolverId::dipfw;
  if (s == "pg") return SolverId::pg;
  throw ParseError("unknown solver '" + s + "' (expected fw, afw, dipfw or pg)");
}

StepMode parse_step_mode(const std::string& s) {
  if (s == "adaptive") return StepMode::adaptive;
  if (s == "exact_line_search" || s == "exact") return StepMode::exact_line_search;
  throw ParseError("unknown step mode '" + s + "' (expected adaptive or exact_line_search)");
}

StopMode parse_stop_mode(const std::string& s) {
  if (s == "pairwise_gap" || s == "pairwise") return StopMode::pairwise_gap;
  if (s == "fw_gap" || s == "fw") return StopMode::fw_gap;
  throw ParseError("unknown stop mode '" + s + "' (expected pairwise_gap or fw_gap)");
}

RunStatus parse_status(const std::string& s) {
  if (s == "converged") return RunStatus::converged;
  if (s == "iter_cap") return RunStatus::iter_cap;
  if (s == "error") return RunStatus::error;
  throw ParseError("unknown run status '" + s + "'");
}

void SolverConfig::validate() const {
  if (!(eps > 0.0)) throw PreconditionError("solver config: eps must be positive");
  if (max_iter < 1) throw PreconditionError("solver config: max_iter must be >= 1");
  if (!(active_tol > 0.0)) throw PreconditionError("solver config: active_tol must be positive");
  if (L0 && !(*L0 > 0.0)) throw PreconditionError("solver config: L0 must be positive");
  StepSizeState{1.0, eta, tau}.validate();
}

StepClass classify_step(double lambda, double lambda_max) {
  return lambda >= lambda_max ? StepClass::bad : StepClass::good;
}

VertexSet simplex_vertices(int n) {
  VertexSet V;
  for (int i = 0; i < n; ++i) V.vertices.push_back(Vector::Unit(n, i));
  return V;
}

Vector barycenter(int n) { return Vector::Constant(n, 1.0 / static_cast<double>(n)); }

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

struct StepChoice {
  double lambda = 0.0;
  std::optional<double> smoothness;
  int backtracks = 0;
};

StepChoice choose_step(const MultiobjectiveProblem& prob, const Vector& x, const Vector& d,
                       double slope, double lambda_max, const SolverConfig& cfg,
                       StepSizeState& state) {
  StepChoice out;
  if (cfg.step_mode == StepMode::adaptive) {
    const StepResult r = adaptive_step(prob, x, d, slope, lambda_max, state, cfg.max_backtracks);
    state.L_est = r.L_out;
    out.lambda = r.lambda;
    out.smoothness = r.L_out;
    out.backtracks = r.backtracks;
  } else {
    out.lambda = exact_line_search(prob, x, d, lambda_max);
  }
  return out;
}

StepSizeState initial_state(const MultiobjectiveProblem& prob, const SolverConfig& cfg) {
  return StepSizeState{cfg.L0.value_or(prob.smoothness()), cfg.eta, cfg.tau};
}

void check_start(const MultiobjectiveProblem& prob, const Vector& x0, const char* who) {
  if (x0.size() != prob.dimension())
    throw DimensionError(std::string(who) + ": x0 has dimension " + std::to_string(x0.size()) +
                         ", problem has " + std::to_string(prob.dimension()));
}

// Shared bookkeeping for one run: clock, trace, and the terminal bookkeeping.
class RunState {
 public:
  RunState(SolverId id, const MultiobjectiveProblem& prob) : prob_(prob), start_(Clock::now()) {
    trace_.solver = id;
  }

  IterateRecord& begin_record(int k, const Vector& x) {
    IterateRecord& rec = trace_.records.emplace_back();
    rec.k = k;
    rec.point = x;
    rec.objectives = prob_.evaluate(x);
    return rec;
  }

  void stamp(IterateRecord& rec) const { rec.elapsed_ns = since(start_); }

  SolverTrace finish(RunStatus status, const Vector& x, double gap, std::string message = {}) {
    trace_.status = status;
    trace_.message = std::move(message);
    trace_.final_x = x;
    trace_.final_objectives = prob_.evaluate(x);
    trace_.final_gap = gap;
    trace_.elapsed_ns = since(start_);
    return std::move(trace_);
  }

 private:
  const MultiobjectiveProblem& prob_;
  Clock::time_point start_;
  SolverTrace trace_;
};

double cap_unbounded(const Polytope& P, const Vector& d) {
  if (P.diameter_hint) return *P.diameter_hint / d.norm();
  throw PreconditionError("ratio test found no bound along the direction and the polytope has no diameter hint");
}

constexpr double kZeroDirection = 1e-12;

}  // namespace

SolverTrace run_dipfw(const MultiobjectiveProblem& prob, const Polytope& P, const Vector& x0,
                      const SolverConfig& cfg) {
  cfg.validate();
  P.validate();
  check_start(prob, x0, "run_dipfw");
  if (const double viol = feasibility_violation(P, x0); viol > cfg.active_tol)
    throw InfeasiblePoint("run_dipfw: x0 violates the polytope by " + std::to_string(viol));

  RunState run(SolverId::dipfw, prob);
  StepSizeState state = initial_state(prob, cfg);
  Vector x = x0;
  double measure = std::numeric_limits<double>::quiet_NaN();
  try {
    for (int k = 0;; ++k) {
      const Matrix J = prob.jacobian(x);
      const DirectionResult pw = pairwise_direction(J, P, x, cfg.active_tol);
      std::optional<double> theta_fw;
      bool stop = false;
      if (cfg.stop_mode == StopMode::fw_gap) {
        theta_fw = fw_direction(J, P, x, cfg.active_tol).theta;
        measure = *theta_fw;
        stop = std::abs(*theta_fw) <= cfg.eps;
      } else {
        measure = pw.theta;
        stop = pw.theta >= -cfg.eps;
      }
      if (stop || pw.dir.norm() <= kZeroDirection) return run.finish(RunStatus::converged, x, measure);
      if (k == cfg.max_iter) return run.finish(RunStatus::iter_cap, x, measure);

      const double slope = (J * pw.dir).maxCoeff();
      if (!(slope < 0.0))
        throw ConvergenceFailure("pairwise direction is not a descent direction (slope " +
                                 std::to_string(slope) + ")");
      const StepLimit limit = max_feasible_step(P, x, pw.dir, cfg.active_tol);
      const double lambda_max = limit.bounded() ? limit.value() : cap_unbounded(P, pw.dir);
      if (!(lambda_max > 0.0)) throw ConvergenceFailure("pairwise direction admits no feasible step");
      const StepChoice step = choose_step(prob, x, pw.dir, slope, lambda_max, cfg, state);

      IterateRecord& rec = run.begin_record(k, x);
      rec.kind = DirectionKind::pairwise;
      rec.theta_pw = pw.theta;
      rec.theta_fw = theta_fw;
      rec.stop_measure = measure;
      rec.lambda = step.lambda;
      rec.lambda_max = lambda_max;
      rec.step_class = classify_step(step.lambda, lambda_max);
      rec.slope = slope;
      rec.dir_norm_sq = pw.dir.squaredNorm();
      rec.direction = pw.dir;
      rec.smoothness = step.smoothness;
      rec.backtracks = step.backtracks;
      x = x + step.lambda * pw.dir;
      run.stamp(rec);
    }
  } catch (const Error& e) {
    return run.finish(RunStatus::error, x, measure, e.what());
  }
}

SolverTrace run_fw(const MultiobjectiveProblem& prob, const Polytope& P, const Vector& x0,
                   const SolverConfig& cfg) {
  cfg.validate();
  P.validate();
  check_start(prob, x0, "run_fw");
  if (const double viol = feasibility_violation(P, x0); viol > cfg.active_tol)
    throw InfeasiblePoint("run_fw: x0 violates the polytope by " + std::to_string(viol));

  RunState run(SolverId::fw, prob);
  StepSizeState state = initial_state(prob, cfg);
  Vector x = x0;
  double measure = std::numeric_limits<double>::quiet_NaN();
  try {
    for (int k = 0;; ++k) {
      const Matrix J = prob.jacobian(x);
      const DirectionResult fw = fw_direction(J, P, x, cfg.active_tol);
      measure = fw.theta;
      if (std::abs(fw.theta) <= cfg.eps || fw.dir.norm() <= kZeroDirection)
        return run.finish(RunStatus::converged, x, measure);
      if (k == cfg.max_iter) return run.finish(RunStatus::iter_cap, x, measure);

      const double slope = (J * fw.dir).maxCoeff();
      if (!(slope < 0.0)) throw ConvergenceFailure("FW direction is not a descent direction");
      const StepChoice step = choose_step(prob, x, fw.dir, slope, 1.0, cfg, state);

      IterateRecord& rec = run.begin_record(k, x);
      rec.kind = DirectionKind::fw;
      rec.theta_fw = fw.theta;
      rec.stop_measure = measure;
      rec.lambda = step.lambda;
      rec.lambda_max = 1.0;
      rec.step_class = classify_step(step.lambda, 1.0);
      rec.slope = slope;
      rec.dir_norm_sq = fw.dir.squaredNorm();
      rec.direction = fw.dir;
      rec.smoothness = step.smoothness;
      rec.backtracks = step.backtracks;
      x = x + step.lambda * fw.dir;
      run.stamp(rec);
    }
  } catch (const Error& e) {
    return run.finish(RunStatus::error, x, measure, e.what());
  }
}

SolverTrace run_afw(const MultiobjectiveProblem& prob, const VertexSet& V, const Vector& weights,
                    const SolverConfig& cfg) {
  cfg.validate();
  if (V.size() == 0) throw PreconditionError("run_afw: empty vertex set");
  if (static_cast<std::size_t>(weights.size()) != V.size())
    throw DimensionError("run_afw: one weight per vertex required");
  if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-10)
    throw PreconditionError("run_afw: weights must be nonnegative and sum to one");
  for (const auto& v : V.vertices) check_start(prob, v, "run_afw");

  Vector alpha = weights;
  Vector x = Vector::Zero(prob.dimension());
  for (std::size_t a = 0; a < V.size(); ++a) x += alpha[static_cast<Eigen::Index>(a)] * V[a];

  RunState run(SolverId::afw, prob);
  StepSizeState state = initial_state(prob, cfg);
  double measure = std::numeric_limits<double>::quiet_NaN();
  try {
    for (int k = 0;; ++k) {
      const Matrix J = prob.jacobian(x);
      const AwayStepChoice choice =
          afw_direction(J, V, std::span<const double>(alpha.data(), V.size()), x);
      measure = choice.theta_fw;
      const Vector& d = choice.direction.dir;
      if (std::abs(choice.theta_fw) <= cfg.eps || d.norm() <= kZeroDirection)
        return run.finish(RunStatus::converged, x, measure);
      if (k == cfg.max_iter) return run.finish(RunStatus::iter_cap, x, measure);

      const double slope = (J * d).maxCoeff();
      if (!(slope < 0.0)) throw ConvergenceFailure("AFW direction is not a descent direction");
      const StepChoice step = choose_step(prob, x, d, slope, choice.lambda_max, cfg, state);

      IterateRecord& rec = run.begin_record(k, x);
      rec.kind = choice.direction.kind;
      rec.theta_fw = choice.theta_fw;
      rec.stop_measure = measure;
      rec.lambda = step.lambda;
      rec.lambda_max = choice.lambda_max;
      rec.step_class = classify_step(step.lambda, choice.lambda_max);
      rec.slope = slope;
      rec.dir_norm_sq = d.squaredNorm();
      rec.direction = d;
      rec.smoothness = step.smoothness;
      rec.backtracks = step.backtracks;

      const double lambda = step.lambda;
      if (choice.direction.kind == DirectionKind::fw) {
        alpha = (1.0 - lambda) * alpha + lambda * choice.toward_weights;
      } else {
        alpha *= 1.0 + lambda;
        alpha[static_cast<Eigen::Index>(*choice.away_index)] -= lambda;
      }
      alpha = (alpha.array() <= 1e-12).select(0.0, alpha);
      x = x + lambda * d;

      Vector recon = Vector::Zero(x.size());
      for (std::size_t a = 0; a < V.size(); ++a) recon += alpha[static_cast<Eigen::Index>(a)] * V[a];
      const double drift = (recon - x).norm();
      if (drift > 1e-6)
        throw ConvergenceFailure("run_afw: decomposition drifted from the iterate by " +
                                 std::to_string(drift));
      run.stamp(rec);
    }
  } catch (const Error& e) {
    return run.finish(RunStatus::error, x, measure, e.what());
  }
}

SolverTrace run_afw(const MultiobjectiveProblem& prob, const VertexSet& V, std::size_t start,
                    const SolverConfig& cfg) {
  if (start >= V.size()) throw PreconditionError("run_afw: start vertex out of range");
  Vector w = Vector::Zero(static_cast<Eigen::Index>(V.size()));
  w[static_cast<Eigen::Index>(start)] = 1.0;
  return run_afw(prob, V, w, cfg);
}

SolverTrace run_pg(const MultiobjectiveProblem& prob, const Vector& x0, const SolverConfig& cfg) {
  cfg.validate();
  check_start(prob, x0, "run_pg");
  const int n = prob.dimension();
  if (const double viol = feasibility_violation(unit_simplex(n), x0); viol > cfg.active_tol)
    throw InfeasiblePoint("run_pg: x0 is not in the unit simplex (violation " +
                          std::to_string(viol) + ")");

  RunState run(SolverId::pg, prob);
  Vector x = x0;
  double measure = std::numeric_limits<double>::quiet_NaN();
  try {
    for (int k = 0;; ++k) {
      const Matrix J = prob.jacobian(x);
      const PgSubproblemResult sub = pg_direction(J, x, cfg.pg_inner_tol, cfg.pg_max_inner);
      const Vector d = sub.point - x;
      measure = 0.5 * d.squaredNorm();
      if (measure < cfg.eps) return run.finish(RunStatus::converged, x, measure);
      if (k == cfg.max_iter) return run.finish(RunStatus::iter_cap, x, measure);

      const double slope = (J * d).maxCoeff();
      if (!(slope < 0.0))
        throw ConvergenceFailure("PG point is not a descent direction (inner gap " +
                                 std::to_string(sub.gap) + ")");
      const double lambda = armijo_step(prob, x, d);

      IterateRecord& rec = run.begin_record(k, x);
      rec.kind = DirectionKind::pg;
      rec.stop_measure = measure;
      rec.lambda = lambda;
      rec.lambda_max = 1.0;
      rec.step_class = classify_step(lambda, 1.0);
      rec.slope = slope;
      rec.dir_norm_sq = d.squaredNorm();
      rec.direction = d;
      rec.backtracks = static_cast<int>(std::lround(std::log(lambda) / std::log(0.5)));
      x = x + lambda * d;
      run.stamp(rec);
    }
  } catch (const Error& e) {
    return run.finish(RunStatus::error, x, measure, e.what());
  }
}

}  // namespace mofw
