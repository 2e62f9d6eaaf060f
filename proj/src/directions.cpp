#include "mofw/directions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mofw/error.hpp"
#include "mofw/lp.hpp"

namespace mofw {

const char* to_string(DirectionKind k) {
  switch (k) {
    case DirectionKind::fw: return "fw";
    case DirectionKind::pairwise: return "pairwise";
    case DirectionKind::away: return "away";
    case DirectionKind::pg: return "pg";
  }
  return "unknown";
}

namespace {

void check_jacobian(const Matrix& jac, Eigen::Index n, const char* who) {
  if (jac.cols() != n || jac.rows() < 1)
    throw DimensionError(std::string(who) + ": jacobian is " + std::to_string(jac.rows()) + "x" +
                         std::to_string(jac.cols()) + ", expected m x " + std::to_string(n));
}

Vector solve_or_throw(const lp::LpProblem& prob, const char* who) {
  const lp::LpSolution sol = lp::solve_lp(prob);
  switch (sol.status) {
    case lp::LpStatus::optimal: return sol.z;
    case lp::LpStatus::infeasible:
      throw LpFailure(std::string(who) + ": subproblem LP infeasible (corrupt polytope?)");
    case lp::LpStatus::unbounded:
      throw LpFailure(std::string(who) + ": subproblem LP unbounded (polytope not bounded)");
    case lp::LpStatus::pivot_limit:
      throw LpFailure(std::string(who) + ": subproblem LP exceeded its pivot budget");
  }
  throw LpFailure(std::string(who) + ": unknown LP status");
}

}  // namespace

DirectionResult fw_direction(const Matrix& jac, const Polytope& P, const Vector& x, double tol) {
  const int n = P.dimension();
  check_jacobian(jac, n, "fw_direction");
  if (const double viol = feasibility_violation(P, x); viol > tol)
    throw InfeasiblePoint("fw_direction: point violates the polytope by " + std::to_string(viol));
  const auto m = jac.rows();
  const auto m1 = P.num_inequalities();
  const auto m2 = P.num_equalities();

  lp::LpProblem prob;
  prob.objective = Vector::Unit(n + 1, n);
  prob.ineq_lhs = Matrix::Zero(m + m1, n + 1);
  prob.ineq_rhs.resize(m + m1);
  prob.ineq_lhs.topLeftCorner(m, n) = jac;
  prob.ineq_lhs.block(0, n, m, 1).setConstant(-1.0);
  prob.ineq_rhs.head(m) = jac * x;
  prob.ineq_lhs.bottomLeftCorner(m1, n) = P.A;
  prob.ineq_rhs.tail(m1) = P.b;
  prob.eq_lhs = Matrix::Zero(m2, n + 1);
  prob.eq_lhs.leftCols(n) = P.C;
  prob.eq_rhs = P.d;
  prob.free_vars.assign(n + 1, true);

  const Vector z = solve_or_throw(prob, "fw_direction");
  DirectionResult out;
  out.kind = DirectionKind::fw;
  out.toward = z.head(n);
  out.dir = out.toward - x;
  out.theta = (jac * out.dir).maxCoeff();
  return out;
}

DirectionResult fw_direction(const MultiobjectiveProblem& prob, const Polytope& P,
                             const Vector& x, double tol) {
  return fw_direction(prob.jacobian(x), P, x, tol);
}

DirectionResult pairwise_direction(const Matrix& jac, const Polytope& P, const Vector& x,
                                   double tol) {
  const int n = P.dimension();
  check_jacobian(jac, n, "pairwise_direction");
  const TightSet tight = tight_set(P, x, tol);
  const auto m = jac.rows();
  const int m1 = P.num_inequalities();
  const auto m2 = P.num_equalities();
  const auto nt = static_cast<Eigen::Index>(tight.indices.size());
  const Eigen::Index free_rows = m1 - nt;

  // Columns: u (n), v (n), t (1).
  lp::LpProblem prob;
  prob.objective = Vector::Unit(2 * n + 1, 2 * n);
  prob.ineq_lhs = Matrix::Zero(m + m1 + free_rows, 2 * n + 1);
  prob.ineq_rhs = Vector::Zero(m + m1 + free_rows);
  prob.ineq_lhs.block(0, 0, m, n) = jac;
  prob.ineq_lhs.block(0, n, m, n) = -jac;
  prob.ineq_lhs.block(0, 2 * n, m, 1).setConstant(-1.0);
  prob.ineq_lhs.block(m, 0, m1, n) = P.A;
  prob.ineq_rhs.segment(m, m1) = P.b;

  prob.eq_lhs = Matrix::Zero(2 * m2 + nt, 2 * n + 1);
  prob.eq_rhs = Vector::Zero(2 * m2 + nt);
  prob.eq_lhs.block(0, 0, m2, n) = P.C;
  prob.eq_rhs.head(m2) = P.d;
  prob.eq_lhs.block(m2, n, m2, n) = P.C;
  prob.eq_rhs.segment(m2, m2) = P.d;

  Eigen::Index ineq_row = m + m1;
  Eigen::Index eq_row = 2 * m2;
  for (int i = 0; i < m1; ++i) {
    if (tight.contains(i)) {
      prob.eq_lhs.block(eq_row, n, 1, n) = P.A.row(i);
      prob.eq_rhs[eq_row++] = P.b[i];
    } else {
      prob.ineq_lhs.block(ineq_row, n, 1, n) = P.A.row(i);
      prob.ineq_rhs[ineq_row++] = P.b[i];
    }
  }
  prob.free_vars.assign(2 * n + 1, true);

  const Vector z = solve_or_throw(prob, "pairwise_direction");
  DirectionResult out;
  out.kind = DirectionKind::pairwise;
  out.toward = z.head(n);
  out.away = z.segment(n, n);
  out.dir = out.toward - *out.away;
  out.theta = (jac * out.dir).maxCoeff();
  return out;
}

DirectionResult pairwise_direction(const MultiobjectiveProblem& prob, const Polytope& P,
                                   const Vector& x, double tol) {
  return pairwise_direction(prob.jacobian(x), P, x, tol);
}

AwayStepChoice afw_direction(const Matrix& jac, const VertexSet& V, std::span<const double> active,
                             const Vector& x) {
  const std::size_t N = V.size();
  if (N == 0) throw PreconditionError("afw_direction: empty vertex set");
  if (active.size() != N)
    throw DimensionError("afw_direction: one weight per vertex required");
  const auto n = x.size();
  check_jacobian(jac, n, "afw_direction");

  double total = 0.0;
  Vector recon = Vector::Zero(n);
  bool any_active = false;
  for (std::size_t a = 0; a < N; ++a) {
    if (active[a] < -1e-12) throw PreconditionError("afw_direction: negative weight");
    total += active[a];
    if (active[a] > 0.0) {
      recon += active[a] * V[a];
      any_active = true;
    }
  }
  if (!any_active) throw PreconditionError("afw_direction: empty active set");
  if (std::abs(total - 1.0) > 1e-8)
    throw PreconditionError("afw_direction: weights sum to " + std::to_string(total));
  if ((recon - x).norm() > 1e-8 * (1.0 + x.norm()))
    throw PreconditionError("afw_direction: x does not match its decomposition");

  const auto m = jac.rows();
  const auto NN = static_cast<Eigen::Index>(N);
  // Scores: S(j, a) = <g_j, V_a - x>.
  Matrix S(m, NN);
  for (Eigen::Index a = 0; a < NN; ++a) S.col(a) = jac * (V[a] - x);

  lp::LpProblem prob;
  prob.objective = Vector::Unit(NN + 1, NN);
  prob.ineq_lhs.resize(m, NN + 1);
  prob.ineq_lhs.leftCols(NN) = S;
  prob.ineq_lhs.col(NN).setConstant(-1.0);
  prob.ineq_rhs = Vector::Zero(m);
  prob.eq_lhs = Matrix::Zero(1, NN + 1);
  prob.eq_lhs.leftCols(NN).setOnes();
  prob.eq_rhs = Vector::Ones(1);
  prob.free_vars.assign(NN + 1, false);
  prob.free_vars[NN] = true;
  const Vector z = solve_or_throw(prob, "afw_direction");

  AwayStepChoice out;
  out.toward_weights = z.head(NN).cwiseMax(0.0);
  out.toward_weights /= out.toward_weights.sum();
  Vector s = Vector::Zero(n);
  for (Eigen::Index a = 0; a < NN; ++a)
    if (out.toward_weights[a] > 0.0) s += out.toward_weights[a] * V[a];
  out.theta_fw = (jac * (s - x)).maxCoeff();

  std::optional<std::size_t> away;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < N; ++a) {
    if (active[a] <= 0.0) continue;
    const double score = S.col(static_cast<Eigen::Index>(a)).minCoeff();
    if (score > best) {
      best = score;
      away = a;
    }
  }
  out.away_index = away;
  out.theta_away = (jac * (x - V[*away])).maxCoeff();

  const double w_away = active[*away];
  const bool away_possible = w_away < 1.0 - 1e-12;
  if (out.theta_fw <= out.theta_away || !away_possible) {
    out.direction.kind = DirectionKind::fw;
    out.direction.toward = s;
    out.direction.dir = s - x;
    out.direction.theta = out.theta_fw;
    out.lambda_max = 1.0;
  } else {
    out.direction.kind = DirectionKind::away;
    out.direction.toward = s;
    out.direction.away = V[*away];
    out.direction.dir = x - V[*away];
    out.direction.theta = out.theta_away;
    out.lambda_max = w_away / (1.0 - w_away);
  }
  return out;
}

PgSubproblemResult pg_direction(const Matrix& jac, const Vector& x, double inner_tol,
                                int max_inner) {
  check_jacobian(jac, x.size(), "pg_direction");
  const auto m = jac.rows();
  const double spectral = jac.rows() == 1 ? jac.norm()
                                          : Eigen::JacobiSVD<Matrix>(jac).singularValues()[0];
  const double step = 1.0 / (1.0 + spectral * spectral);

  Vector w = Vector::Constant(m, 1.0 / static_cast<double>(m));
  PgSubproblemResult best;
  best.value = std::numeric_limits<double>::infinity();
  double best_dual = -std::numeric_limits<double>::infinity();
  for (int it = 0; it <= max_inner; ++it) {
    const Vector u = project_simplex(x - jac.transpose() * w);
    const Vector delta = u - x;
    const Vector slopes = jac * delta;
    const double prox = 0.5 * delta.squaredNorm();
    const double primal = slopes.maxCoeff() + prox;
    const double dual = w.dot(slopes) + prox;
    best_dual = std::max(best_dual, dual);
    if (primal < best.value) {
      best.value = primal;
      best.point = u;
    }
    best.iterations = it;
    best.gap = std::max(0.0, best.value - best_dual);
    if (best.gap <= inner_tol) {
      best.converged = true;
      return best;
    }
    if (it == max_inner) break;
    // dphi/dw_j = <g_j, u(w) - x>.
    w = m == 1 ? w : project_simplex(w + step * slopes);
  }
  return best;
}

}  // namespace mofw
