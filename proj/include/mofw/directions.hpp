#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "mofw/geometry.hpp"
#include "mofw/problems.hpp"

namespace mofw {

enum class DirectionKind { fw, pairwise, away, pg };

const char* to_string(DirectionKind k);

/// A search direction together with the subproblem value that produced it.
///
/// fw:       dir = toward - x, theta = min_{u in P} max_j <g_j, u - x>.
/// pairwise: dir = toward - away, theta = min_{u,v} max_j <g_j, u - v>.
/// away:     dir = x - away.
/// pg:       toward = projected-gradient point, theta = its subproblem value.
struct DirectionResult {
  DirectionKind kind = DirectionKind::fw;
  Vector dir;
  double theta = 0.0;
  Vector toward;
  std::optional<Vector> away;
};

/// Frank-Wolfe subproblem as the epigraph LP over (u, t):
///   min t  s.t.  g_j.u - t <= g_j.x,  A u <= b,  C u = d,  t free.
/// `jac` holds the gradients g_j as rows. Throws LpFailure when the LP is
/// infeasible (corrupt polytope) or unbounded (P is not bounded).
DirectionResult fw_direction(const Matrix& jac, const Polytope& P, const Vector& x,
                             double tol = kActiveTolerance);
DirectionResult fw_direction(const MultiobjectiveProblem& prob, const Polytope& P,
                             const Vector& x, double tol = kActiveTolerance);

/// Decomposition-invariant pairwise subproblem as the LP over (u, v, t):
///   min t  s.t.  g_j.(u - v) <= t,  A u <= b,  C u = d,  A v <= b,  C v = d,
///                a_i.v = b_i  for every row i tight at x.
/// The away point v is confined to the minimal face containing x, so every
/// row tight at x stays satisfied along u - v.
DirectionResult pairwise_direction(const Matrix& jac, const Polytope& P, const Vector& x,
                                   double tol = kActiveTolerance);
DirectionResult pairwise_direction(const MultiobjectiveProblem& prob, const Polytope& P,
                                   const Vector& x, double tol = kActiveTolerance);

/// Away-step choice over an explicit convex decomposition x = sum_a w_a V_a.
struct AwayStepChoice {
  DirectionResult direction;
  double lambda_max = 1.0;
  double theta_fw = 0.0;    // toward gap max_j <g_j, s - x>
  double theta_away = 0.0;  // max_j <g_j, x - v>
  /// Barycentric weights of the toward point over V (FW branch update).
  Vector toward_weights;
  /// Index of the away atom in V, if any atom is active.
  std::optional<std::size_t> away_index;
};

/// Toward point s solves the FW subproblem over conv(V) (an LP in barycentric
/// weights; for m = 1 it lands on the best vertex). The away atom maximizes
/// min_j <g_j, a - x> over active atoms. The FW branch wins ties.
AwayStepChoice afw_direction(const Matrix& jac, const VertexSet& V, std::span<const double> active,
                             const Vector& x);

struct PgSubproblemResult {
  Vector point;
  /// max_j <g_j, point - x> + |point - x|^2 / 2.
  double value = 0.0;
  /// Primal value minus the best dual bound.
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline constexpr double kPgInnerTolerance = 1e-8;
inline constexpr int kPgInnerIterations = 500;

/// min_{u in simplex} max_j <g_j, u - x> + |u - x|^2 / 2 by projected gradient
/// ascent on the dual weights w over the m-simplex, with
/// u(w) = project_simplex(x - J^T w) and step 1 / (1 + |J|_2^2). Stops once the
/// duality gap is <= inner_tol; when the iteration cap is hit first the best
/// point found is returned with converged = false and the achieved gap.
PgSubproblemResult pg_direction(const Matrix& jac, const Vector& x,
                                double inner_tol = kPgInnerTolerance,
                                int max_inner = kPgInnerIterations);

}  // namespace mofw
