#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

namespace mofw::lp {

/// minimize c.z  s.t.  ineq_lhs z <= ineq_rhs,  eq_lhs z = eq_rhs,
/// z_j >= 0 unless free_vars[j].
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd ineq_lhs;
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq_lhs;
  Eigen::VectorXd eq_rhs;
  /// Empty means every variable is sign-restricted.
  std::vector<bool> free_vars;

  int num_vars() const { return static_cast<int>(objective.size()); }
  bool is_free(int j) const { return !free_vars.empty() && free_vars[j]; }
  /// Throws DimensionError on inconsistent shapes.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded, pivot_limit };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd z;  // valid when optimal
  double value = 0.0;
  int iterations = 0;  // pivots over both phases
};

struct LpOptions {
  /// When set, every tableau (after setup and after each pivot) is printed here.
  std::ostream* trace = nullptr;
  /// Pivot budget over both phases; 0 selects 50 * (rows + columns) + 100.
  int max_pivots = 0;
};

inline constexpr double kPivotTolerance = 1e-10;
inline constexpr double kOptimalityTolerance = 1e-9;
inline constexpr double kDegenerateStep = 1e-12;

/// Dense two-phase primal simplex.
///
/// Singleton rows are folded into bounds first: a one-variable equality fixes
/// that variable and a one-variable inequality with a negative coefficient
/// becomes a lower bound. Remaining free variables are split as
/// z = z+ - z-. Dantzig's rule is used until
/// 3 * (r1 + r2 + k) degenerate pivots have occurred within a phase, after
/// which Bland's rule takes over. The result is deterministic for a given input.
LpSolution solve_lp(const LpProblem& prob, const LpOptions& opts = {});

}  // namespace mofw::lp
