#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <sstream>

#include "mofw/error.hpp"
#include "mofw/geometry.hpp"
#include "mofw/lp.hpp"
#include "support.hpp"

namespace mofw {
namespace {

using lp::LpProblem;
using lp::LpStatus;
using lp::solve_lp;

Matrix rows(int r, int c, std::initializer_list<double> v) {
  Matrix M(r, c);
  auto it = v.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = *it++;
  return M;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(SolveLp, SumConstraint) {
  LpProblem p;
  p.objective = vec({1, 1});
  p.eq_lhs = rows(1, 2, {1, 1});
  p.eq_rhs = vec({1});
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.value, 1.0, 1e-12);
  EXPECT_NEAR(sol.z.sum(), 1.0, 1e-12);
  EXPECT_GE(sol.z.minCoeff(), -1e-12);
}

TEST(SolveLp, UpperBoundedVariable) {
  LpProblem p;
  p.objective = vec({-1});
  p.ineq_lhs = rows(1, 1, {1});
  p.ineq_rhs = vec({1});
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.value, -1.0, 1e-12);
  EXPECT_NEAR(sol.z[0], 1.0, 1e-12);
}

TEST(SolveLp, LinearObjectiveOverSimplexPicksBestVertex) {
  const Vector c = vec({3, 1, 2});
  const auto sol = solve_lp(testing::polytope_lp(unit_simplex(3), c));
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.value, 1.0, 1e-12);
  EXPECT_TRUE(sol.z.isApprox(Vector::Unit(3, 1), 1e-12));
}

TEST(SolveLp, InfeasibleSystem) {
  LpProblem p;
  p.objective = vec({1});
  p.ineq_lhs = rows(1, 1, {1});
  p.ineq_rhs = vec({-1});
  EXPECT_EQ(solve_lp(p).status, LpStatus::infeasible);

  // Same system with the sign constraint written as a row and x free.
  LpProblem q;
  q.objective = vec({1});
  q.ineq_lhs = rows(2, 1, {1, -1});
  q.ineq_rhs = vec({-1, 0});
  q.free_vars = {true};
  EXPECT_EQ(solve_lp(q).status, LpStatus::infeasible);
}

TEST(SolveLp, InfeasibleNonSingletonRows) {
  LpProblem p;
  p.objective = vec({0, 0});
  p.ineq_lhs = rows(1, 2, {1, 1});
  p.ineq_rhs = vec({-1});
  EXPECT_EQ(solve_lp(p).status, LpStatus::infeasible);
}

TEST(SolveLp, Unbounded) {
  LpProblem p;
  p.objective = vec({-1, 0});
  p.ineq_lhs = rows(1, 2, {-1, 1});
  p.ineq_rhs = vec({0});
  EXPECT_EQ(solve_lp(p).status, LpStatus::unbounded);

  LpProblem q;
  q.objective = vec({1});
  q.free_vars = {true};
  EXPECT_EQ(solve_lp(q).status, LpStatus::unbounded);
}

// Beale's example cycles under the textbook Dantzig rule without an
// anti-cycling safeguard.
TEST(SolveLp, DegenerateCyclingExample) {
  LpProblem p;
  p.objective = vec({-0.75, 20, -0.5, 6});
  p.ineq_lhs = rows(3, 4, {0.25, -8, -1, 9, 0.5, -12, -0.5, 3, 0, 0, 1, 0});
  p.ineq_rhs = vec({0, 0, 1});
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.value, -1.25, 1e-10);
}

TEST(SolveLp, RedundantEqualities) {
  LpProblem p;
  p.objective = vec({1, 2, 3});
  p.eq_lhs = rows(2, 3, {1, 1, 1, 2, 2, 2});
  p.eq_rhs = vec({1, 2});
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.value, 1.0, 1e-12);
}

TEST(SolveLp, FixedAndShiftedVariables) {
  // x0 = 2 by a singleton equality, x1 >= -3 by a singleton inequality,
  // x0 + x1 <= 1 couples them.
  LpProblem p;
  p.objective = vec({1, 1});
  p.ineq_lhs = rows(2, 2, {0, -1, 1, 1});
  p.ineq_rhs = vec({3, 1});
  p.eq_lhs = rows(1, 2, {1, 0});
  p.eq_rhs = vec({2});
  p.free_vars = {true, true};
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.z[0], 2.0, 1e-12);
  EXPECT_NEAR(sol.z[1], -3.0, 1e-12);
  EXPECT_NEAR(sol.value, -1.0, 1e-12);

  p.eq_rhs = vec({5});  // x0 = 5 forces x1 <= -4 < -3
  EXPECT_EQ(solve_lp(p).status, LpStatus::infeasible);
}

TEST(SolveLp, ConflictingFixedValues) {
  LpProblem p;
  p.objective = vec({1});
  p.eq_lhs = rows(2, 1, {1, 2});
  p.eq_rhs = vec({1, 3});
  EXPECT_EQ(solve_lp(p).status, LpStatus::infeasible);
}

TEST(SolveLp, PivotBudget) {
  LpProblem p = testing::polytope_lp(unit_simplex(6), vec({6, 5, 4, 3, 2, 1}));
  lp::LpOptions opts;
  opts.max_pivots = 1;
  EXPECT_EQ(solve_lp(p, opts).status, LpStatus::pivot_limit);
}

TEST(SolveLp, TraceDumpsTableaux) {
  std::ostringstream log;
  lp::LpOptions opts;
  opts.trace = &log;
  LpProblem p;
  p.objective = vec({-1, -1});
  p.ineq_lhs = rows(2, 2, {1, 2, 3, 1});
  p.ineq_rhs = vec({4, 6});
  const auto sol = solve_lp(p, opts);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.value, -2.8, 1e-12);
  EXPECT_NE(log.str().find("tableau initial"), std::string::npos);
  EXPECT_NE(log.str().find("pivot"), std::string::npos);
}

TEST(SolveLp, ShapeErrors) {
  LpProblem p;
  EXPECT_THROW(solve_lp(p), DimensionError);
  p.objective = vec({1, 1});
  p.ineq_lhs = rows(1, 3, {1, 1, 1});
  p.ineq_rhs = vec({1});
  EXPECT_THROW(solve_lp(p), DimensionError);
}

TEST(SolveLp, DeterministicOutput) {
  std::mt19937_64 rng(5);
  const Polytope P = testing::random_polytope(rng, 4, 3, true);
  const auto prob = testing::polytope_lp(P, vec({0.3, -0.2, 0.1, 0.4}));
  const auto a = solve_lp(prob);
  const auto b = solve_lp(prob);
  ASSERT_EQ(a.status, LpStatus::optimal);
  EXPECT_EQ(a.z, b.z);
  EXPECT_EQ(a.iterations, b.iterations);
}

// Random bounded polytopes: the simplex optimum must equal the best vertex
// found by brute-force enumeration.
TEST(SolveLp, MatchesVertexEnumeration) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    const Polytope P = testing::random_polytope(rng, n, trial % 4, trial % 3 == 0);
    Vector c(n);
    for (int j = 0; j < n; ++j) c[j] = N(rng);
    const auto sol = solve_lp(testing::polytope_lp(P, c));
    ASSERT_EQ(sol.status, LpStatus::optimal) << "trial " << trial;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : testing::brute_force_vertices(P)) best = std::min(best, c.dot(v));
    EXPECT_NEAR(sol.value, best, 1e-8) << "trial " << trial;
    EXPECT_LE(feasibility_violation(P, sol.z), 1e-9);
  }
}

}  // namespace
}  // namespace mofw
