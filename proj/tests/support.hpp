#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "mofw/geometry.hpp"
#include "mofw/lp.hpp"
#include "mofw/problems.hpp"

namespace mofw::testing {

/// f_j(x) = 1/2 |x - t_j|^2, built as a quadratic instance with G = I.
inline QuadraticProblem target_problem(const std::vector<Vector>& targets) {
  QuadraticInstance inst;
  inst.n = static_cast<int>(targets.front().size());
  inst.p = inst.n;
  inst.m = static_cast<int>(targets.size());
  inst.G = Matrix::Identity(inst.n, inst.n);
  inst.targets = targets;
  return QuadraticProblem(std::move(inst));
}

/// f_j(x) = c_j . x with a nominal smoothness bound.
class LinearProblem final : public MultiobjectiveProblem {
 public:
  explicit LinearProblem(Matrix costs) : costs_(std::move(costs)) {}
  int dimension() const override { return static_cast<int>(costs_.cols()); }
  int num_objectives() const override { return static_cast<int>(costs_.rows()); }
  double smoothness() const override { return 1.0; }

 protected:
  Vector do_evaluate(const Vector& x) const override { return costs_ * x; }
  Matrix do_jacobian(const Vector&) const override { return costs_; }

 private:
  Matrix costs_;
};

/// Independent 1/2 |G x - b_j|^2.
inline Vector quadratic_values(const QuadraticInstance& inst, const Vector& x) {
  Vector f(inst.m);
  for (int j = 0; j < inst.m; ++j) {
    double s = 0.0;
    for (int r = 0; r < inst.p; ++r) {
      double gx = 0.0;
      for (int c = 0; c < inst.n; ++c) gx += inst.G(r, c) * x[c];
      s += (gx - inst.targets[j][r]) * (gx - inst.targets[j][r]);
    }
    f[j] = 0.5 * s;
  }
  return f;
}

/// Central differences of prob.evaluate.
inline Matrix finite_difference_jacobian(const MultiobjectiveProblem& prob, const Vector& x,
                                         double h) {
  Matrix J(prob.num_objectives(), prob.dimension());
  for (int i = 0; i < prob.dimension(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    J.col(i) = (prob.evaluate(xp) - prob.evaluate(xm)) / (2.0 * h);
  }
  return J;
}

/// Every basic feasible solution found by trying all n-subsets of the stacked
/// rows [A; C; -C] as active sets and solving with a full-pivot LU.
inline std::vector<Vector> brute_force_vertices(const Polytope& P, double tol = 1e-9) {
  const int n = P.dimension();
  Matrix rows(P.A.rows() + 2 * P.C.rows(), n);
  Vector rhs(rows.rows());
  rows << P.A, P.C, -P.C;
  rhs << P.b, P.d, -P.d;
  const int total = static_cast<int>(rows.rows());
  std::vector<Vector> out;
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  if (n > total) return out;
  while (true) {
    Matrix M(n, n);
    Vector r(n);
    for (int i = 0; i < n; ++i) {
      M.row(i) = rows.row(pick[i]);
      r[i] = rhs[pick[i]];
    }
    Eigen::FullPivLU<Matrix> lu(M);
    if (lu.rank() == n) {
      const Vector v = lu.solve(r);
      bool feasible = (rows * v - rhs).maxCoeff() <= tol * (1.0 + v.lpNorm<Eigen::Infinity>());
      bool fresh = true;
      for (const auto& w : out)
        if ((w - v).lpNorm<Eigen::Infinity>() <= 1e-8) fresh = false;
      if (feasible && fresh) out.push_back(v);
    }
    int k = n - 1;
    while (k >= 0 && pick[k] == total - n + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int i = k + 1; i < n; ++i) pick[i] = pick[i - 1] + 1;
  }
  return out;
}

/// Bounded random polytope in R^n: the box [-1, 1]^n, `extra` random cuts
/// a.x <= b with the origin strictly inside, and optionally one equality
/// through a random interior point.
inline Polytope random_polytope(std::mt19937_64& rng, int n, int extra, bool with_equality) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Matrix A(2 * n + extra, n);
  Vector b(2 * n + extra);
  A.topRows(n) = Matrix::Identity(n, n);
  A.middleRows(n, n) = -Matrix::Identity(n, n);
  b.head(2 * n).setOnes();
  for (int i = 0; i < extra; ++i) {
    for (int j = 0; j < n; ++j) A(2 * n + i, j) = U(rng);
    b[2 * n + i] = 0.2 + 0.8 * std::abs(U(rng));
  }
  Matrix C(0, n);
  Vector d(0);
  if (with_equality) {
    C.resize(1, n);
    for (int j = 0; j < n; ++j) C(0, j) = U(rng);
    Vector point(n);
    for (int j = 0; j < n; ++j) point[j] = 0.1 * U(rng);
    d.resize(1);
    d[0] = C.row(0).dot(point);
  }
  return Polytope(A, b, C, d);
}

/// min c.x over P as an LP with free variables.
inline lp::LpProblem polytope_lp(const Polytope& P, const Vector& c) {
  lp::LpProblem prob;
  prob.objective = c;
  prob.ineq_lhs = P.A;
  prob.ineq_rhs = P.b;
  prob.eq_lhs = P.C;
  prob.eq_rhs = P.d;
  prob.free_vars.assign(static_cast<std::size_t>(c.size()), true);
  return prob;
}

/// Uniform random point of the unit simplex (normalized exponentials).
inline Vector random_simplex_point(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> E(1.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = E(rng);
  return x / x.sum();
}

}  // namespace mofw::testing
