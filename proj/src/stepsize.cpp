#include "mofw/stepsize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <string>

#include "mofw/error.hpp"

namespace mofw {

void StepSizeState::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw PreconditionError("step size: eta must lie in (0, 1)");
  if (!(tau > 1.0)) throw PreconditionError("step size: tau must exceed 1");
  if (!(L_est > 0.0)) throw PreconditionError("step size: L_est must be positive");
}

namespace {

double max_change(const MultiobjectiveProblem& prob, const Vector& x, const Vector& d,
                  double lambda) {
  const Vector y = x + lambda * d;
  return prob.difference(x, y).maxCoeff();
}

}  // namespace

bool decrease_model_holds(const MultiobjectiveProblem& prob, const Vector& x, const Vector& d,
                          double slope, double lambda, double L) {
  const double lhs = max_change(prob, x, d, lambda);
  const double rhs = lambda * slope + 0.5 * lambda * lambda * L * d.squaredNorm();
  return std::isfinite(lhs) && lhs < rhs;
}

StepResult adaptive_step(const MultiobjectiveProblem& prob, const Vector& x, const Vector& d,
                         double slope, double lambda_max, const StepSizeState& state,
                         int max_backtracks) {
  state.validate();
  if (!(slope < 0.0)) throw PreconditionError("adaptive_step: direction is not a descent direction");
  const double dd = d.squaredNorm();
  if (!(dd > 0.0)) throw PreconditionError("adaptive_step: zero direction");
  if (!(lambda_max > 0.0)) throw PreconditionError("adaptive_step: lambda_max must be positive");

  StepResult out;
  double M = state.eta * state.L_est;
  for (int b = 0;; ++b) {
    const double lambda = std::min(lambda_max, -slope / (M * dd));
    if (decrease_model_holds(prob, x, d, slope, lambda, M)) {
      out.lambda = lambda;
      out.L_out = M;
      out.backtracks = b;
      return out;
    }
    if (b == max_backtracks)
      throw ConvergenceFailure("adaptive_step: no sufficient decrease after " +
                               std::to_string(max_backtracks) + " backtracks");
    M *= state.tau;
  }
}

double exact_line_search(const MultiobjectiveProblem& prob, const Vector& x, const Vector& d,
                         double lambda_max) {
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max))
    throw PreconditionError("exact_line_search: lambda_max must be positive and finite");

  // One-sided slopes of phi(l) = max_j [f_j(x + l d) - f_j(x)]: the largest
  // (right) or smallest (left) <grad f_j, d> over the objectives attaining the max.
  auto slopes = [&](double lambda) {
    const Vector y = x + lambda * d;
    const Vector change = prob.difference(x, y);
    const Vector g = prob.jacobian(y) * d;
    const double top = change.maxCoeff();
    const double tol = 1e-14 * std::max(1.0, std::abs(top));
    double right = -std::numeric_limits<double>::infinity();
    double left = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < change.size(); ++j) {
      if (change[j] < top - tol) continue;
      right = std::max(right, g[j]);
      left = std::min(left, g[j]);
    }
    return std::pair{left, right};
  };

  if (slopes(0.0).second >= 0.0) return 0.0;
  if (slopes(lambda_max).first <= 0.0) return lambda_max;
  double lo = 0.0;
  double hi = lambda_max;
  for (int it = 0; it < kLineSearchBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (slopes(mid).second >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double armijo_step(const MultiobjectiveProblem& prob, const Vector& x, const Vector& d,
                   const ArmijoOptions& opts) {
  const double slope = (prob.jacobian(x) * d).maxCoeff();
  if (!(slope < 0.0)) throw PreconditionError("armijo_step: direction is not a descent direction");
  if (!(opts.beta > 0.0 && opts.beta < 1.0) || opts.c < 0.0 || !(opts.lambda0 > 0.0))
    throw PreconditionError("armijo_step: invalid parameters");
  double lambda = opts.lambda0;
  for (int h = 0; h <= opts.max_halvings; ++h) {
    const double change = max_change(prob, x, d, lambda);
    if (std::isfinite(change) && change <= opts.c * lambda * slope) return lambda;
    lambda *= opts.beta;
  }
  throw ConvergenceFailure("armijo_step: no acceptable step after " +
                           std::to_string(opts.max_halvings) + " reductions");
}

}  // namespace mofw
