#pragma once

#include "mofw/problems.hpp"

namespace mofw {

/// Running smoothness estimate of the adaptive rule plus its progress factors.
struct StepSizeState {
  double L_est = 1.0;
  double eta = 0.9;  // shrink, 0 < eta < 1
  double tau = 2.0;  // growth, tau > 1

  /// Throws PreconditionError unless 0 < eta < 1 < tau and L_est > 0.
  void validate() const;
};

struct StepResult {
  double lambda = 0.0;
  double L_out = 0.0;
  int backtracks = 0;
};

inline constexpr int kMaxBacktracks = 100;

/// max_j [f_j(x + lambda d) - f_j(x)] compared with the quadratic model
/// lambda * slope + lambda^2 L |d|^2 / 2. True when the model bounds the change.
bool decrease_model_holds(const MultiobjectiveProblem& prob, const Vector& x, const Vector& d,
                          double slope, double lambda, double L);

/// Multiobjective adaptive step.
///
/// Starts from M = eta * L_est and lambda = min(lambda_max, -slope / (M |d|^2)),
/// where slope = max_j <grad f_j(x), d> < 0. While
///   max_j [f_j(x + lambda d) - f_j(x)] >= lambda * slope + lambda^2 M |d|^2 / 2
/// it sets M <- tau * M and recomputes lambda from the same formula. Returns
/// the accepted lambda and L_out = M. Throws ConvergenceFailure once
/// `max_backtracks` increases of M have not produced an accepted step.
StepResult adaptive_step(const MultiobjectiveProblem& prob, const Vector& x, const Vector& d,
                         double slope, double lambda_max, const StepSizeState& state,
                         int max_backtracks = kMaxBacktracks);

inline constexpr int kLineSearchBisections = 200;

/// Minimizes max_j [f_j(x + lambda d) - f_j(x)] over [0, lambda_max] for convex
/// f_j by bisection on the sign of its right slope, which is computed from the
/// gradients of the objectives attaining the max. Returns 0 when the profile
/// does not decrease at 0 and lambda_max when it still decreases there.
double exact_line_search(const MultiobjectiveProblem& prob, const Vector& x, const Vector& d,
                         double lambda_max);

struct ArmijoOptions {
  double beta = 0.5;
  double c = 1e-4;
  double lambda0 = 1.0;
  int max_halvings = 60;
};

/// Largest lambda0 * beta^k with max_j [f_j(x + lambda d) - f_j(x)] <= c * lambda * slope,
/// slope = max_j <grad f_j(x), d>, which must be negative.
double armijo_step(const MultiobjectiveProblem& prob, const Vector& x, const Vector& d,
                   const ArmijoOptions& opts = {});

}  // namespace mofw
