#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mofw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// F(x) = (f_1(x), ..., f_m(x)) with gradients, a common smoothness bound L,
/// and an optional common strong-convexity constant mu.
///
/// The public members validate dimensions and forward to the protected hooks.
class MultiobjectiveProblem {
 public:
  virtual ~MultiobjectiveProblem() = default;

  virtual int dimension() const = 0;
  virtual int num_objectives() const = 0;
  /// L >= max_j L_j.
  virtual double smoothness() const = 0;
  virtual std::optional<double> strong_convexity() const { return std::nullopt; }

  Vector evaluate(const Vector& x) const;
  /// m x n; row j is grad f_j(x).
  Matrix jacobian(const Vector& x) const;
  /// F(y) - F(x). Subclasses with a closed form avoid the cancellation of
  /// evaluating both sides separately.
  Vector difference(const Vector& x, const Vector& y) const;

 protected:
  virtual Vector do_evaluate(const Vector& x) const = 0;
  virtual Matrix do_jacobian(const Vector& x) const = 0;
  virtual Vector do_difference(const Vector& x, const Vector& y) const {
    return do_evaluate(y) - do_evaluate(x);
  }

 private:
  void check(const Vector& x, const char* who) const;
};

/// f_j(x) = 1/2 |G x - b_j|^2 data for one randomized instance.
struct QuadraticInstance {
  int p = 0;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  Matrix G;                     // p x n
  std::vector<Vector> targets;  // m vectors of length p
};

/// Uniform [0,1) entries drawn from std::mt19937_64 seeded with `seed`.
///
/// Each 64-bit output x becomes (x >> 11) * 2^-53. Draw order: the n columns
/// of G one after another (p entries each, top to bottom), then b_1, ..., b_m.
/// The stream is fully specified by the C++ standard, so instances are
/// reproducible on any platform or in any language with an MT19937-64.
QuadraticInstance make_quadratic(int p, int n, int m, std::uint64_t seed);

/// lambda_max(G^T G) by power iteration, stopping once the residual
/// |H v - rho v| <= 1e-8 rho. Throws ConvergenceFailure after `max_iter` rounds.
double smoothness_bound(const QuadraticInstance& inst, int max_iter = 100000);

class QuadraticProblem final : public MultiobjectiveProblem {
 public:
  explicit QuadraticProblem(QuadraticInstance inst);

  int dimension() const override { return inst_.n; }
  int num_objectives() const override { return inst_.m; }
  double smoothness() const override { return smoothness_; }
  /// lambda_min(G^T G) when G has full column rank.
  std::optional<double> strong_convexity() const override { return mu_; }

  const QuadraticInstance& instance() const { return inst_; }

 protected:
  Vector do_evaluate(const Vector& x) const override;
  Matrix do_jacobian(const Vector& x) const override;
  Vector do_difference(const Vector& x, const Vector& y) const override;

 private:
  QuadraticInstance inst_;
  Matrix targets_;  // p x m, column j = b_j
  double smoothness_ = 0.0;
  std::optional<double> mu_;
};

/// sigma(x, z) = min_j [f_j(x) - f_j(z)].
double gap_sigma(const MultiobjectiveProblem& prob, const Vector& x, const Vector& z);

/// Header `p n m seed`, then p rows of G, then m target rows of length p.
void write_instance(std::ostream& out, const QuadraticInstance& inst);
QuadraticInstance read_instance(std::istream& in);
QuadraticInstance read_instance_file(const std::string& path);

}  // namespace mofw
