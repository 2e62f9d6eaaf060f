#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mofw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kActiveTolerance = 1e-9;
inline constexpr double kRatioPivotGuard = 1e-12;
inline constexpr double kVertexDedupTolerance = 1e-8;

/// Polytope in H-representation: { x : A x <= b, C x = d }.
///
/// Row i of `A` is the inequality a_i . x <= b_i; row j of `C` the equality
/// c_j . x = d_j. The region is assumed nonempty; solvers additionally
/// assume it is bounded.
struct Polytope {
  Matrix A;
  Vector b;
  Matrix C;
  Vector d;
  std::optional<double> diameter_hint;

  Polytope() = default;
  Polytope(Matrix A, Vector b, Matrix C, Vector d,
           std::optional<double> diameter_hint = std::nullopt);

  int dimension() const { return static_cast<int>(A.cols()); }
  int num_inequalities() const { return static_cast<int>(A.rows()); }
  int num_equalities() const { return static_cast<int>(C.rows()); }

  /// Throws DimensionError unless all row/column counts agree.
  void validate() const;
};

/// Finite vertex list (V-representation).
struct VertexSet {
  std::vector<Vector> vertices;

  std::size_t size() const { return vertices.size(); }
  const Vector& operator[](std::size_t i) const { return vertices[i]; }
};

/// Inequality rows active at a point, 0-based.
struct TightSet {
  std::vector<int> indices;
  double tolerance = kActiveTolerance;

  bool contains(int i) const;
  bool empty() const { return indices.empty(); }
};

/// Result of the feasible-step ratio test. Either a finite bound or unbounded
/// (no inequality row tightens along the direction).
class StepLimit {
 public:
  static StepLimit finite(double value) { return StepLimit(value); }
  static StepLimit unbounded() { return StepLimit(); }

  bool bounded() const { return value_.has_value(); }
  /// Precondition: bounded().
  double value() const { return *value_; }
  /// Finite bound, or `cap` when unbounded.
  double value_or(double cap) const { return value_.value_or(cap); }

 private:
  StepLimit() = default;
  explicit StepLimit(double v) : value_(v) {}
  std::optional<double> value_;
};

/// { x in R^n : x >= 0, sum x = 1 }, encoded as -x_i <= 0 and e.x = 1.
Polytope unit_simplex(int n);

/// { x : lower <= x <= upper } with rows x_i <= upper_i followed by -x_i <= -lower_i.
Polytope box(const Vector& lower, const Vector& upper);

/// max(0, max_i(a_i.x - b_i), max_j |c_j.x - d_j|).
double feasibility_violation(const Polytope& P, const Vector& x);

/// Inequality rows with |b_i - a_i.x| <= tol. Throws InfeasiblePoint if x is
/// farther than tol from P.
TightSet tight_set(const Polytope& P, const Vector& x, double tol = kActiveTolerance);

/// Largest lambda with x + lambda*dir in P.
///
/// Rows with a_i.dir <= 1e-12 never bind. Throws InfeasiblePoint if x is
/// outside P by more than `tol`, and PreconditionError if C.dir is nonzero
/// beyond `tol * (1 + |dir|)`.
StepLimit max_feasible_step(const Polytope& P, const Vector& x, const Vector& dir,
                            double tol = kActiveTolerance);

/// Brute-force enumeration of basic feasible solutions. Every equality row is
/// kept active and n - rank(C) inequality rows are chosen in all possible
/// ways. Throws PreconditionError when the number of selections exceeds 1e6.
VertexSet enumerate_vertices(const Polytope& P, double tol = kActiveTolerance);

/// Euclidean projection onto the unit simplex (sort-and-threshold), renormalized
/// so the coordinates sum to one.
Vector project_simplex(const Vector& y);

/// Text format: `n m1 m2`, then m1 rows `a_i b_i`, then m2 rows `c_j d_j`.
/// `#` starts a comment that runs to end of line.
Polytope read_polytope(std::istream& in);
Polytope read_polytope_file(const std::string& path);
void write_polytope(std::ostream& out, const Polytope& P);

/// Every row of P is x_i >= 0 (as -e_i.x <= 0) plus the single row e.x = 1.
bool is_unit_simplex(const Polytope& P);

}  // namespace mofw
