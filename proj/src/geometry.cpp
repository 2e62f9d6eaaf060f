#include "mofw/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mofw/error.hpp"
#include "text_io.hpp"

namespace mofw {

namespace detail {

std::vector<std::string> read_tokens(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) out.push_back(tok);
  }
  return out;
}

const std::string& TokenCursor::next() {
  if (pos_ >= tokens_.size()) throw ParseError(what_ + ": unexpected end of input");
  return tokens_[pos_++];
}

long long TokenCursor::next_int() {
  const std::string& tok = next();
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size()) throw ParseError(what_ + ": expected integer, got '" + tok + "'");
  return v;
}

double TokenCursor::next_double() {
  const std::string& tok = next();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size()) throw ParseError(what_ + ": expected real, got '" + tok + "'");
  return v;
}

void TokenCursor::expect_end() const {
  if (!done()) throw ParseError(what_ + ": trailing data '" + tokens_[pos_] + "'");
}

}  // namespace detail

Polytope::Polytope(Matrix A_, Vector b_, Matrix C_, Vector d_, std::optional<double> hint)
    : A(std::move(A_)), b(std::move(b_)), C(std::move(C_)), d(std::move(d_)),
      diameter_hint(hint) {
  validate();
}

void Polytope::validate() const {
  if (A.rows() != b.size())
    throw DimensionError("polytope: A has " + std::to_string(A.rows()) + " rows but b has " +
                         std::to_string(b.size()) + " entries");
  if (C.rows() != d.size())
    throw DimensionError("polytope: C has " + std::to_string(C.rows()) + " rows but d has " +
                         std::to_string(d.size()) + " entries");
  if (C.rows() > 0 && C.cols() != A.cols())
    throw DimensionError("polytope: A and C disagree on the ambient dimension");
  if (A.cols() == 0) throw DimensionError("polytope: ambient dimension must be positive");
  if (diameter_hint && !(*diameter_hint >= 0))
    throw DimensionError("polytope: diameter hint must be nonnegative");
}

bool TightSet::contains(int i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

Polytope unit_simplex(int n) {
  if (n < 1) throw DimensionError("unit_simplex: n must be >= 1");
  return Polytope(-Matrix::Identity(n, n), Vector::Zero(n), Matrix::Ones(1, n), Vector::Ones(1),
                  std::sqrt(2.0));
}

Polytope box(const Vector& lower, const Vector& upper) {
  const auto n = lower.size();
  if (upper.size() != n || n == 0) throw DimensionError("box: bound vectors must agree");
  if ((upper.array() < lower.array()).any()) throw PreconditionError("box: empty box");
  Matrix A(2 * n, n);
  A << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  Vector b(2 * n);
  b << upper, -lower;
  return Polytope(std::move(A), std::move(b), Matrix(0, n), Vector(0), (upper - lower).norm());
}

static void check_dim(const Polytope& P, const Vector& x, const char* who) {
  if (x.size() != P.dimension())
    throw DimensionError(std::string(who) + ": point has dimension " + std::to_string(x.size()) +
                         ", polytope has " + std::to_string(P.dimension()));
}

double feasibility_violation(const Polytope& P, const Vector& x) {
  check_dim(P, x, "feasibility_violation");
  double v = 0.0;
  if (P.num_inequalities() > 0) v = std::max(v, (P.A * x - P.b).maxCoeff());
  if (P.num_equalities() > 0) v = std::max(v, (P.C * x - P.d).cwiseAbs().maxCoeff());
  return v;
}

TightSet tight_set(const Polytope& P, const Vector& x, double tol) {
  const double viol = feasibility_violation(P, x);
  if (viol > tol)
    throw InfeasiblePoint("tight_set: point violates the polytope by " + std::to_string(viol));
  TightSet out;
  out.tolerance = tol;
  const Vector slack = P.b - P.A * x;
  for (int i = 0; i < P.num_inequalities(); ++i)
    if (std::abs(slack[i]) <= tol) out.indices.push_back(i);
  return out;
}

StepLimit max_feasible_step(const Polytope& P, const Vector& x, const Vector& dir, double tol) {
  check_dim(P, dir, "max_feasible_step");
  const double viol = feasibility_violation(P, x);
  if (viol > tol)
    throw InfeasiblePoint("max_feasible_step: point violates the polytope by " +
                          std::to_string(viol));
  if (P.num_equalities() > 0) {
    const double drift = (P.C * dir).cwiseAbs().maxCoeff();
    if (drift > tol * (1.0 + dir.norm()))
      throw PreconditionError("max_feasible_step: direction leaves the equality constraints (|C dir| = " +
                              std::to_string(drift) + ")");
  }
  const Vector rate = P.A * dir;
  const Vector slack = P.b - P.A * x;
  std::optional<double> best;
  for (int i = 0; i < P.num_inequalities(); ++i) {
    if (rate[i] <= kRatioPivotGuard) continue;
    const double step = std::max(0.0, slack[i]) / rate[i];
    if (!best || step < *best) best = step;
  }
  return best ? StepLimit::finite(*best) : StepLimit::unbounded();
}

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Advances `idx` (strictly increasing, values < n) to the next k-combination.
bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace

VertexSet enumerate_vertices(const Polytope& P, double tol) {
  P.validate();
  const int n = P.dimension();
  const int m1 = P.num_inequalities();
  const int m2 = P.num_equalities();
  int rank_c = 0;
  if (m2 > 0) {
    Eigen::FullPivLU<Matrix> lu(P.C);
    lu.setThreshold(1e-10);
    rank_c = static_cast<int>(lu.rank());
  }
  const int k = n - rank_c;
  if (binomial(m1, k) > 1e6)
    throw PreconditionError("enumerate_vertices: C(" + std::to_string(m1) + ", " +
                            std::to_string(k) + ") selections exceed the 1e6 guard");

  VertexSet out;
  if (k > m1) return out;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  Matrix M(m2 + k, n);
  Vector rhs(m2 + k);
  if (m2 > 0) {
    M.topRows(m2) = P.C;
    rhs.head(m2) = P.d;
  }
  do {
    for (int r = 0; r < k; ++r) {
      M.row(m2 + r) = P.A.row(idx[r]);
      rhs[m2 + r] = P.b[idx[r]];
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(M);
    qr.setThreshold(1e-10);
    if (qr.rank() < n) continue;
    const Vector z = qr.solve(rhs);
    if ((M * z - rhs).cwiseAbs().maxCoeff() > tol * (1.0 + rhs.cwiseAbs().maxCoeff())) continue;
    if (feasibility_violation(P, z) > tol) continue;
    const bool dup = std::any_of(out.vertices.begin(), out.vertices.end(), [&](const Vector& v) {
      return (v - z).norm() <= kVertexDedupTolerance;
    });
    if (!dup) out.vertices.push_back(z);
  } while (k > 0 && next_combination(idx, m1));
  return out;
}

Vector project_simplex(const Vector& y) {
  const auto n = y.size();
  if (n < 1) throw DimensionError("project_simplex: empty vector");
  std::vector<double> s(y.data(), y.data() + n);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumsum += s[i];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (s[i] - t > 0.0) tau = t;
  }
  Vector u = (y.array() - tau).cwiseMax(0.0);
  const double total = u.sum();
  if (total > 0.0) {
    u /= total;
  } else {
    // Only reachable through overflow or NaN input; fall back to the barycenter.
    u.setConstant(1.0 / static_cast<double>(n));
  }
  return u;
}

Polytope read_polytope(std::istream& in) {
  detail::TokenCursor cur(detail::read_tokens(in), "polytope");
  const long long n = cur.next_int();
  const long long m1 = cur.next_int();
  const long long m2 = cur.next_int();
  if (n < 1 || m1 < 0 || m2 < 0) throw ParseError("polytope: invalid header");
  Matrix A(m1, n), C(m2, n);
  Vector b(m1), d(m2);
  for (long long i = 0; i < m1; ++i) {
    for (long long j = 0; j < n; ++j) A(i, j) = cur.next_double();
    b[i] = cur.next_double();
  }
  for (long long i = 0; i < m2; ++i) {
    for (long long j = 0; j < n; ++j) C(i, j) = cur.next_double();
    d[i] = cur.next_double();
  }
  cur.expect_end();
  return Polytope(std::move(A), std::move(b), std::move(C), std::move(d));
}

Polytope read_polytope_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open polytope file '" + path + "'");
  try {
    return read_polytope(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_polytope(std::ostream& out, const Polytope& P) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << P.dimension() << ' ' << P.num_inequalities() << ' ' << P.num_equalities() << '\n';
  auto row = [&](const Matrix& M, const Vector& r, int i) {
    for (int j = 0; j < M.cols(); ++j) out << M(i, j) << ' ';
    out << r[i] << '\n';
  };
  for (int i = 0; i < P.num_inequalities(); ++i) row(P.A, P.b, i);
  for (int i = 0; i < P.num_equalities(); ++i) row(P.C, P.d, i);
  out.precision(old);
}

bool is_unit_simplex(const Polytope& P) {
  const int n = P.dimension();
  if (P.num_inequalities() != n || P.num_equalities() != 1) return false;
  return P.A == -Matrix::Identity(n, n) && P.b.isZero(0.0) && P.C == Matrix::Ones(1, n) &&
         P.d[0] == 1.0;
}

}  // namespace mofw
