#include "mofw/problems.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>

#include "mofw/error.hpp"
#include "text_io.hpp"

namespace mofw {

void MultiobjectiveProblem::check(const Vector& x, const char* who) const {
  if (x.size() != dimension())
    throw DimensionError(std::string(who) + ": point has dimension " + std::to_string(x.size()) +
                         ", problem has " + std::to_string(dimension()));
}

Vector MultiobjectiveProblem::evaluate(const Vector& x) const {
  check(x, "evaluate");
  return do_evaluate(x);
}

Matrix MultiobjectiveProblem::jacobian(const Vector& x) const {
  check(x, "jacobian");
  return do_jacobian(x);
}

Vector MultiobjectiveProblem::difference(const Vector& x, const Vector& y) const {
  check(x, "difference");
  check(y, "difference");
  return do_difference(x, y);
}

QuadraticInstance make_quadratic(int p, int n, int m, std::uint64_t seed) {
  if (p < 1 || n < 1 || m < 1) throw DimensionError("make_quadratic: p, n, m must be >= 1");
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  QuadraticInstance inst;
  inst.p = p;
  inst.n = n;
  inst.m = m;
  inst.seed = seed;
  inst.G.resize(p, n);
  for (int col = 0; col < n; ++col)
    for (int row = 0; row < p; ++row) inst.G(row, col) = uniform();
  inst.targets.assign(m, Vector(p));
  for (auto& b : inst.targets)
    for (int row = 0; row < p; ++row) b[row] = uniform();
  return inst;
}

double smoothness_bound(const QuadraticInstance& inst, int max_iter) {
  const Matrix H = inst.G.transpose() * inst.G;
  const auto n = H.rows();
  if (n == 0 || H.isZero(0.0)) throw PreconditionError("smoothness_bound: G is zero");
  Vector v = Vector::Ones(n).normalized();
  if ((H * v).norm() == 0.0) {
    Eigen::Index i = 0;
    H.diagonal().maxCoeff(&i);
    v = Vector::Unit(n, i);
  }
  for (int it = 0; it < max_iter; ++it) {
    const Vector Hv = H * v;
    const double rho = v.dot(Hv);
    if ((Hv - rho * v).norm() <= 1e-8 * rho) return rho;
    v = Hv.normalized();
  }
  throw ConvergenceFailure("smoothness_bound: power iteration did not converge in " +
                           std::to_string(max_iter) + " iterations");
}

QuadraticProblem::QuadraticProblem(QuadraticInstance inst) : inst_(std::move(inst)) {
  if (inst_.G.rows() != inst_.p || inst_.G.cols() != inst_.n ||
      static_cast<int>(inst_.targets.size()) != inst_.m)
    throw DimensionError("QuadraticProblem: instance shape does not match its header");
  targets_.resize(inst_.p, inst_.m);
  for (int j = 0; j < inst_.m; ++j) {
    if (inst_.targets[j].size() != inst_.p)
      throw DimensionError("QuadraticProblem: target " + std::to_string(j + 1) + " has wrong length");
    targets_.col(j) = inst_.targets[j];
  }
  smoothness_ = smoothness_bound(inst_);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(inst_.G.transpose() * inst_.G, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  if (lo > 1e-10 * smoothness_) mu_ = lo;
}

Vector QuadraticProblem::do_evaluate(const Vector& x) const {
  const Matrix R = (inst_.G * x).replicate(1, inst_.m) - targets_;
  return 0.5 * R.colwise().squaredNorm().transpose();
}

Matrix QuadraticProblem::do_jacobian(const Vector& x) const {
  const Matrix R = (inst_.G * x).replicate(1, inst_.m) - targets_;
  return (inst_.G.transpose() * R).transpose();
}

Vector QuadraticProblem::do_difference(const Vector& x, const Vector& y) const {
  // f_j(y) - f_j(x) = r_j . s + |s|^2 / 2 with r_j = G x - b_j, s = G (y - x).
  const Vector s = inst_.G * (y - x);
  const Matrix R = (inst_.G * x).replicate(1, inst_.m) - targets_;
  return (R.transpose() * s).array() + 0.5 * s.squaredNorm();
}

double gap_sigma(const MultiobjectiveProblem& prob, const Vector& x, const Vector& z) {
  return prob.difference(z, x).minCoeff();
}

void write_instance(std::ostream& out, const QuadraticInstance& inst) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << inst.p << ' ' << inst.n << ' ' << inst.m << ' ' << inst.seed << '\n';
  for (int r = 0; r < inst.p; ++r) {
    for (int c = 0; c < inst.n; ++c) out << (c ? " " : "") << inst.G(r, c);
    out << '\n';
  }
  for (const auto& b : inst.targets) {
    for (int r = 0; r < inst.p; ++r) out << (r ? " " : "") << b[r];
    out << '\n';
  }
  out.precision(old);
}

QuadraticInstance read_instance(std::istream& in) {
  detail::TokenCursor cur(detail::read_tokens(in), "instance");
  QuadraticInstance inst;
  const long long p = cur.next_int();
  const long long n = cur.next_int();
  const long long m = cur.next_int();
  const long long seed = cur.next_int();
  if (p < 1 || n < 1 || m < 1 || seed < 0) throw ParseError("instance: invalid header");
  inst.p = static_cast<int>(p);
  inst.n = static_cast<int>(n);
  inst.m = static_cast<int>(m);
  inst.seed = static_cast<std::uint64_t>(seed);
  inst.G.resize(p, n);
  for (long long r = 0; r < p; ++r)
    for (long long c = 0; c < n; ++c) inst.G(r, c) = cur.next_double();
  inst.targets.assign(m, Vector(p));
  for (auto& b : inst.targets)
    for (long long r = 0; r < p; ++r) b[r] = cur.next_double();
  cur.expect_end();
  return inst;
}

QuadraticInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file '" + path + "'");
  try {
    return read_instance(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace mofw
