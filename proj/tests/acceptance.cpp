// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mofw/bench.hpp"
#include "mofw/directions.hpp"
#include "mofw/lp.hpp"
#include "mofw/profile.hpp"
#include "mofw/solvers.hpp"
#include "mofw/stepsize.hpp"
#include "support.hpp"

namespace {

using namespace mofw;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail.clear();
  o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += why;
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Matrix grads(int m, int n, std::initializer_list<double> v) {
  Matrix J(m, n);
  auto it = v.begin();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) J(i, j) = *it++;
  return J;
}

// A finished run together with the problem and feasible set it ran on.
struct RecordedRun {
  std::shared_ptr<const QuadraticProblem> prob;
  Polytope P;
  SolverTrace trace;
  bool adaptive = true;
};

std::vector<RecordedRun> g_runs;  // every run from criteria 1-4

const RecordedRun& record(std::shared_ptr<const QuadraticProblem> prob, SolverTrace trace,
                          bool adaptive) {
  const int n = prob->dimension();
  g_runs.push_back(RecordedRun{std::move(prob), unit_simplex(n), std::move(trace), adaptive});
  return g_runs.back();
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : s / static_cast<double>(v.size());
}

// Criterion 1 and 2 share one suite: 10 instances (10,10,2), all four solvers.
struct SuiteStats {
  std::vector<double> iters[4];
  std::vector<double> wall_ns[4];
  int unconverged[4] = {0, 0, 0, 0};
  double seconds = 0.0;
};
SuiteStats g_suite;

constexpr SolverId kSuiteSolvers[4] = {SolverId::fw, SolverId::afw, SolverId::dipfw, SolverId::pg};

void run_suite() {
  const auto start = Clock::now();
  SolverConfig cfg;
  cfg.eps = 1e-4;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto prob = std::make_shared<const QuadraticProblem>(make_quadratic(10, 10, 2, seed));
    for (int s = 0; s < 4; ++s) {
      SolverTrace tr = run_single(*prob, kSuiteSolvers[s], cfg);
      g_suite.iters[s].push_back(tr.iterations());
      g_suite.wall_ns[s].push_back(static_cast<double>(tr.elapsed_ns));
      if (tr.status != RunStatus::converged) ++g_suite.unconverged[s];
      record(prob, std::move(tr), kSuiteSolvers[s] != SolverId::pg);
    }
  }
  g_suite.seconds = seconds_since(start);
}

Outcome criterion_1() {
  run_suite();
  Outcome o;
  const double fw = mean(g_suite.iters[0]);
  const double dip = mean(g_suite.iters[2]);
  const double pg = mean(g_suite.iters[3]);
  o.detail = "means DIPFW " + fmt("%.1f", dip) + ", PG " + fmt("%.1f", pg) + ", FW " +
             fmt("%.1f", fw) + ", AFW " + fmt("%.1f", mean(g_suite.iters[1])) + "; " +
             fmt("%.1f s", g_suite.seconds);
  const std::string summary = o.detail;
  if (!(dip >= 10 && dip <= 150)) fail(o, "DIPFW mean " + fmt("%.1f", dip) + " outside [10, 150]");
  if (!(pg >= 10 && pg <= 150)) fail(o, "PG mean " + fmt("%.1f", pg) + " outside [10, 150]");
  if (!(fw >= 10 * dip)) fail(o, "FW mean " + fmt("%.1f", fw) + " below 10x DIPFW");
  if (!(g_suite.seconds < 120)) fail(o, "runtime " + fmt("%.1f s", g_suite.seconds));
  for (int s : {2, 3})
    if (g_suite.unconverged[s] > 0)
      fail(o, std::string(to_string(kSuiteSolvers[s])) + " did not converge on " +
                  std::to_string(g_suite.unconverged[s]) + " instances");
  if (!o.pass) o.detail += " (" + summary + ")";
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const double dip = mean(g_suite.wall_ns[2]) * 1e-6;
  const double pg = mean(g_suite.wall_ns[3]) * 1e-6;
  o.detail = fmt("mean wall DIPFW %.3f ms, PG %.3f ms", dip, pg);
  if (!(dip <= pg)) fail(o, fmt("DIPFW %.3f ms slower than PG %.3f ms", dip, pg));
  return o;
}

Outcome criterion_3() {
  const auto start = Clock::now();
  Outcome o;
  SolverConfig cfg;
  cfg.stop_mode = StopMode::fw_gap;
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto prob = std::make_shared<const QuadraticProblem>(make_quadratic(10, 10, 2, seed));
    const RecordedRun& run =
        record(prob, run_dipfw(*prob, unit_simplex(10), barycenter(10), cfg), true);
    if (run.trace.status != RunStatus::converged)
      fail(o, "seed " + std::to_string(seed) + " ended " + to_string(run.trace.status));
    for (const auto& r : run.trace.records) {
      ++checked;
      if (!r.theta_pw || !r.theta_fw) {
        fail(o, "missing gap at seed " + std::to_string(seed));
        break;
      }
      if (!(*r.theta_pw <= *r.theta_fw + 1e-9 && *r.theta_fw <= 1e-9)) {
        fail(o, fmt("theta_pw %.3e, theta_fw %.3e", *r.theta_pw, *r.theta_fw) + " at seed " +
                    std::to_string(seed) + " k=" + std::to_string(r.k));
        break;
      }
    }
  }
  const double secs = seconds_since(start);
  if (o.pass) o.detail = std::to_string(checked) + " iterates; " + fmt("%.2f s", secs);
  if (!(secs < 10)) fail(o, "runtime " + fmt("%.1f s", secs));
  return o;
}

// exp of the least-squares slope of log(sigma) against the good-step index.
double decay_factor(const std::vector<double>& sigma) {
  const double n = static_cast<double>(sigma.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double x = static_cast<double>(i), y = std::log(sigma[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return std::exp((n * sxy - sx * sy) / (n * sxx - sx * sx));
}

Outcome criterion_4() {
  const auto start = Clock::now();
  Outcome o;
  SolverConfig cfg;
  cfg.eps = 1e-8;
  std::string factors;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto prob = std::make_shared<const QuadraticProblem>(make_quadratic(20, 10, 2, seed));
    const RecordedRun& run =
        record(prob, run_dipfw(*prob, unit_simplex(10), barycenter(10), cfg), true);
    const std::string tag = "seed " + std::to_string(seed);
    if (!prob->strong_convexity() || !(*prob->strong_convexity() > 0))
      fail(o, tag + " is not full column rank");
    if (run.trace.status != RunStatus::converged) {
      fail(o, tag + " ended " + to_string(run.trace.status));
      continue;
    }
    std::vector<double> sigma;
    for (const auto& r : run.trace.records) {
      if (r.step_class != StepClass::good) continue;
      const double s = gap_sigma(*prob, r.point, run.trace.final_x);
      if (s > 0.0) sigma.push_back(s);
    }
    if (sigma.size() < 3) {
      fail(o, tag + " has fewer than 3 good steps with positive sigma");
      continue;
    }
    const double q = decay_factor(sigma);
    factors += (factors.empty() ? "" : ", ") + fmt("%.3f", q);
    if (!(q <= 0.95)) fail(o, tag + fmt(" decay factor %.4f", q));
  }
  const double secs = seconds_since(start);
  if (o.pass) o.detail = "decay factors " + factors + "; " + fmt("%.2f s", secs);
  if (!(secs < 30)) fail(o, "runtime " + fmt("%.1f s", secs));
  return o;
}

Outcome criterion_5() {
  Outcome o;
  int worst = 0, traces = 0;
  for (const auto& run : g_runs) {
    if (run.trace.solver != SolverId::dipfw) continue;
    ++traces;
    const int n = run.prob->dimension();
    int streak = 0;
    for (const auto& r : run.trace.records) {
      streak = r.step_class == StepClass::bad ? streak + 1 : 0;
      worst = std::max(worst, streak);
      if (streak >= n) {
        fail(o, "bad-step run of " + std::to_string(streak) + " with n=" + std::to_string(n));
        return o;
      }
    }
  }
  o.detail = std::to_string(traces) + " DIPFW traces, longest bad run " + std::to_string(worst);
  return o;
}

Outcome criterion_6() {
  Outcome o;
  double worst_viol = 0.0, worst_rise = -std::numeric_limits<double>::infinity();
  std::size_t iterates = 0;
  for (const auto& run : g_runs) {
    const auto& recs = run.trace.records;
    for (std::size_t i = 0; i <= recs.size(); ++i) {
      const Vector& x = i < recs.size() ? recs[i].point : run.trace.final_x;
      ++iterates;
      worst_viol = std::max(worst_viol, feasibility_violation(run.P, x));
      if (i < recs.size()) {
        const Vector& next = i + 1 < recs.size() ? recs[i + 1].point : run.trace.final_x;
        worst_rise = std::max(worst_rise, run.prob->difference(x, next).maxCoeff());
      }
    }
  }
  o.detail = std::to_string(iterates) + " iterates, max violation " + fmt("%.2e", worst_viol) +
             ", max objective change " + fmt("%.2e", worst_rise);
  if (!(worst_viol <= 1e-9)) fail(o, "violation " + fmt("%.3e", worst_viol));
  if (!(worst_rise <= 1e-10)) fail(o, "objective increase " + fmt("%.3e", worst_rise));
  return o;
}

Outcome criterion_7() {
  const auto start = Clock::now();
  Outcome o;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> N(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    const Polytope P = testing::random_polytope(rng, n, trial % 4, trial % 3 == 0);
    Vector c(n);
    for (int j = 0; j < n; ++j) c[j] = N(rng);
    const auto sol = lp::solve_lp(testing::polytope_lp(P, c));
    if (sol.status != lp::LpStatus::optimal) {
      fail(o, "trial " + std::to_string(trial) + " status " + lp::to_string(sol.status));
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : testing::brute_force_vertices(P)) best = std::min(best, c.dot(v));
    worst = std::max(worst, std::abs(sol.value - best));
  }
  const double secs = seconds_since(start);
  if (!(worst <= 1e-8)) fail(o, "max error " + fmt("%.3e", worst));
  if (o.pass) o.detail = "100 LPs, max error " + fmt("%.2e", worst) + "; " + fmt("%.2f s", secs);
  if (!(secs < 5)) fail(o, "runtime " + fmt("%.1f s", secs));
  return o;
}

Outcome criterion_8() {
  Outcome o;
  const Polytope P = unit_simplex(2);
  const Vector mid = vec({0.5, 0.5});
  auto near = [&](double got, double want, const std::string& what) {
    if (!(std::abs(got - want) <= 1e-8)) fail(o, what + fmt(" = %.10g, want %.10g", got, want));
  };
  auto near_vec = [&](const Vector& got, const Vector& want, const std::string& what) {
    if (!(got.size() == want.size() && (got - want).lpNorm<Eigen::Infinity>() <= 1e-8))
      fail(o, what + " mismatch");
  };

  near(fw_direction(grads(2, 2, {1, 0, 0, 1}), P, mid).theta, 0.0, "FW theta, rows (1,0),(0,1)");
  const auto fw1 = fw_direction(grads(1, 2, {1, 2}), P, mid);
  near(fw1.theta, -0.5, "FW theta, gradient (1,2)");
  near_vec(fw1.toward, vec({1, 0}), "FW toward, gradient (1,2)");
  const auto fw2 = fw_direction(grads(2, 2, {1, 2, 1, 3}), P, mid);
  near(fw2.theta, -0.5, "FW theta, rows (1,2),(1,3)");
  near_vec(fw2.toward, vec({1, 0}), "FW toward, rows (1,2),(1,3)");

  const auto pw = pairwise_direction(grads(1, 2, {1, 2}), P, mid);
  near(pw.theta, -1.0, "PW theta at midpoint");
  near_vec(pw.toward, vec({1, 0}), "PW toward at midpoint");
  near_vec(pw.away.value_or(Vector()), vec({0, 1}), "PW away at midpoint");
  const auto pwv = pairwise_direction(grads(1, 2, {1, 2}), P, vec({1, 0}));
  near(pwv.theta, 0.0, "PW theta at e1");
  near_vec(pwv.toward, vec({1, 0}), "PW toward at e1");
  near_vec(pwv.away.value_or(Vector()), vec({1, 0}), "PW away at e1");
  const auto pw0 = pairwise_direction(Matrix::Zero(2, 3), unit_simplex(3), vec({0.2, 0.3, 0.5}));
  near(pw0.theta, 0.0, "PW theta, zero gradients");
  near(pw0.dir.norm(), 0.0, "PW dir norm, zero gradients");

  // f_1 = 1/2 |x - e1|^2, f_2 = 1/2 |x - e2|^2: (0.3, 0.7) is Pareto optimal.
  const auto pareto = testing::target_problem({vec({1, 0}), vec({0, 1})});
  near(fw_direction(pareto, P, vec({0.3, 0.7})).theta, 0.0, "FW theta at Pareto point");
  if (o.pass) o.detail = "14 values within 1e-8";
  return o;
}

Outcome criterion_9() {
  Outcome o;
  const auto prob = testing::target_problem({Vector::Zero(2)});
  const StepResult hand =
      adaptive_step(prob, vec({1, 0}), vec({-1, 0}), -1.0, 1.0, StepSizeState{1.0, 0.9, 2.0});
  if (!(std::abs(hand.lambda - 1.0 / 1.8) <= 1e-9 && std::abs(hand.L_out - 1.8) <= 1e-9))
    fail(o, fmt("hand example lambda %.10f, L_out %.10f", hand.lambda, hand.L_out));
  std::size_t checked = 0;
  for (const auto& run : g_runs) {
    if (!run.adaptive) continue;
    for (const auto& r : run.trace.records) {
      ++checked;
      if (!r.smoothness ||
          !decrease_model_holds(*run.prob, r.point, r.direction, r.slope, r.lambda, *r.smoothness)) {
        fail(o, std::string(to_string(run.trace.solver)) + " step " + std::to_string(r.k) +
                    " violates the exit inequality");
        return o;
      }
    }
  }
  o.detail = "hand example lambda " + fmt("%.4f", hand.lambda) + ", L_out " +
             fmt("%.2f", hand.L_out) + "; " + std::to_string(checked) + " adaptive steps";
  return o;
}

Outcome criterion_10() {
  Outcome o;
  const auto prob = testing::target_problem({vec({0.2, 0.8})});
  SolverConfig cfg;
  cfg.step_mode = StepMode::exact_line_search;
  const SolverTrace tr = run_dipfw(prob, unit_simplex(2), vec({1, 0}), cfg);
  const double err = (tr.final_x - vec({0.2, 0.8})).norm();
  o.detail = std::to_string(tr.iterations()) + " iteration, |x - t| = " + fmt("%.2e", err);
  if (tr.status != RunStatus::converged) fail(o, std::string("status ") + to_string(tr.status));
  if (tr.iterations() != 1) fail(o, std::to_string(tr.iterations()) + " iterations");
  if (!(err <= 1e-10)) fail(o, "distance " + fmt("%.3e", err));
  return o;
}

Outcome criterion_11() {
  Outcome o;
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const QuadraticProblem prob(make_quadratic(10, 10, 2, seed));
    for (int i = 0; i < 20; ++i) {
      const Vector x = testing::random_simplex_point(rng, 10);
      const Matrix J = prob.jacobian(x);
      const Matrix fd = testing::finite_difference_jacobian(prob, x, 1e-5);
      worst = std::max(worst, (J - fd).norm() / std::max(J.norm(), 1e-300));
    }
  }
  o.detail = "100 points, max relative error " + fmt("%.2e", worst);
  if (!(worst <= 1e-6)) fail(o, "relative error " + fmt("%.3e", worst));
  return o;
}

Outcome criterion_12() {
  Outcome o;
  // Problems as rows: solver s1 takes (1, 4), solver s2 takes (2, 2).
  Eigen::MatrixXd t(2, 2);
  t << 1, 2, 4, 2;
  const PerformanceProfile prof = performance_profile(t, {"s1", "s2"}, Metric::time);
  const double a1 = prof.rho_at(0, 1.0), b1 = prof.rho_at(1, 1.0);
  const double a2 = prof.rho_at(0, 2.0), b2 = prof.rho_at(1, 2.0);
  if (!(a1 == 0.5 && b1 == 0.5)) fail(o, fmt("rho(1) = (%.3f, %.3f)", a1, b1));
  if (!(a2 == 1.0 && b2 == 1.0)) fail(o, fmt("rho(2) = (%.3f, %.3f)", a2, b2));
  for (const auto& curve : prof.rho)
    for (std::size_t i = 1; i < curve.size(); ++i)
      if (curve[i] < curve[i - 1]) fail(o, "profile curve decreases");
  if (o.pass) o.detail = "rho(1) = (0.5, 0.5), rho(2) = (1, 1), curves monotone";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"iteration-count band", criterion_1},
      {"DIPFW wall time <= PG", criterion_2},
      {"gap order under fw_gap stopping", criterion_3},
      {"linear rate on full-rank instances", criterion_4},
      {"bad-step runs shorter than n", criterion_5},
      {"feasibility and monotonicity", criterion_6},
      {"LP oracle equivalence", criterion_7},
      {"subproblem spot values", criterion_8},
      {"step-size contract", criterion_9},
      {"one-step exactness", criterion_10},
      {"derivative check", criterion_11},
      {"performance-profile correctness", criterion_12},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %2zu (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
