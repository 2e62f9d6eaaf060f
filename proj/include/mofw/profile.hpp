#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace mofw {

enum class Metric { time, iterations };

/// "time" or "iters".
const char* to_string(Metric m);
/// Accepts "time", "iters" and "iterations".
Metric parse_metric(const std::string& s);

/// Dolan-More performance profile over a problems x solvers metric table.
struct PerformanceProfile {
  Metric metric = Metric::iterations;
  std::vector<std::string> solvers;
  /// Log-spaced, starts at exactly 1 and ends at exactly the largest finite ratio.
  std::vector<double> tau_grid;
  /// rho[s][i] = fraction of problems with ratio <= tau_grid[i].
  std::vector<std::vector<double>> rho;
  /// Kept problems x solvers; failed runs hold +inf.
  Eigen::MatrixXd ratios;
  /// Row indices (into the input table) of problems no solver finished.
  std::vector<std::size_t> excluded;
  std::vector<std::string> warnings;

  std::size_t num_problems() const { return static_cast<std::size_t>(ratios.rows()); }
  /// Exact rho_s(tau), independent of the grid.
  double rho_at(std::size_t solver, double tau) const;
};

/// `metric` is problems x solvers; NaN or +inf marks a failed run and every
/// other entry must be positive. Throws PreconditionError with fewer than two
/// solvers, no problems, or when every problem is excluded.
PerformanceProfile performance_profile(const Eigen::MatrixXd& metric,
                                       const std::vector<std::string>& solvers, Metric kind,
                                       int grid_points = 200);

/// 800x600 SVG, log-scaled tau axis, one step-function polyline per solver, legend.
void write_profile_svg(std::ostream& out, const PerformanceProfile& profile);
void write_profile_svg_file(const std::string& path, const PerformanceProfile& profile);

}  // namespace mofw
