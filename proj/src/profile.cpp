#include "mofw/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "mofw/error.hpp"

namespace mofw {

namespace {

constexpr double kRatioSlack = 1e-12;

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

}  // namespace

const char* to_string(Metric m) {
  switch (m) {
    case Metric::time: return "time";
    case Metric::iterations: return "iters";
  }
  return "unknown";
}

Metric parse_metric(const std::string& s) {
  if (s == "time") return Metric::time;
  if (s == "iters" || s == "iterations") return Metric::iterations;
  throw ParseError("unknown metric '" + s + "' (expected time or iters)");
}

double PerformanceProfile::rho_at(std::size_t solver, double tau) const {
  if (solver >= solvers.size()) throw DimensionError("rho_at: solver index out of range");
  if (ratios.rows() == 0) return 0.0;
  Eigen::Index hits = 0;
  for (Eigen::Index p = 0; p < ratios.rows(); ++p) {
    const double r = ratios(p, static_cast<Eigen::Index>(solver));
    if (std::isfinite(r) && r <= tau * (1.0 + kRatioSlack)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ratios.rows());
}

PerformanceProfile performance_profile(const Eigen::MatrixXd& metric,
                                       const std::vector<std::string>& solvers, Metric kind,
                                       int grid_points) {
  if (static_cast<Eigen::Index>(solvers.size()) != metric.cols())
    throw DimensionError("performance_profile: one name per metric column required");
  if (metric.cols() < 2) throw PreconditionError("performance_profile: at least two solvers required");
  if (metric.rows() < 1) throw PreconditionError("performance_profile: at least one problem required");
  if (grid_points < 2) throw PreconditionError("performance_profile: grid needs at least two points");

  PerformanceProfile prof;
  prof.metric = kind;
  prof.solvers = solvers;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index p = 0; p < metric.rows(); ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index s = 0; s < metric.cols(); ++s) {
      const double v = metric(p, s);
      if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) continue;
      if (!(v > 0.0))
        throw PreconditionError("performance_profile: metric values must be positive");
      best = std::min(best, v);
    }
    if (std::isfinite(best)) {
      kept.push_back(p);
    } else {
      prof.excluded.push_back(static_cast<std::size_t>(p));
      prof.warnings.push_back("problem " + std::to_string(p) + " excluded: no solver finished it");
    }
  }
  if (kept.empty()) throw PreconditionError("performance_profile: every problem failed on every solver");

  prof.ratios.resize(static_cast<Eigen::Index>(kept.size()), metric.cols());
  double max_ratio = 1.0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto p = kept[i];
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index s = 0; s < metric.cols(); ++s)
      if (std::isfinite(metric(p, s))) best = std::min(best, metric(p, s));
    for (Eigen::Index s = 0; s < metric.cols(); ++s) {
      const double v = metric(p, s);
      const double r = std::isfinite(v) ? v / best : std::numeric_limits<double>::infinity();
      prof.ratios(static_cast<Eigen::Index>(i), s) = r;
      if (std::isfinite(r)) max_ratio = std::max(max_ratio, r);
    }
  }

  if (max_ratio == 1.0) {
    prof.tau_grid = {1.0};
  } else {
    const double log_max = std::log(max_ratio);
    prof.tau_grid.resize(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i)
      prof.tau_grid[i] = std::exp(log_max * i / (grid_points - 1));
    prof.tau_grid.front() = 1.0;
    prof.tau_grid.back() = max_ratio;
  }
  prof.rho.assign(solvers.size(), {});
  for (std::size_t s = 0; s < solvers.size(); ++s)
    for (double tau : prof.tau_grid) prof.rho[s].push_back(prof.rho_at(s, tau));
  return prof;
}

void write_profile_svg(std::ostream& out, const PerformanceProfile& profile) {
  constexpr int width = 800, height = 600;
  constexpr double left = 80, right = 180, top = 50, bottom = 70;
  constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
  constexpr int ticks = 10;
  static const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                        "#9467bd", "#8c564b", "#e377c2", "#17becf"};

  const double tau_hi = std::max(profile.tau_grid.empty() ? 1.0 : profile.tau_grid.back(), 2.0);
  const double log_hi = std::log10(tau_hi);
  auto px = [&](double tau) { return left + plot_w * std::log10(tau) / log_hi; };
  auto py = [&](double rho) { return top + plot_h * (1.0 - rho); };
  const char* label = profile.metric == Metric::time ? "time" : "iterations";

  out << std::fixed << std::setprecision(2);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">"
      << "Performance profile (" << label << ")</text>\n";

  out << "<g stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\"/>\n";
  for (int i = 0; i <= ticks; ++i) {
    const double x = left + plot_w * i / ticks;
    const double y = top + plot_h * i / ticks;
    out << "<line x1=\"" << x << "\" y1=\"" << top + plot_h << "\" x2=\"" << x << "\" y2=\""
        << top + plot_h + 6 << "\"/>\n";
    out << "<line x1=\"" << left - 6 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
        << "\"/>\n";
  }
  out << "</g>\n";
  out << "<g font-size=\"12\">\n";
  for (int i = 0; i <= ticks; ++i) {
    const double x = left + plot_w * i / ticks;
    const double tau = std::pow(10.0, log_hi * i / ticks);
    out << "<text x=\"" << x << "\" y=\"" << top + plot_h + 22 << "\" text-anchor=\"middle\">"
        << tick_label(tau) << "</text>\n";
    const double rho = 1.0 - static_cast<double>(i) / ticks;
    out << "<text x=\"" << left - 10 << "\" y=\"" << top + plot_h * i / ticks + 4
        << "\" text-anchor=\"end\">" << tick_label(rho) << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 20
      << "\" text-anchor=\"middle\" font-size=\"14\">tau (log scale)</text>\n";
  out << "<text x=\"20\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-size=\"14\""
      << " transform=\"rotate(-90 20 " << top + plot_h / 2 << ")\">rho(tau)</text>\n";
  out << "</g>\n";

  for (std::size_t s = 0; s < profile.solvers.size(); ++s) {
    std::vector<double> finite;
    for (Eigen::Index p = 0; p < profile.ratios.rows(); ++p) {
      const double r = profile.ratios(p, static_cast<Eigen::Index>(s));
      if (std::isfinite(r)) finite.push_back(r);
    }
    std::sort(finite.begin(), finite.end());
    finite.erase(std::unique(finite.begin(), finite.end()), finite.end());
    const char* color = palette[s % (sizeof(palette) / sizeof(palette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    double level = profile.rho_at(s, 1.0);
    out << px(1.0) << ',' << py(level);
    for (double r : finite) {
      if (r <= 1.0) continue;
      out << ' ' << px(r) << ',' << py(level);
      level = profile.rho_at(s, r);
      out << ' ' << px(r) << ',' << py(level);
    }
    out << ' ' << px(tau_hi) << ',' << py(level) << "\"/>\n";

    const double ly = top + 20 + 24 * static_cast<double>(s);
    const double lx = left + plot_w + 20;
    out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << lx + 38 << "\" y=\"" << ly + 4 << "\" font-size=\"13\">"
        << xml_escape(profile.solvers[s]) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_profile_svg_file(const std::string& path, const PerformanceProfile& profile) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_profile_svg(out, profile);
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace mofw
