#include <fstream>
#include <limits>
#include <ostream>

#include "mofw/error.hpp"
#include "mofw/solvers.hpp"

namespace mofw {

void write_trace_csv(std::ostream& out, const SolverTrace& trace) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  const Eigen::Index m = trace.final_objectives.size();
  out << "k,theta_pw,theta_fw,lambda,lambda_max,step_class,backtracks,elapsed_ns";
  for (Eigen::Index j = 0; j < m; ++j) out << ",f_" << (j + 1);
  out << '\n';
  for (const auto& r : trace.records) {
    out << r.k << ',';
    if (r.theta_pw) out << *r.theta_pw;
    out << ',';
    if (r.theta_fw) out << *r.theta_fw;
    out << ',' << r.lambda << ',' << r.lambda_max << ',' << to_string(r.step_class) << ','
        << r.backtracks << ',' << r.elapsed_ns;
    for (Eigen::Index j = 0; j < r.objectives.size(); ++j) out << ',' << r.objectives[j];
    out << '\n';
  }
  out << "# status=" << to_string(trace.status) << " solver=" << to_string(trace.solver)
      << " iterations=" << trace.iterations() << " final_gap=" << trace.final_gap;
  if (!trace.message.empty()) out << " message=\"" << trace.message << '"';
  out << '\n';
  out.precision(old);
}

void write_trace_csv_file(const std::string& path, const SolverTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace file '" + path + "'");
  write_trace_csv(out, trace);
  if (!out) throw IoError("write failed for trace file '" + path + "'");
}

}  // namespace mofw
