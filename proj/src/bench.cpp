#include "mofw/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "mofw/error.hpp"

namespace mofw {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

long long parse_integer(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw ParseError(where + ": expected an integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw ParseError(where + ": expected a number, got '" + s + "'");
  return v;
}

Dims parse_dims(const std::string& item, const std::string& where) {
  std::string norm = item;
  std::replace(norm.begin(), norm.end(), 'x', ',');
  const auto parts = split(norm, ',');
  if (parts.size() != 3) throw ParseError(where + ": dims entry '" + item + "' needs p,n,m");
  Dims d;
  d.p = static_cast<int>(parse_integer(parts[0], where));
  d.n = static_cast<int>(parse_integer(parts[1], where));
  d.m = static_cast<int>(parse_integer(parts[2], where));
  return d;
}

std::vector<std::uint64_t> parse_seeds(const std::string& value, const std::string& where) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split(value, ',')) {
    if (item.empty()) throw ParseError(where + ": empty seed entry");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      const long long v = parse_integer(item, where);
      if (v < 0) throw ParseError(where + ": seeds must be non-negative");
      seeds.push_back(static_cast<std::uint64_t>(v));
      continue;
    }
    const long long lo = parse_integer(trim(item.substr(0, dots)), where);
    const long long hi = parse_integer(trim(item.substr(dots + 2)), where);
    if (lo < 0 || hi < lo) throw ParseError(where + ": bad seed range '" + item + "'");
    if (hi - lo > 1000000) throw ParseError(where + ": seed range '" + item + "' is too large");
    for (long long s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  }
  return seeds;
}

std::string upper(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string trace_file_name(const InstanceKey& key, SolverId solver) {
  return std::string(to_string(solver)) + "_" + key.dims.label() + "_s" + std::to_string(key.seed) +
         ".csv";
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& body) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  body(out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string Dims::label() const {
  return std::to_string(p) + "x" + std::to_string(n) + "x" + std::to_string(m);
}

void ExperimentPlan::validate() const {
  if (dims.empty()) throw PreconditionError("plan: at least one dims triple required");
  if (seeds.empty()) throw PreconditionError("plan: at least one seed required");
  if (solvers.empty()) throw PreconditionError("plan: at least one solver required");
  for (const auto& d : dims)
    if (d.p < 1 || d.n < 1 || d.m < 1)
      throw PreconditionError("plan: dims " + d.label() + " must be positive");
  std::set<SolverId> seen(solvers.begin(), solvers.end());
  if (seen.size() != solvers.size()) throw PreconditionError("plan: solver listed twice");
  if (jobs < 1) throw PreconditionError("plan: jobs must be >= 1");
  config.validate();
}

ExperimentPlan parse_plan(std::istream& in) {
  ExperimentPlan plan;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "plan line " + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ParseError(where + ": empty value for '" + key + "'");
    if (!seen.insert(key).second) throw ParseError(where + ": key '" + key + "' repeated");

    if (key == "dims") {
      for (const auto& item : split(value, ';'))
        if (!item.empty()) plan.dims.push_back(parse_dims(item, where));
    } else if (key == "seeds") {
      plan.seeds = parse_seeds(value, where);
    } else if (key == "solvers") {
      if (value == "all") {
        plan.solvers = {SolverId::fw, SolverId::afw, SolverId::dipfw, SolverId::pg};
      } else {
        for (const auto& item : split(value, ',')) plan.solvers.push_back(parse_solver(item));
      }
    } else if (key == "eps") {
      plan.config.eps = parse_real(value, where);
    } else if (key == "max_iter") {
      plan.config.max_iter = static_cast<int>(parse_integer(value, where));
    } else if (key == "step_mode") {
      plan.config.step_mode = parse_step_mode(value);
    } else if (key == "stop_mode") {
      plan.config.stop_mode = parse_stop_mode(value);
    } else if (key == "eta") {
      plan.config.eta = parse_real(value, where);
    } else if (key == "tau") {
      plan.config.tau = parse_real(value, where);
    } else if (key == "out_dir") {
      plan.out_dir = value;
    } else if (key == "jobs") {
      plan.jobs = static_cast<int>(parse_integer(value, where));
    } else {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
  for (const char* req : {"dims", "seeds", "solvers"})
    if (!seen.count(req)) throw ParseError(std::string("plan: missing required key '") + req + "'");
  try {
    plan.validate();
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
  return plan;
}

ExperimentPlan parse_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open plan file '" + path + "'");
  try {
    return parse_plan(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_plan(std::ostream& out, const ExperimentPlan& plan) {
  out << "dims = ";
  for (std::size_t i = 0; i < plan.dims.size(); ++i) {
    const auto& d = plan.dims[i];
    out << (i ? "; " : "") << d.p << ',' << d.n << ',' << d.m;
  }
  out << "\nseeds = ";
  for (std::size_t i = 0; i < plan.seeds.size(); ++i) out << (i ? ", " : "") << plan.seeds[i];
  out << "\nsolvers = ";
  for (std::size_t i = 0; i < plan.solvers.size(); ++i)
    out << (i ? ", " : "") << to_string(plan.solvers[i]);
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "\neps = " << plan.config.eps << "\nmax_iter = " << plan.config.max_iter
      << "\nstep_mode = " << to_string(plan.config.step_mode)
      << "\nstop_mode = " << to_string(plan.config.stop_mode) << "\neta = " << plan.config.eta
      << "\ntau = " << plan.config.tau << "\nout_dir = " << plan.out_dir
      << "\njobs = " << plan.jobs << '\n';
  out.precision(old);
}

SolverTrace run_single(const QuadraticProblem& prob, SolverId solver, const SolverConfig& cfg) {
  const int n = prob.dimension();
  const Vector x0 = barycenter(n);
  try {
    switch (solver) {
      case SolverId::dipfw: return run_dipfw(prob, unit_simplex(n), x0, cfg);
      case SolverId::fw: return run_fw(prob, unit_simplex(n), x0, cfg);
      case SolverId::afw:
        return run_afw(prob, simplex_vertices(n), Vector::Constant(n, 1.0 / n), cfg);
      case SolverId::pg: return run_pg(prob, x0, cfg);
    }
    throw PreconditionError("unknown solver");
  } catch (const std::exception& e) {
    SolverTrace t;
    t.solver = solver;
    t.status = RunStatus::error;
    t.message = e.what();
    t.final_x = x0;
    t.final_objectives = prob.evaluate(x0);
    t.final_gap = std::numeric_limits<double>::quiet_NaN();
    return t;
  }
}

ResultMatrix run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  ResultMatrix res;
  res.solvers = plan.solvers;
  for (const auto& d : plan.dims)
    for (auto seed : plan.seeds) res.instances.push_back({d, seed});
  const std::size_t S = res.solvers.size();
  res.cells.resize(res.instances.size() * S);
  res.traces.resize(res.instances.size() * S);

  auto run_instance = [&](std::size_t i) {
    const auto& key = res.instances[i];
    std::unique_ptr<QuadraticProblem> prob;
    std::string setup_error;
    try {
      prob = std::make_unique<QuadraticProblem>(
          make_quadratic(key.dims.p, key.dims.n, key.dims.m, key.seed));
    } catch (const std::exception& e) {
      setup_error = e.what();
    }
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t idx = res.index(i, s);
      SolverTrace trace;
      if (prob) {
        trace = run_single(*prob, res.solvers[s], plan.config);
      } else {
        trace.solver = res.solvers[s];
        trace.status = RunStatus::error;
        trace.message = setup_error;
        trace.final_gap = std::numeric_limits<double>::quiet_NaN();
      }
      RunResult& cell = res.cells[idx];
      cell.status = trace.status;
      cell.iterations = trace.iterations();
      cell.elapsed_ns = trace.elapsed_ns;
      cell.final_gap = trace.final_gap;
      cell.message = trace.message;
      res.traces[idx] = std::move(trace);
    }
  };

  const std::size_t N = res.instances.size();
  const auto workers = static_cast<std::size_t>(std::max(1, plan.jobs));
  if (workers == 1 || N == 1) {
    for (std::size_t i = 0; i < N; ++i) run_instance(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, N); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < N; i = next++) run_instance(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return res;
}

PerformanceProfile profile_from_results(const ResultMatrix& results, Metric metric) {
  const auto P = static_cast<Eigen::Index>(results.instances.size());
  const auto S = static_cast<Eigen::Index>(results.solvers.size());
  Eigen::MatrixXd table(P, S);
  for (Eigen::Index p = 0; p < P; ++p) {
    for (Eigen::Index s = 0; s < S; ++s) {
      const RunResult& c = results.at(static_cast<std::size_t>(p), static_cast<std::size_t>(s));
      if (c.status != RunStatus::converged) {
        table(p, s) = std::numeric_limits<double>::infinity();
      } else if (metric == Metric::iterations) {
        table(p, s) = std::max(1, c.iterations);
      } else {
        table(p, s) = static_cast<double>(std::max<std::int64_t>(1, c.elapsed_ns));
      }
    }
  }
  std::vector<std::string> names;
  for (auto s : results.solvers) names.push_back(upper(to_string(s)));
  return performance_profile(table, names, metric);
}

std::vector<SummaryRow> summarize(const ResultMatrix& results) {
  std::vector<Dims> order;
  for (const auto& key : results.instances)
    if (std::find(order.begin(), order.end(), key.dims) == order.end()) order.push_back(key.dims);

  std::vector<SummaryRow> rows;
  for (const auto& d : order) {
    for (const char* metric : {"time", "iterations"}) {
      for (std::size_t s = 0; s < results.solvers.size(); ++s) {
        SummaryRow row;
        row.method = upper(to_string(results.solvers[s]));
        row.dim = d.label();
        row.metric = metric;
        double sum = 0.0;
        row.min = std::numeric_limits<double>::infinity();
        row.max = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < results.instances.size(); ++i) {
          if (!(results.instances[i].dims == d)) continue;
          const RunResult& c = results.at(i, s);
          if (c.status == RunStatus::error) {
            ++row.failed;
            continue;
          }
          if (c.status == RunStatus::iter_cap) ++row.capped;
          const double v = row.metric == "time" ? static_cast<double>(c.elapsed_ns) * 1e-9
                                                : static_cast<double>(c.iterations);
          row.min = std::min(row.min, v);
          row.max = std::max(row.max, v);
          sum += v;
          ++row.runs;
        }
        if (row.runs > 0) {
          row.mean = std::clamp(sum / row.runs, row.min, row.max);
        } else {
          row.min = row.mean = row.max = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const ResultMatrix& results) {
  const auto rows = summarize(results);
  out << "method,dim,metric,min,mean,max\n";
  auto cell = [](double v) { return std::isnan(v) ? std::string("NA") : format_number(v); };
  for (const auto& r : rows)
    out << r.method << ',' << r.dim << ',' << r.metric << ',' << cell(r.min) << ','
        << cell(r.mean) << ',' << cell(r.max) << '\n';
  for (const auto& r : rows) {
    if (r.metric != "iterations") continue;
    if (r.capped > 0)
      out << "# censored " << r.method << ' ' << r.dim << ": " << r.capped << " of " << r.runs
          << " runs stopped at max_iter; statistics are lower bounds\n";
    if (r.failed > 0)
      out << "# failed " << r.method << ' ' << r.dim << ": " << r.failed
          << " runs ended in error and are excluded\n";
  }
}

void write_results_csv(std::ostream& out, const ResultMatrix& results) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "p,n,m,seed,solver,status,iterations,elapsed_ns,final_gap\n";
  for (std::size_t i = 0; i < results.instances.size(); ++i) {
    const auto& key = results.instances[i];
    for (std::size_t s = 0; s < results.solvers.size(); ++s) {
      const RunResult& c = results.at(i, s);
      out << key.dims.p << ',' << key.dims.n << ',' << key.dims.m << ',' << key.seed << ','
          << to_string(results.solvers[s]) << ',' << to_string(c.status) << ',' << c.iterations
          << ',' << c.elapsed_ns << ',';
      if (std::isnan(c.final_gap)) {
        out << "nan";
      } else {
        out << c.final_gap;
      }
      out << '\n';
    }
  }
  out.precision(old);
}

void write_results_csv_file(const std::string& path, const ResultMatrix& results) {
  write_file(path, [&](std::ostream& out) { write_results_csv(out, results); });
}

ResultMatrix read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "p,n,m,seed,solver,status,iterations,elapsed_ns,final_gap")
    throw ParseError("results: missing or unexpected header");
  struct Row {
    InstanceKey key;
    SolverId solver;
    RunResult cell;
  };
  std::vector<Row> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = "results line " + std::to_string(lineno);
    const auto f = split(line, ',');
    if (f.size() != 9) throw ParseError(where + ": expected 9 fields");
    Row r;
    r.key.dims.p = static_cast<int>(parse_integer(f[0], where));
    r.key.dims.n = static_cast<int>(parse_integer(f[1], where));
    r.key.dims.m = static_cast<int>(parse_integer(f[2], where));
    const long long seed = parse_integer(f[3], where);
    if (seed < 0) throw ParseError(where + ": negative seed");
    r.key.seed = static_cast<std::uint64_t>(seed);
    r.solver = parse_solver(f[4]);
    r.cell.status = parse_status(f[5]);
    r.cell.iterations = static_cast<int>(parse_integer(f[6], where));
    r.cell.elapsed_ns = parse_integer(f[7], where);
    r.cell.final_gap = f[8] == "nan" ? std::numeric_limits<double>::quiet_NaN() : parse_real(f[8], where);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ParseError("results: no data rows");

  ResultMatrix res;
  auto same = [](const InstanceKey& a, const InstanceKey& b) {
    return a.dims == b.dims && a.seed == b.seed;
  };
  for (const auto& r : rows) {
    if (std::find(res.solvers.begin(), res.solvers.end(), r.solver) == res.solvers.end())
      res.solvers.push_back(r.solver);
    if (std::none_of(res.instances.begin(), res.instances.end(),
                     [&](const InstanceKey& k) { return same(k, r.key); }))
      res.instances.push_back(r.key);
  }
  const std::size_t S = res.solvers.size();
  res.cells.resize(res.instances.size() * S);
  std::vector<bool> filled(res.cells.size(), false);
  for (const auto& r : rows) {
    const auto i = static_cast<std::size_t>(
        std::find_if(res.instances.begin(), res.instances.end(),
                     [&](const InstanceKey& k) { return same(k, r.key); }) -
        res.instances.begin());
    const auto s = static_cast<std::size_t>(
        std::find(res.solvers.begin(), res.solvers.end(), r.solver) - res.solvers.begin());
    const std::size_t idx = res.index(i, s);
    if (filled[idx])
      throw ParseError("results: duplicate row for " + r.key.dims.label() + " seed " +
                       std::to_string(r.key.seed) + " " + to_string(r.solver));
    filled[idx] = true;
    res.cells[idx] = r.cell;
  }
  if (std::find(filled.begin(), filled.end(), false) != filled.end())
    throw ParseError("results: matrix is not rectangular (missing instance/solver rows)");
  return res;
}

ResultMatrix read_results_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results file '" + path + "'");
  try {
    return read_results_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void emit_outputs(const ResultMatrix& results, const std::vector<PerformanceProfile>& profiles,
                  const std::string& dir, const ExperimentPlan* plan) {
  if (results.empty()) throw PreconditionError("emit_outputs: empty result matrix, nothing written");
  const fs::path root(dir);
  ensure_directory(root);
  write_file(root / "summary.csv", [&](std::ostream& out) { write_summary_csv(out, results); });
  write_file(root / "results.csv", [&](std::ostream& out) { write_results_csv(out, results); });

  if (!results.traces.empty()) {
    const fs::path traces = root / "traces";
    ensure_directory(traces);
    for (std::size_t i = 0; i < results.instances.size(); ++i) {
      for (std::size_t s = 0; s < results.solvers.size(); ++s) {
        const fs::path path = traces / trace_file_name(results.instances[i], results.solvers[s]);
        write_file(path, [&](std::ostream& out) {
          write_trace_csv(out, results.traces[results.index(i, s)]);
        });
      }
    }
  }

  for (const auto& prof : profiles) {
    const fs::path path = root / (std::string("profile_") + to_string(prof.metric) + ".svg");
    write_file(path, [&](std::ostream& out) { write_profile_svg(out, prof); });
  }

  write_file(root / "manifest.txt", [&](std::ostream& out) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    out << "software = mofw " << kVersion << '\n';
    out << "compiler = " << __VERSION__ << '\n';
    out << "created = " << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ") << '\n';
    out << "instances = " << results.instances.size() << '\n';
    out << "runs = " << results.cells.size() << '\n';
    out << "instance_seeds =";
    for (const auto& key : results.instances) out << ' ' << key.dims.label() << ':' << key.seed;
    out << '\n';
    if (plan) {
      out << "# plan\n";
      write_plan(out, *plan);
    }
    for (const auto& prof : profiles)
      for (const auto& w : prof.warnings) out << "# profile " << to_string(prof.metric) << ": " << w << '\n';
  });
}

}  // namespace mofw
