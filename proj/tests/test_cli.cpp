#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mofw/cli.hpp"

namespace mofw {
namespace {

namespace fs = std::filesystem;

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mofw");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  return cli::run(static_cast<int>(args.size()), argv.data());
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mofw_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Cli, SolveWritesTrace) {
  const fs::path dir = scratch_dir("solve");
  const fs::path trace = dir / "trace.csv";
  EXPECT_EQ(run_cli({"solve", "--problem", "quad", "--p", "10", "--n", "10", "--m", "2", "--seed",
                     "3", "--solver", "dipfw", "--eps", "1e-4", "--max-iter", "500", "--trace",
                     trace.string()}),
            cli::kSuccess);
  std::ifstream in(trace);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("k,theta_pw,theta_fw,", 0), 0u);
}

TEST(Cli, SolveEverySolver) {
  for (const char* s : {"fw", "afw", "dipfw", "pg"})
    EXPECT_EQ(run_cli({"solve", "--n", "5", "--p", "6", "--solver", s, "--max-iter", "50"}),
              cli::kSuccess)
        << s;
}

TEST(Cli, SolveOnInstanceAndPolytopeFiles) {
  const fs::path dir = scratch_dir("files");
  const fs::path inst = dir / "inst.txt";
  EXPECT_EQ(run_cli({"solve", "--n", "2", "--p", "3", "--solver", "dipfw", "--save-instance",
                     inst.string()}),
            cli::kSuccess);
  const fs::path poly = dir / "box.txt";
  std::ofstream(poly) << "2 4 0\n1 0 1\n0 1 1\n-1 0 0\n0 -1 0\n";
  EXPECT_EQ(run_cli({"solve", "--instance", inst.string(), "--polytope", poly.string(), "--solver",
                     "dipfw"}),
            cli::kSuccess);
  EXPECT_EQ(run_cli({"solve", "--instance", inst.string(), "--polytope", poly.string(), "--solver",
                     "pg"}),
            cli::kUsage);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}), cli::kUsage);
  EXPECT_EQ(run_cli({"solve"}), cli::kUsage);
  EXPECT_EQ(run_cli({"solve", "--solver", "simplex"}), cli::kUsage);
  EXPECT_EQ(run_cli({"solve", "--solver", "pg", "--eps", "-1"}), cli::kUsage);
  EXPECT_EQ(run_cli({"solve", "--solver", "pg", "--step-mode", "wild"}), cli::kUsage);
  EXPECT_EQ(run_cli({"frobnicate"}), cli::kUsage);
  EXPECT_EQ(run_cli({"--help"}), cli::kSuccess);
}

TEST(Cli, IoErrors) {
  EXPECT_EQ(run_cli({"solve", "--solver", "dipfw", "--trace", "/nonexistent/dir/t.csv"}),
            cli::kIoError);
  EXPECT_EQ(run_cli({"solve", "--solver", "dipfw", "--instance", "/nonexistent/i.txt"}),
            cli::kIoError);
  EXPECT_EQ(run_cli({"bench", "--config", "/nonexistent/plan.txt"}), cli::kIoError);
  EXPECT_EQ(run_cli({"profile", "--in", "/nonexistent", "--svg", "/tmp/x.svg"}), cli::kIoError);
}

TEST(Cli, BenchThenProfile) {
  const fs::path dir = scratch_dir("bench");
  const fs::path plan = dir / "plan.txt";
  std::ofstream(plan) << "dims = 8,6,2\nseeds = 1..3\nsolvers = dipfw, pg\nmax_iter = 500\n";
  const fs::path out = dir / "out";
  EXPECT_EQ(run_cli({"bench", "--config", plan.string(), "--out", out.string(), "--jobs", "2"}),
            cli::kSuccess);
  EXPECT_TRUE(fs::exists(out / "summary.csv"));
  EXPECT_TRUE(fs::exists(out / "profile_iters.svg"));
  EXPECT_TRUE(fs::exists(out / "profile_time.svg"));
  const fs::path svg = dir / "again.svg";
  EXPECT_EQ(run_cli({"profile", "--in", out.string(), "--metric", "iters", "--svg", svg.string()}),
            cli::kSuccess);
  EXPECT_TRUE(fs::exists(svg));
  EXPECT_EQ(run_cli({"profile", "--in", (out / "results.csv").string(), "--metric", "parsecs",
                     "--svg", svg.string()}),
            cli::kUsage);
}

TEST(Cli, BadPlanIsUsageError) {
  const fs::path dir = scratch_dir("badplan");
  const fs::path plan = dir / "plan.txt";
  std::ofstream(plan) << "dims = 8,6\nseeds = 1\nsolvers = pg\n";
  EXPECT_EQ(run_cli({"bench", "--config", plan.string()}), cli::kUsage);
}

}  // namespace
}  // namespace mofw
