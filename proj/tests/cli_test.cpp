#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("extremal_cli_" + std::string(::testing::UnitTest::GetInstance()
                                              ->current_test_info()
                                              ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  static std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  RunResult run(const std::string& args) {
    const auto out = dir_ / "stdout.txt";
    const auto err = dir_ / "stderr.txt";
    const std::string cmd = std::string(EXTREMAL_CLI_PATH) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

const char* kUnitCenter = R"({"matrix":[[1,0],[0,1]],"x0":[2,0],"epsilon":1})";
const char* kCounterexample = R"({"matrix":[[1,0],[0,1]],"x0":[2,-2],"epsilon":1})";

TEST_F(Cli, SolveEmitsRecord) {
  const auto r = run("solve --problem " + write("p.json", kUnitCenter));
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["y"][0].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(doc["y"][1].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(doc["r"].get<double>(), -1.0, 1e-12);
  EXPECT_TRUE(doc["kkt"]["multiplier_sign_ok"].get<bool>());
  EXPECT_GT(doc["iterations"].get<int>(), 0);
}

TEST_F(Cli, SweepDirectionReproducesCounterexample) {
  const auto r = run("sweep-dir --problem " + write("p.json", kCounterexample) +
                     " --direction 0,2 --grid 0,3,61");
  ASSERT_EQ(r.status, 0) << r.err;
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "param,y_norm,r,residual");
  ASSERT_EQ(rows.size(), 61u);
  for (const auto& row : rows) {
    const double t = row[0];
    EXPECT_NEAR(row[1], 2 * std::sqrt((t - 1) * (t - 1) + 1) - 1, 1e-8);
  }
}

TEST_F(Cli, EpsilonOutOfRangeExitsTwo) {
  const auto r = run("solve --problem " +
                     write("p.json", R"({"matrix":[[1,0],[0,1]],"x0":[2,-2],"epsilon":3})"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("epsilon_out_of_range"), std::string::npos) << r.err;
}

TEST_F(Cli, ValidationFailuresExitTwo) {
  EXPECT_EQ(run("solve --problem " + (dir_ / "missing.json").string()).status, 2);
  EXPECT_EQ(run("solve --problem " + write("bad.json", "{oops")).status, 2);
  EXPECT_EQ(run("solve --problem " +
                write("inf.json", R"({"matrix":[[1,0],[0,0]],"x0":[0,1],"epsilon":0.5})"))
                .status,
            2);
  const auto p = write("p.json", kCounterexample);
  EXPECT_EQ(run("sweep-eps --problem " + p + " --grid 0.5,3,4").status, 2);
  EXPECT_EQ(run("sweep-eps --problem " + p + " --grid 0.5,1").status, 2);
  EXPECT_EQ(run("sweep-dir --problem " + p + " --grid 0,1,3").status, 2);
  EXPECT_EQ(run("frobnicate --problem " + p).status, 2);
  const auto r = run("sweep-ray --problem " + p + " --grid 0.1,1,3");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("t=1.0000000000000001e-01"), std::string::npos) << r.err;
}

TEST_F(Cli, ConvergenceFailureExitsThree) {
  const auto r = run("solve --max-iter 1 --problem " +
                     write("p.json", R"({"matrix":[[1,0],[0,100]],"x0":[1,1e-3],"epsilon":1e-6})"));
  EXPECT_EQ(r.status, 3) << r.out << r.err;
  EXPECT_NE(r.err.find("max_iterations_exceeded"), std::string::npos);
}

TEST_F(Cli, OutputIsDeterministic) {
  const auto p = write("p.json", kCounterexample);
  const std::string args = "sweep-eps --problem " + p + " --grid 0.01,2.8,40 --log-grid";
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(parse_csv(a.out, nullptr).size(), 40u);
}

TEST_F(Cli, VerifyRePassesEmittedSolution) {
  const auto p = write("p.json",
                       R"({"matrix":[[2,1,0],[0,1,3],[1,0,1]],"x0":[1,-2,0.5],"epsilon":0.7})");
  const auto solution = (dir_ / "solution.json").string();
  ASSERT_EQ(run("solve --problem " + p + " --out " + solution).status, 0);
  const auto r = run("verify --problem " + p + " --solution " + solution);
  ASSERT_EQ(r.status, 0) << r.err;
  const auto kkt = nlohmann::json::parse(r.out);
  EXPECT_LE(kkt["collinearity_residual"].get<double>(), 1e-8);
  EXPECT_LE(kkt["boundary_gap"].get<double>(), 1e-10);

  const auto listed = run("verify --problem " + write("q.json", kUnitCenter) + " --y 1,0");
  ASSERT_EQ(listed.status, 0);
  EXPECT_EQ(nlohmann::json::parse(listed.out)["multiplier"].get<double>(), -1.0);
}

TEST_F(Cli, ComplexProblemRoundTrip) {
  const auto p = write("c.json",
                       R"({"field":"complex","matrix":[[[1,1],[0,0]],[[0,0],[2,-1]]],"x0":[[1,0],[0,2]],"epsilon":0.5})");
  const auto solution = (dir_ / "solution.json").string();
  ASSERT_EQ(run("solve --problem " + p + " --out " + solution).status, 0);
  const auto doc = nlohmann::json::parse(slurp(solution));
  EXPECT_EQ(doc["field"], "complex");
  EXPECT_EQ(doc["y"][0].size(), 2u);
  const auto r = run("verify --problem " + p + " --solution " + solution);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_LE(nlohmann::json::parse(r.out)["collinearity_residual"].get<double>(), 1e-8);
}

TEST_F(Cli, OracleCompareAllPass) {
  const auto r = run("oracle-compare --problem " +
                     write("d.json", R"({"matrix":[[1,0],[0,2]],"x0":[1,1],"epsilon":0.5})") +
                     " --seed 7 --samples 100000");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["comparisons"].size(), 3u);
  for (const auto& c : doc["comparisons"]) EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
}

TEST_F(Cli, Probes) {
  const auto p = write("d.json", R"({"matrix":[[1,0],[0,2]],"x0":[1,1],"epsilon":0.5})");
  auto r = run("probe-smoothness --problem " + p);
  ASSERT_EQ(r.status, 0) << r.err;
  std::string header;
  auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "step,measurement");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_DOUBLE_EQ(rows[3][0], 1.25e-3);

  r = run("probe-continuity --problem " + p + " --direction 1,1 --grid 0.1,0.0001,4 --log-grid");
  ASSERT_EQ(r.status, 0) << r.err;
  rows = parse_csv(r.out, nullptr);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_LE(rows.back()[1], 1e-2 * rows.front()[1]);

  EXPECT_EQ(run("probe-continuity --problem " + p + " --direction 0,0").status, 2);
}

}  // namespace
