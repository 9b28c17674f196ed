#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bar/cli.hpp"
#include "bar/exact.hpp"
#include "bar/io.hpp"
#include "bar/stats.hpp"

namespace bar {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bar_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  static std::string slurp(const std::string& file) {
    std::ifstream is(file, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, GenerateWritesValidDeterministicFile) {
  ASSERT_EQ(run({"generate", "--p", "10", "--d-max", "5", "--seed", "3", "--out", path("a.json")}), 0);
  ASSERT_EQ(run({"generate", "--p", "10", "--d-max", "5", "--seed", "3", "--out", path("b.json")}), 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  const io::ParamFile f = io::read_params(path("a.json"));
  EXPECT_EQ(f.config.p, 10);
  EXPECT_TRUE(validate(f.params, f.config).ok());
}

TEST_F(CliTest, InfeasibleSpecFailsWithMessage) {
  EXPECT_EQ(run({"generate", "--p", "10", "--d-max", "5", "--a-min", "0.2", "--out", path("x.json")}), 2);
  EXPECT_NE(err_.str().find("infeasible"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitWithOne) {
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"generate"}), 1);
  EXPECT_EQ(run({"estimate", "--trajectory", path("missing.txt"), "--out", path("e.json")}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST_F(CliTest, SimulateBoundaryAndDeterminism) {
  ASSERT_EQ(run({"generate", "--p", "3", "--d-max", "2", "--seed", "1", "--out", path("g.json")}), 0);
  ASSERT_EQ(run({"simulate", "--params", path("g.json"), "--T", "0", "--out", path("t0.txt")}), 0);
  EXPECT_EQ(io::read_trajectory(fs::path(path("t0.txt"))).states.size(), 1u);
  for (const char* name : {"a.bin", "b.bin"}) {
    ASSERT_EQ(run({"simulate", "--params", path("g.json"), "--T", "500", "--seed", "9", "--format", "binary", "--out",
                   path(name)}),
              0);
  }
  EXPECT_EQ(slurp(path("a.bin")), slurp(path("b.bin")));
}

TEST_F(CliTest, SimulatedOccupancyMatchesExactLaw) {
  ASSERT_EQ(run({"generate", "--p", "4", "--d-max", "3", "--seed", "2", "--out", path("g.json")}), 0);
  ASSERT_EQ(run({"simulate", "--params", path("g.json"), "--T", "200000", "--seed", "5", "--format", "binary",
                 "--out", path("t.bin")}),
            0);
  const Trajectory traj = io::read_trajectory(fs::path(path("t.bin")));
  const TransitionCounts counts = count_transitions(traj);
  const ExactChain chain = build_chain(io::read_params(path("g.json")).params);
  for (State u = 0; u < 16; ++u) {
    EXPECT_NEAR(counts.visits(u) / 200000.0, chain.pi(static_cast<Eigen::Index>(u)), 0.01);
  }
}

TEST_F(CliTest, ClosedFormWithoutZeroStateFails) {
  {
    std::ofstream os(path("t.txt"));
    os << "p=2 T=3\n1 0\n1 1\n0 1\n1 1\n";
  }
  EXPECT_EQ(run({"estimate", "--trajectory", path("t.txt"), "--method", "closed-form", "--out", path("e.json")}), 2);
  EXPECT_NE(err_.str().find("closed-form requires a visit to the all-zeros state"), std::string::npos);
}

TEST_F(CliTest, MlOnOneNodeExample) {
  std::vector<State> states(46, 0);
  const int stays[15] = {2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1};
  for (int s : stays) {
    for (int k = 0; k <= s; ++k) states.push_back(1);
    states.push_back(0);
  }
  io::write_trajectory(fs::path(path("t.txt")), Trajectory{1, states}, io::TrajectoryFormat::text);
  ASSERT_EQ(run({"estimate", "--trajectory", path("t.txt"), "--method", "ml", "--b-min", "0.1", "--rho-min", "0.1",
                 "--rho-max", "0.9", "--out", path("e.json"), "--counts-out", path("counts.csv")}),
            0)
      << err_.str();
  EXPECT_EQ(slurp(path("counts.csv")), "u,v,count\n0,0,45\n0,1,15\n1,0,15\n1,1,25\n");
  const io::Json j = io::read_json(path("e.json"));
  const io::ParamFile f = io::params_from_json(j);
  EXPECT_TRUE(validate(f.params, f.config).ok());
  const auto& est = std::get<BarParams>(f.params);
  EXPECT_NEAR(est.A(0, 0), 0.375, 1e-8);
  EXPECT_NEAR(est.b(0) * est.rho_w(0), 0.25, 1e-8);
  EXPECT_EQ(j["diagnostics"]["method"], "ml");
  EXPECT_TRUE(j["diagnostics"]["converged"].get<bool>());
}

TEST_F(CliTest, EstimateOutputsValidateForEveryMethod) {
  ASSERT_EQ(run({"generate", "--p", "5", "--d-max", "3", "--signed", "--seed", "4", "--out", path("g.json")}), 0);
  ASSERT_EQ(run({"simulate", "--params", path("g.json"), "--T", "3000", "--seed", "5", "--out", path("t.txt")}), 0);
  for (const char* method : {"ml", "closed-form"}) {
    for (const char* variant : {"positive", "generic"}) {
      ASSERT_EQ(run({"estimate", "--trajectory", path("t.txt"), "--method", method, "--variant", variant, "--out",
                     path("e.json")}),
                0)
          << err_.str();
      const io::ParamFile f = io::read_params(path("e.json"));
      EXPECT_TRUE(validate(f.params, f.config).ok());
      EXPECT_EQ(is_signed(f.params), std::string(variant) == "generic");
      ASSERT_EQ(run({"score", "--truth", path("g.json"), "--estimate", path("e.json")}), 0);
      const io::Json s = io::Json::parse(out_.str());
      EXPECT_GE(s["f1"].get<double>(), 0.0);
      EXPECT_LE(s["f1"].get<double>(), 1.0);
    }
  }
}

TEST_F(CliTest, ExactDumpsChain) {
  ASSERT_EQ(run({"generate", "--p", "3", "--d-max", "2", "--seed", "6", "--out", path("g.json")}), 0);
  ASSERT_EQ(run({"exact", "--params", path("g.json"), "--out-dir", path("chain")}), 0);
  const io::Json j = io::Json::parse(out_.str());
  EXPECT_GT(j["entropy_rate"].get<double>(), 0.0);
  EXPECT_LE(j["method_gap"].get<double>(), 1e-10);
  const std::string p = slurp(path("chain/transition.csv"));
  EXPECT_EQ(std::count(p.begin(), p.end(), '\n'), 65);
  const std::string pi = slurp(path("chain/stationary.csv"));
  EXPECT_EQ(std::count(pi.begin(), pi.end(), '\n'), 9);
}

TEST_F(CliTest, ExperimentRowCountAndDeterminism) {
  {
    std::ofstream os(path("x.json"));
    os << R"({"p": 5, "d_max": 2, "T": [400], "seeds": [1, 2], "estimators": ["ml"], "master_seed": 7})";
  }
  ASSERT_EQ(run({"experiment", "--config", path("x.json"), "--output-dir", path("run1")}), 0) << err_.str();
  ASSERT_EQ(run({"experiment", "--config", path("x.json"), "--output-dir", path("run2")}), 0);
  const std::string a = slurp(path("run1/results.csv"));
  EXPECT_EQ(a, slurp(path("run2/results.csv")));
  std::istringstream lines(a);
  std::string line;
  int data = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("positive,", 0) == 0) ++data;
  }
  EXPECT_EQ(data, 2);
  EXPECT_NE(a.find("b_min=0.2"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("run1/summary.csv")));
  EXPECT_TRUE(fs::exists(path("run1/f1.dat")));
}

TEST_F(CliTest, BadExperimentConfigIsAPreconditionFailure) {
  {
    std::ofstream os(path("x.json"));
    os << R"({"p": 5, "T": [], "seeds": [1]})";
  }
  EXPECT_EQ(run({"experiment", "--config", path("x.json")}), 2);
}

}  // namespace
}  // namespace bar
