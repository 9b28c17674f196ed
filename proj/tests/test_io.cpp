#include <gtest/gtest.h>

#include <sstream>

#include "bar/io.hpp"
#include "test_util.hpp"

namespace bar {
namespace {

TEST(ParamJson, RoundTripBothVariants) {
  Rng rng(1);
  const SpaceConfig config{4, 0.15, 0.25, 0.75};
  for (bool generic : {false, true}) {
    const Model m = generic ? Model(testing::random_generic(4, config, rng))
                            : Model(testing::random_params(4, config, rng));
    const io::Json j = io::to_json(m, config);
    EXPECT_EQ(j.contains("A_tilde"), generic);
    const io::ParamFile back = io::params_from_json(io::Json::parse(j.dump()));
    EXPECT_EQ(back.config.b_min, 0.15);
    EXPECT_EQ(back.config.rho_max, 0.75);
    const GenericBarParams a = as_generic(m);
    const GenericBarParams b = as_generic(back.params);
    EXPECT_EQ(is_signed(back.params), generic);
    EXPECT_EQ(a.A, b.A);
    EXPECT_EQ(a.A_tilde, b.A_tilde);
    EXPECT_EQ(a.b, b.b);
    EXPECT_EQ(a.rho_w, b.rho_w);
  }
}

TEST(ParamJson, SchemaKeysInOrder) {
  const Model m = BarParams{Matrix::Zero(1, 1), Vector::Ones(1), Vector::Constant(1, 0.5)};
  const io::Json j = io::to_json(m, SpaceConfig{1});
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"p", "A", "b", "rho_w", "config"}));
}

TEST(ParamJson, MalformedFilesAreFormatErrors) {
  EXPECT_THROW(io::params_from_json(io::Json::parse(R"({"p": 2, "A": [[0]], "b": [1], "rho_w": [0.5]})")),
               io::FormatError);
  EXPECT_THROW(io::params_from_json(io::Json::parse(R"({"A": [[0]]})")), io::FormatError);
}

TEST(Trajectory, TextFormatLayout) {
  const Trajectory traj{3, {0, 1, 6}};
  std::ostringstream os;
  io::write_trajectory(os, traj, io::TrajectoryFormat::text);
  EXPECT_EQ(os.str(), "p=3 T=2\n0 0 0\n1 0 0\n0 1 1\n");
  std::istringstream is(os.str());
  EXPECT_EQ(io::read_trajectory(is).states, traj.states);
}

TEST(Trajectory, BinaryRoundTripAndHeader) {
  Rng rng(2);
  Trajectory traj{40, {}};
  for (int k = 0; k < 100; ++k) traj.states.push_back(rng() & ((State{1} << 40) - 1));
  std::ostringstream os;
  io::write_trajectory(os, traj, io::TrajectoryFormat::binary);
  const std::string bytes = os.str();
  ASSERT_EQ(bytes.size(), 16u + 8u * 100u);
  EXPECT_EQ(bytes.substr(0, 4), "BART");
  EXPECT_EQ(static_cast<unsigned char>(bytes[6]), 40u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 99u);
  std::istringstream is(bytes);
  const Trajectory back = io::read_trajectory(is);
  EXPECT_EQ(back.p, 40);
  EXPECT_EQ(back.states, traj.states);
}

TEST(Trajectory, SingleStateFile) {
  std::ostringstream os;
  io::write_trajectory(os, Trajectory{2, {3}}, io::TrajectoryFormat::text);
  EXPECT_EQ(os.str(), "p=2 T=0\n1 1\n");
}

TEST(Trajectory, RejectsMalformedText) {
  for (const char* text : {"p=2 T=1\n0 0\n", "p=2 T=0\n0 2\n", "p=2 T=0\n0 0 1\n", "nonsense\n"}) {
    std::istringstream is(text);
    EXPECT_THROW(io::read_trajectory(is), io::FormatError) << text;
  }
}

TEST(CountsCsv, SortedTriples) {
  std::ostringstream os;
  io::write_counts_csv(os, count_transitions(Trajectory{2, {0, 1, 0, 2, 0, 0}}));
  EXPECT_EQ(os.str(), "u,v,count\n0,0,1\n0,1,1\n0,2,1\n1,0,1\n2,0,1\n");
}

TEST(ChainCsv, LayoutAndValues) {
  const ExactChain chain = build_chain(MarginalModel{Matrix::Constant(1, 1, 0.5), Vector::Constant(1, 0.25)});
  std::ostringstream p, pi;
  io::write_transition_csv(p, chain);
  io::write_stationary_csv(pi, chain);
  EXPECT_EQ(p.str(), "state_u,state_v,prob\n0,0,0.75\n0,1,0.25\n1,0,0.25\n1,1,0.75\n");
  EXPECT_EQ(pi.str().substr(0, 9), "state,pi\n");
}

}  // namespace
}  // namespace bar
