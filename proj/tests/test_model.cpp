#include <gtest/gtest.h>

#include "bar/model.hpp"
#include "test_util.hpp"

namespace bar {
namespace {

BarParams example_params() {
  Matrix A(2, 2);
  A << 0.5, 0.0, 0.25, 0.25;
  Vector b(2), rho(2);
  b << 0.5, 0.5;
  rho << 0.5, 0.4;
  return {A, b, rho};
}

GenericBarParams example_generic() {
  Matrix A(2, 2), At(2, 2);
  A << 0.5, 0.0, 0.0, 0.0;
  At << 0.0, 0.2, 0.0, 0.3;
  Vector b(2), rho(2);
  b << 0.3, 0.7;
  rho << 0.5, 0.5;
  return {A, At, b, rho};
}

TEST(SpaceConfig, RejectsBadBounds) {
  EXPECT_NO_THROW((SpaceConfig{3, 0.2, 0.2, 0.8}.check()));
  EXPECT_THROW((SpaceConfig{0, 0.2, 0.2, 0.8}.check()), std::invalid_argument);
  EXPECT_THROW((SpaceConfig{2, 1.0, 0.2, 0.8}.check()), std::invalid_argument);
  EXPECT_THROW((SpaceConfig{2, 0.2, 0.8, 0.2}.check()), std::invalid_argument);
  EXPECT_THROW((SpaceConfig{2, 0.2, 0.0, 0.8}.check()), std::invalid_argument);
}

TEST(Validate, HandCheckedExampleIsValid) {
  EXPECT_TRUE(validate(example_params(), testing::wide_config(2)).ok());
}

TEST(Validate, PureNoiseChainIsValid) {
  const int p = 3;
  BarParams params{Matrix::Zero(p, p), Vector::Ones(p), Vector::Constant(p, 0.5)};
  EXPECT_TRUE(validate(params, SpaceConfig{p}).ok());
}

TEST(Validate, NamesTheRowWhoseSumExceedsOne) {
  BarParams params = example_params();
  params.A(0, 0) = 0.9;
  params.b(0) = 0.2;
  const ValidationReport report = validate(params, testing::wide_config(2));
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.violations.front(), "row 1 sum != 1");
}

TEST(Validate, ReportsEachViolatedConstraint) {
  BarParams params = example_params();
  params.A(1, 0) = -0.25;
  params.b(1) = 1.0;
  params.rho_w(1) = 0.95;
  const ValidationReport report = validate(params, testing::wide_config(2));
  EXPECT_EQ(report.violations.size(), 2u);
  for (const auto& v : report.violations) EXPECT_EQ(v.rfind("row 2", 0), 0u) << v;
  params = example_params();
  params.b(0) = 0.05;
  params.A(0, 0) = 0.95;
  EXPECT_FALSE(validate(params, testing::wide_config(2)).ok());
}

TEST(Validate, DimensionMismatchThrows) {
  BarParams params = example_params();
  params.rho_w = Vector::Constant(3, 0.5);
  EXPECT_THROW(validate(params, testing::wide_config(2)), std::invalid_argument);
  EXPECT_THROW(validate(example_params(), testing::wide_config(3)), std::invalid_argument);
}

TEST(Validate, GenericRequiresDisjointSupports) {
  EXPECT_TRUE(validate(example_generic(), testing::wide_config(2)).ok());
  GenericBarParams g = example_generic();
  g.A(0, 1) = 0.1;
  g.A_tilde(0, 1) = 0.1;
  g.b(0) = 0.3;
  const ValidationReport report = validate(g, testing::wide_config(2));
  ASSERT_FALSE(report.ok());
  bool overlap = false;
  for (const auto& v : report.violations) overlap = overlap || v.find("overlapping") != std::string::npos;
  EXPECT_TRUE(overlap);
}

TEST(Reparam, ElementwiseProduct) {
  const ReparamPositive rep = to_reparam(example_params());
  EXPECT_DOUBLE_EQ(rep.c(0), 0.25);
  EXPECT_DOUBLE_EQ(rep.c(1), 0.2);
  EXPECT_EQ(rep.A, example_params().A);
}

TEST(Reparam, ZeroWeightsGiveCEqualRho) {
  const int p = 3;
  Vector rho(p);
  rho << 0.3, 0.5, 0.7;
  const ReparamPositive rep = to_reparam(BarParams{Matrix::Zero(p, p), Vector::Ones(p), rho});
  EXPECT_EQ(rep.c, rho);
}

TEST(Reparam, RoundTripIsIdentity) {
  const BarParams back = from_reparam(to_reparam(example_params()), testing::wide_config(2));
  EXPECT_LE((back.b - example_params().b).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((back.rho_w - example_params().rho_w).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(back.A, example_params().A);

  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 1 + trial % 6;
    const SpaceConfig config{p};
    const BarParams params = testing::random_params(p, config, rng);
    const BarParams rt = from_reparam(to_reparam(params), config);
    EXPECT_LE((rt.b - params.b).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((rt.rho_w - params.rho_w).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Reparam, ZeroNoiseWeightIsSingular) {
  ReparamPositive rep{Matrix::Constant(1, 1, 1.0), Vector::Constant(1, 0.0)};
  EXPECT_THROW(from_reparam(rep, testing::wide_config(1)), std::domain_error);
}

TEST(ReparamSigned, HandEvaluation) {
  const ReparamSigned rep = to_reparam_signed(example_generic());
  EXPECT_DOUBLE_EQ(rep.A_bar(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(rep.A_bar(0, 1), -0.2);
  EXPECT_NEAR(rep.c_bar(0), 0.35, 1e-15);
}

TEST(ReparamSigned, ReducesToPositiveWhenATildeIsZero) {
  const BarParams params = example_params();
  const ReparamSigned s =
      to_reparam_signed(GenericBarParams{params.A, Matrix::Zero(2, 2), params.b, params.rho_w});
  const ReparamPositive r = to_reparam(params);
  EXPECT_EQ(s.A_bar, r.A);
  EXPECT_EQ(s.c_bar, r.c);
}

TEST(ReparamSigned, RoundTripIsIdentity) {
  const GenericBarParams g = example_generic();
  const GenericBarParams back = from_reparam_signed(to_reparam_signed(g), testing::wide_config(2));
  EXPECT_EQ(back.A, g.A);
  EXPECT_EQ(back.A_tilde, g.A_tilde);
  EXPECT_LE((back.b - g.b).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((back.rho_w - g.rho_w).cwiseAbs().maxCoeff(), 1e-14);

  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 1 + trial % 5;
    const SpaceConfig config{p};
    const GenericBarParams params = testing::random_generic(p, config, rng);
    const GenericBarParams rt = from_reparam_signed(to_reparam_signed(params), config);
    EXPECT_LE((rt.b - params.b).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((rt.rho_w - params.rho_w).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(rt.A.cwiseProduct(rt.A_tilde).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(MarginalModel, BothVariantsGiveAffineSuccessProbabilities) {
  const MarginalModel m = marginal_model(example_params());
  EXPECT_DOUBLE_EQ(m.success_prob(0, 0), 0.25);
  EXPECT_DOUBLE_EQ(m.success_prob(1, 3), 0.7);

  const MarginalModel g = marginal_model(example_generic());
  // a_bar_1 = [0.5, -0.2], c_bar_1 = 0.35, x = (0, 1)
  EXPECT_NEAR(g.success_prob(0, 0b10), 0.15, 1e-15);
}

TEST(RowSumIdentity, HoldsForRandomValidParams) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + trial % 8;
    const SpaceConfig config{p};
    const GenericBarParams g = testing::random_generic(p, config, rng);
    const Vector sums = (g.A + g.A_tilde).rowwise().sum() + g.b;
    EXPECT_LE((sums.array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_TRUE(validate(g, config).ok());
  }
}

TEST(GraphSpec, RejectsInfeasibleDegreeWeightCombination) {
  const SpaceConfig config{10};
  EXPECT_NO_THROW((GraphSpec{10, 5, 0.1}.check(config)));
  EXPECT_THROW((GraphSpec{10, 5, 0.2}.check(config)), std::invalid_argument);
  EXPECT_THROW((GraphSpec{10, 11, 0.01}.check(config)), std::invalid_argument);
  EXPECT_THROW((GraphSpec{10, 0, 0.1}.check(config)), std::invalid_argument);
}

}  // namespace
}  // namespace bar
