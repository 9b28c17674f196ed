#include <gtest/gtest.h>

#include "bar/evaluate.hpp"
#include "test_util.hpp"

namespace bar {
namespace {

EdgeSet edges(int p, std::initializer_list<std::pair<int, int>> list) {
  EdgeSet out{p, {}};
  for (auto [j, i] : list) out.insert(j, i);
  return out;
}

TEST(TrueEdges, SupportOfA) {
  Matrix A = Matrix::Zero(2, 2);
  A(0, 1) = 0.3;
  const Model m = BarParams{A, (Vector(2) << 0.7, 1.0).finished(), Vector::Constant(2, 0.5)};
  EXPECT_EQ(true_edges(m).edges, edges(2, {{1, 0}}).edges);
  const Model zero = BarParams{Matrix::Zero(2, 2), Vector::Ones(2), Vector::Constant(2, 0.5)};
  EXPECT_TRUE(true_edges(zero).edges.empty());
}

TEST(TrueEdges, GenericUnionOfSupports) {
  Matrix A(2, 2), At(2, 2);
  A << 0.5, 0.0, 0.0, 0.0;
  At << 0.0, 0.2, 0.0, 0.3;
  const Model m = GenericBarParams{A, At, (Vector(2) << 0.3, 0.7).finished(), Vector::Constant(2, 0.5)};
  EXPECT_EQ(true_edges(m).edges, edges(2, {{0, 0}, {1, 0}, {1, 1}}).edges);
}

TEST(InferEdges, ThresholdArithmetic) {
  Matrix A = Matrix::Zero(2, 2);
  A(0, 1) = 0.09;
  A(1, 0) = 0.04;
  const Model m = BarParams{A, (Vector(2) << 0.91, 0.96).finished(), Vector::Constant(2, 0.5)};
  EXPECT_EQ(infer_edges(m, 0.1, 0.5).edges, edges(2, {{1, 0}}).edges);
  const Model zero = BarParams{Matrix::Zero(2, 2), Vector::Ones(2), Vector::Constant(2, 0.5)};
  EXPECT_TRUE(infer_edges(zero, 0.1, 0.5).edges.empty());
  EXPECT_THROW(infer_edges(m, 0.1, 1.0), std::invalid_argument);
}

TEST(InferEdges, ExactEstimatesRecoverTheTruth) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 2 + trial % 5;
    const GenericBarParams g = testing::random_generic(p, SpaceConfig{p}, rng);
    double a_min = 1.0;
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        const double w = g.A(i, j) + g.A_tilde(i, j);
        if (w > 0.0) a_min = std::min(a_min, w);
      }
    }
    if (a_min >= 1.0) continue;
    EXPECT_EQ(infer_edges(g, a_min, 0.999).edges, true_edges(g).edges);
  }
}

TEST(InferEdges, LoweringTheThresholdNeverRemovesEdges) {
  Rng rng(2);
  const GenericBarParams g = testing::random_generic(6, SpaceConfig{6}, rng);
  EdgeSet previous = infer_edges(g, 0.5, 0.99);
  for (double c = 0.9; c > 0.01; c -= 0.05) {
    const EdgeSet now = infer_edges(g, 0.5, c);
    for (const auto& e : previous.edges) EXPECT_TRUE(now.edges.count(e));
    previous = now;
  }
}

TEST(Score, PerfectRecovery) {
  const EdgeSet t = edges(3, {{0, 1}, {2, 1}});
  const ScoreReport r = score(t, t);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.f1, 1.0);
}

TEST(Score, DefinitionArithmetic) {
  // {(1,2),(2,1)} vs {(1,2),(1,1)} in 1-based labels
  const ScoreReport r = score(edges(2, {{0, 1}, {1, 0}}), edges(2, {{0, 1}, {0, 0}}));
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
  EXPECT_DOUBLE_EQ(r.f1, 0.5);
  EXPECT_EQ(r.true_positives, 1u);
  EXPECT_EQ(r.false_positives, 1u);
  EXPECT_EQ(r.false_negatives, 1u);
}

TEST(Score, DisjointAndEmptyConventions) {
  EXPECT_EQ(score(edges(2, {{0, 1}}), edges(2, {{1, 0}})).f1, 0.0);
  const ScoreReport empty_inferred = score(edges(2, {{0, 1}}), edges(2, {}));
  EXPECT_EQ(empty_inferred.precision, 0.0);
  EXPECT_EQ(empty_inferred.recall, 0.0);
  EXPECT_EQ(empty_inferred.f1, 0.0);
  const ScoreReport both_empty = score(edges(2, {}), edges(2, {}));
  EXPECT_EQ(both_empty.recall, 1.0);
  EXPECT_EQ(both_empty.precision, 0.0);
  EXPECT_EQ(both_empty.f1, 0.0);
  EXPECT_EQ(score(edges(2, {}), edges(2, {{0, 0}})).recall, 0.0);
  EXPECT_THROW(score(edges(2, {}), edges(3, {})), std::invalid_argument);
}

TEST(Score, HarmonicMeanPropertiesOnRandomSets) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int p = 4;
    EdgeSet a{p, {}}, b{p, {}};
    for (int j = 0; j < p; ++j) {
      for (int i = 0; i < p; ++i) {
        if (rng.uniform() < 0.3) a.insert(j, i);
        if (rng.uniform() < 0.3) b.insert(j, i);
      }
    }
    const ScoreReport r = score(a, b);
    const ScoreReport swapped = score(b, a);
    if (r.precision > 0 && r.recall > 0) {
      EXPECT_NEAR(r.f1, 2.0 / (1.0 / r.precision + 1.0 / r.recall), 1e-15);
      EXPECT_GE(r.f1, std::min(r.precision, r.recall) - 1e-15);
      EXPECT_LE(r.f1, std::max(r.precision, r.recall) + 1e-15);
      EXPECT_NEAR(swapped.precision, r.recall, 1e-15);
      EXPECT_NEAR(swapped.recall, r.precision, 1e-15);
      EXPECT_NEAR(swapped.f1, r.f1, 1e-15);
    }
  }
}

TEST(ParameterErrors, MaxAbsAndFrobenius) {
  Matrix A(2, 2);
  A << 0.5, 0.0, 0.25, 0.25;
  const BarParams t{A, (Vector(2) << 0.5, 0.5).finished(), (Vector(2) << 0.5, 0.4).finished()};
  BarParams e = t;
  e.A(0, 0) = 0.2;
  e.A(1, 1) = 0.65;
  e.b << 0.8, 0.1;
  e.rho_w << 0.6, 0.4;
  const ParameterErrors err = parameter_errors(t, e);
  EXPECT_NEAR(err.max_abs_A, 0.4, 1e-15);
  EXPECT_NEAR(err.frob_A, 0.5, 1e-15);
  EXPECT_NEAR(err.max_abs_b, 0.4, 1e-15);
  EXPECT_NEAR(err.max_abs_rho, 0.1, 1e-15);
  EXPECT_EQ(err.max_abs_A_tilde, 0.0);
}

}  // namespace
}  // namespace bar
