#pragma once

// Exhaustive-state analysis of small BAR chains: the 2^p x 2^p transition
// matrix, its stationary distribution, the entropy rate, and the helpers
// used to compare empirical and exact transition laws.

#include <optional>
#include <span>

#include "bar/model.hpp"
#include "bar/stats.hpp"

namespace bar {

inline constexpr int kMaxExactNodes = 14;
inline constexpr int kMaxDenseNodes = 12;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double transition_prob(const MarginalModel& model, State u, State v);
double transition_prob(const Model& model, State u, State v);

/// Fills row u of P (length 2^p) using the product form of the transition law.
void transition_row(const MarginalModel& model, State u, std::span<double> row);

struct StationaryOptions {
  double residual_tol = 1e-13;
  int max_iters = 1'000'000;
  double agreement_tol = 1e-10;
};

struct ExactChain {
  int p = 0;
  MarginalModel model;
  std::optional<RowMatrix> P;  // absent for the matrix-free range p in {13, 14}
  Vector pi;                   // power iteration
  Vector pi_direct;            // linear solve; empty when matrix-free
  int power_iterations = 0;
  double method_gap = 0.0;     // max |pi - pi_direct|
  double stationarity_residual = 0.0;

  std::size_t states() const { return std::size_t{1} << p; }
  bool dense() const { return P.has_value(); }
  double prob(State u, State v) const;
};

/// Throws std::invalid_argument for p > 14 and std::runtime_error when the
/// two stationary solvers disagree beyond `agreement_tol`.
ExactChain build_chain(const Model& model, const StationaryOptions& opts = {});
ExactChain build_chain(const MarginalModel& model, const StationaryOptions& opts = {});

/// -sum_{u,v} pi_u p_uv log p_uv (natural log).
double entropy_rate(const ExactChain& chain);

/// Row u of the empirical transition matrix, uniform when u was never visited.
Vector empirical_row(const TransitionCounts& counts, State u);

/// D_KL(q || p); +infinity when q has mass where p has none.
double kl_divergence(std::span<const double> q, std::span<const double> p);
double tv_distance(std::span<const double> q, std::span<const double> p);

/// max_{u,v} |p_uv(theta) - p_uv(theta')| computed exhaustively.
double identifiability_probe(const Model& theta, const Model& theta_prime);

}  // namespace bar
