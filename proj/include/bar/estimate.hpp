#pragma once

// Maximum-likelihood and closed-form least-squares estimators.
//
// The rescaled log-likelihood separates over nodes, so every estimator
// solves p independent row problems. The term log P_X(0)(x(0)) does not
// depend on the parameters and is left out of every objective.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bar/model.hpp"
#include "bar/stats.hpp"

namespace bar {

/// A precondition of an estimator does not hold for the given data.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A marginal probability left (0, 1) on a visited state.
class LikelihoodDomainError : public std::domain_error {
 public:
  LikelihoodDomainError(int node, State state, double value);
  int node() const { return node_; }
  State state() const { return state_; }

 private:
  int node_;
  State state_;
};

struct LikelihoodValue {
  double total = 0.0;
  Vector per_node;
};

LikelihoodValue log_likelihood(const TransitionCounts& counts, const MarginalModel& model);
LikelihoodValue log_likelihood(const TransitionCounts& counts, const ReparamPositive& rep);
LikelihoodValue log_likelihood(const TransitionCounts& counts, const ReparamSigned& rep);
LikelihoodValue log_likelihood(const TransitionCounts& counts, const Model& model);

/// sum_{u,v} (N_uv / T) log p_uv, evaluated with full transition probabilities.
double log_likelihood_pairwise(const TransitionCounts& counts, const MarginalModel& model);

/// Gradient of the rescaled log-likelihood in the coordinates of `rep`.
ReparamPositive log_likelihood_gradient(const TransitionCounts& counts, const ReparamPositive& rep);
ReparamSigned log_likelihood_gradient(const TransitionCounts& counts, const ReparamSigned& rep);

struct OptimizerOptions {
  int max_iters = 10000;
  double grad_tolerance = 1e-8;
  double initial_step = 1.0;
  double shrink = 0.5;
  double armijo = 1e-4;
  /// Start each line search from the Barzilai-Borwein step instead of initial_step.
  bool spectral_step = true;
  double projection_tolerance = 1e-9;
  bool parallel = true;
};

struct EstimateDiagnostics {
  std::string method;
  int iterations = 0;  // max over nodes
  std::vector<int> node_iterations;
  bool converged = true;
  int rank = -1;  // rank of U_m (closed form)
  int visited_states = 0;
  double projection_displacement = 0.0;
  bool projection_moved = false;
  std::vector<std::string> active_constraints;
};

struct EstimateResult {
  Model params;
  std::variant<ReparamPositive, ReparamSigned> reparam;
  bool converged = true;
  int iterations = 0;
  LikelihoodValue likelihood;
  EstimateDiagnostics diagnostics;
  /// Closed form only: (A, c) or (A_bar, c_bar) before projection.
  std::optional<MarginalModel> unprojected;
};

EstimateResult ml_estimate(const TransitionCounts& counts, const SpaceConfig& config,
                           const OptimizerOptions& opts = {});

/// Signed model. Optimizes over the lifted convex set
/// {(a, a_tilde, c) : a, a_tilde >= 0, sum(a + a_tilde) <= 1 - b_min,
///  rho_min b <= c <= rho_max b}, which is the signed space without the
/// disjoint-support condition, then removes overlapping mass and projects
/// onto the signed space with the resulting sign pattern.
EstimateResult ml_estimate_generic(const TransitionCounts& counts, const SpaceConfig& config,
                                   const OptimizerOptions& opts = {});

struct ClosedFormOptions {
  /// Replace c_hat by its mean (all nodes share one noise probability).
  bool shared_noise = false;
};

EstimateResult closed_form_estimate(const TransitionCounts& counts, const DesignMatrix& design,
                                    const SpaceConfig& config, const ClosedFormOptions& opts = {});

EstimateResult closed_form_estimate_generic(const TransitionCounts& counts, const DesignMatrix& design,
                                            const SpaceConfig& config);

}  // namespace bar
