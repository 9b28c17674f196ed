#include "bar/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bar/exact.hpp"
#include "bar/projection.hpp"

namespace bar {
namespace {

void check_counts(const TransitionCounts& counts, const SpaceConfig& config) {
  config.check();
  if (counts.p() != config.p) throw std::invalid_argument("counts and config disagree on p");
  if (counts.T() == 0) throw std::invalid_argument("estimator needs at least one transition");
}

// Visited states as 0/1 feature rows, ascending state order.
Matrix state_features(const std::vector<State>& states, int p, bool lifted) {
  const auto m = static_cast<Eigen::Index>(states.size());
  Matrix X(m, lifted ? 2 * p : p);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (int j = 0; j < p; ++j) {
      const double u = bit(states[static_cast<std::size_t>(k)], j);
      X(k, j) = u;
      if (lifted) X(k, p + j) = 1.0 - u;
    }
  }
  return X;
}

// One node's share of the likelihood: successes n1 and failures n0 per
// visited state, with theta = X z + c.
struct NodeProblem {
  const Matrix* X;
  Vector n1;
  Vector n0;
  double inv_T;
  RowBounds bounds;
};

struct NodeSolution {
  Vector z;
  double c = 0.0;
  int iterations = 0;
  bool converged = false;
};

NodeProblem node_problem(const TransitionCounts& counts, const std::vector<State>& states, const Matrix& X,
                         int node, const RowBounds& bounds) {
  NodeProblem prob{&X, Vector(X.rows()), Vector(X.rows()), 1.0 / static_cast<double>(counts.T()), bounds};
  for (Eigen::Index k = 0; k < X.rows(); ++k) {
    const StateTally& tally = counts.tallies().at(states[static_cast<std::size_t>(k)]);
    const auto ones = tally.ones[static_cast<std::size_t>(node)];
    prob.n1(k) = static_cast<double>(ones);
    prob.n0(k) = static_cast<double>(tally.visits - ones);
  }
  return prob;
}

void node_gradient(const NodeProblem& prob, const Vector& theta, Vector& gz, double& gc) {
  const Vector r = prob.inv_T * (prob.n1.array() / theta.array() - prob.n0.array() / (1.0 - theta.array())).matrix();
  gz.noalias() = prob.X->transpose() * r;
  gc = r.sum();
}

// f(theta + dtheta) - f(theta), evaluated through log1p so that small
// improvements near the optimum are not lost to cancellation.
double objective_change(const NodeProblem& prob, const Vector& theta, const Vector& dtheta) {
  double change = 0.0;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    const double d = dtheta(k);
    if (prob.n1(k) > 0.0) change += prob.n1(k) * std::log1p(d / theta(k));
    if (prob.n0(k) > 0.0) change += prob.n0(k) * std::log1p(-d / (1.0 - theta(k)));
  }
  return prob.inv_T * change;
}

// Projected gradient ascent with Armijo backtracking on the concave node
// objective over the row set K (any row length).
NodeSolution solve_node(const NodeProblem& prob, const OptimizerOptions& opts) {
  const Matrix& X = *prob.X;
  const auto q = X.cols();
  NodeSolution sol;
  sol.z = Vector::Zero(q);
  sol.c = 0.5 * (prob.bounds.rho_min + prob.bounds.rho_max);

  Vector theta = X * sol.z + Vector::Constant(X.rows(), sol.c);
  Vector gz(q);
  double gc = 0.0;
  node_gradient(prob, theta, gz, gc);

  Vector trial_z(q);
  Vector dz(q);
  Vector dtheta(X.rows());
  Vector new_gz(q);
  double step = opts.initial_step;

  for (int it = 0; it < opts.max_iters; ++it) {
    trial_z = sol.z + gz;
    double trial_c = sol.c + gc;
    project_positive_row(trial_z, trial_c, prob.bounds);
    const double stationarity =
        std::sqrt((trial_z - sol.z).squaredNorm() + (trial_c - sol.c) * (trial_c - sol.c));
    if (stationarity <= opts.grad_tolerance) {
      sol.converged = true;
      sol.iterations = it;
      return sol;
    }

    bool accepted = false;
    double dc = 0.0;
    for (int ls = 0; ls < 80; ++ls) {
      trial_z = sol.z + step * gz;
      trial_c = sol.c + step * gc;
      project_positive_row(trial_z, trial_c, prob.bounds);
      dz = trial_z - sol.z;
      dc = trial_c - sol.c;
      dtheta.noalias() = X * dz;
      dtheta.array() += dc;
      const double slope = gz.dot(dz) + gc * dc;
      if (slope <= 0.0) break;
      if (objective_change(prob, theta, dtheta) >= opts.armijo * slope) {
        accepted = true;
        break;
      }
      step *= opts.shrink;
    }
    if (!accepted) {
      sol.iterations = it;
      return sol;
    }

    sol.z = trial_z;
    sol.c = trial_c;
    theta += dtheta;
    double new_gc = 0.0;
    node_gradient(prob, theta, new_gz, new_gc);

    step = opts.initial_step;
    if (opts.spectral_step) {
      const double sy = dz.dot(new_gz - gz) + dc * (new_gc - gc);
      const double ss = dz.squaredNorm() + dc * dc;
      if (sy < 0.0) step = std::clamp(ss / -sy, 1e-12, 1e12);
    }
    gz.swap(new_gz);
    gc = new_gc;
  }
  sol.iterations = opts.max_iters;
  return sol;
}

std::vector<NodeSolution> solve_nodes(const TransitionCounts& counts, const std::vector<State>& states,
                                      const Matrix& X, const RowBounds& bounds, const OptimizerOptions& opts) {
  const int p = counts.p();
  std::vector<NodeSolution> out(static_cast<std::size_t>(p));
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
  for (int i = 0; i < p; ++i) {
    const NodeProblem prob = node_problem(counts, states, X, i, bounds);
    out[static_cast<std::size_t>(i)] = solve_node(prob, opts);
  }
  return out;
}

void record_iterations(const std::vector<NodeSolution>& sols, EstimateDiagnostics& diag) {
  diag.converged = true;
  diag.iterations = 0;
  for (const auto& s : sols) {
    diag.node_iterations.push_back(s.iterations);
    diag.iterations = std::max(diag.iterations, s.iterations);
    diag.converged = diag.converged && s.converged;
  }
}

void record_active_constraints(const Matrix& weights, const Vector& c, const Vector& b, const SpaceConfig& config,
                               EstimateDiagnostics& diag) {
  const int p = static_cast<int>(c.size());
  for (int i = 0; i < p; ++i) {
    const std::string row = "row " + std::to_string(i + 1) + ": ";
    for (int j = 0; j < p; ++j) {
      if (weights(i, j) == 0.0) diag.active_constraints.push_back(row + "weight " + std::to_string(j + 1) + " = 0");
    }
    if (std::abs(b(i) - config.b_min) <= kConstraintTol) diag.active_constraints.push_back(row + "b = b_min");
    if (std::abs(c(i) - config.rho_min * b(i)) <= kConstraintTol) {
      diag.active_constraints.push_back(row + "rho_w = rho_min");
    }
    if (std::abs(c(i) - config.rho_max * b(i)) <= kConstraintTol) {
      diag.active_constraints.push_back(row + "rho_w = rho_max");
    }
  }
}

double max_abs_gap(const Matrix& a, const Vector& c, const Matrix& a2, const Vector& c2) {
  return std::max((a - a2).cwiseAbs().maxCoeff(), (c - c2).cwiseAbs().maxCoeff());
}

struct LeastSquaresFit {
  Matrix weights;
  Vector offset;
  int rank;
};

LeastSquaresFit least_squares_fit(const TransitionCounts& counts, const DesignMatrix& design) {
  const int p = counts.p();
  if (design.U.cols() != p) throw std::invalid_argument("design matrix width differs from p");
  const std::uint64_t zero_visits = counts.visits(0);
  if (zero_visits == 0) {
    throw PreconditionError("closed-form requires a visit to the all-zeros state");
  }
  if (!design.full_rank()) {
    std::ostringstream os;
    os << "closed-form requires a full column rank design matrix: U_m has rank " << design.rank << " < p = " << p
       << " (" << design.m() << " distinct visited states)";
    throw PreconditionError(os.str());
  }

  LeastSquaresFit fit{Matrix(p, p), Vector(p), design.rank};
  for (int i = 0; i < p; ++i) {
    fit.offset(i) = static_cast<double>(counts.marginal(0, i, 1)) / static_cast<double>(zero_visits);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(design.U);
  qr.setThreshold(kRankThreshold);
  for (int r = 0; r < p; ++r) {
    const Vector rhs = design.Y.col(r) - Vector::Constant(design.m(), fit.offset(r));
    fit.weights.row(r) = qr.solve(rhs).transpose();
  }
  return fit;
}

}  // namespace

LikelihoodDomainError::LikelihoodDomainError(int node, State state, double value)
    : std::domain_error([&] {
        std::ostringstream os;
        os << "marginal probability " << value << " of node " << node + 1 << " at visited state " << state
           << " is outside (0, 1)";
        return os.str();
      }()),
      node_(node),
      state_(state) {}

LikelihoodValue log_likelihood(const TransitionCounts& counts, const MarginalModel& model) {
  const int p = counts.p();
  if (model.p() != p) throw std::invalid_argument("log_likelihood: model and counts disagree on p");
  LikelihoodValue out;
  out.per_node = Vector::Zero(p);
  if (counts.T() == 0) return out;
  const double inv_T = 1.0 / static_cast<double>(counts.T());
  for (State u : counts.visited_states()) {
    const StateTally& tally = counts.tallies().at(u);
    const Vector theta = model.success_probs(u);
    for (int i = 0; i < p; ++i) {
      if (!(theta(i) > 0.0 && theta(i) < 1.0)) throw LikelihoodDomainError(i, u, theta(i));
      const auto ones = static_cast<double>(tally.ones[static_cast<std::size_t>(i)]);
      const auto zeros = static_cast<double>(tally.visits) - ones;
      out.per_node(i) += inv_T * (ones * std::log(theta(i)) + zeros * std::log1p(-theta(i)));
    }
  }
  out.total = out.per_node.sum();
  return out;
}

LikelihoodValue log_likelihood(const TransitionCounts& counts, const ReparamPositive& rep) {
  return log_likelihood(counts, marginal_model(rep));
}

LikelihoodValue log_likelihood(const TransitionCounts& counts, const ReparamSigned& rep) {
  return log_likelihood(counts, marginal_model(rep));
}

LikelihoodValue log_likelihood(const TransitionCounts& counts, const Model& model) {
  return log_likelihood(counts, marginal_model(model));
}

double log_likelihood_pairwise(const TransitionCounts& counts, const MarginalModel& model) {
  if (counts.T() == 0) return 0.0;
  double total = 0.0;
  for (const auto& [t, n] : counts.sorted_pairs()) {
    total += static_cast<double>(n) * std::log(transition_prob(model, t.from, t.to));
  }
  return total / static_cast<double>(counts.T());
}

namespace {

MarginalModel gradient_of(const TransitionCounts& counts, const MarginalModel& model) {
  const int p = counts.p();
  if (model.p() != p) throw std::invalid_argument("log_likelihood_gradient: model and counts disagree on p");
  MarginalModel g{Matrix::Zero(p, p), Vector::Zero(p)};
  if (counts.T() == 0) return g;
  const double inv_T = 1.0 / static_cast<double>(counts.T());
  for (State u : counts.visited_states()) {
    const StateTally& tally = counts.tallies().at(u);
    const Vector theta = model.success_probs(u);
    for (int i = 0; i < p; ++i) {
      if (!(theta(i) > 0.0 && theta(i) < 1.0)) throw LikelihoodDomainError(i, u, theta(i));
      const auto ones = static_cast<double>(tally.ones[static_cast<std::size_t>(i)]);
      const auto zeros = static_cast<double>(tally.visits) - ones;
      const double score = inv_T * (ones / theta(i) - zeros / (1.0 - theta(i)));
      g.offset(i) += score;
      for (int j = 0; j < p; ++j) {
        if (bit(u, j)) g.weights(i, j) += score;
      }
    }
  }
  return g;
}

}  // namespace

ReparamPositive log_likelihood_gradient(const TransitionCounts& counts, const ReparamPositive& rep) {
  MarginalModel g = gradient_of(counts, marginal_model(rep));
  return {std::move(g.weights), std::move(g.offset)};
}

ReparamSigned log_likelihood_gradient(const TransitionCounts& counts, const ReparamSigned& rep) {
  MarginalModel g = gradient_of(counts, marginal_model(rep));
  return {std::move(g.weights), std::move(g.offset)};
}

EstimateResult ml_estimate(const TransitionCounts& counts, const SpaceConfig& config, const OptimizerOptions& opts) {
  check_counts(counts, config);
  const int p = counts.p();
  const std::vector<State> states = counts.visited_states();
  const Matrix X = state_features(states, p, false);
  const std::vector<NodeSolution> sols = solve_nodes(counts, states, X, RowBounds::of(config), opts);

  ReparamPositive rep{Matrix(p, p), Vector(p)};
  for (int i = 0; i < p; ++i) {
    rep.A.row(i) = sols[static_cast<std::size_t>(i)].z.transpose();
    rep.c(i) = sols[static_cast<std::size_t>(i)].c;
  }
  BarParams params = from_reparam(rep, config);

  EstimateResult result{params, rep, true, 0, log_likelihood(counts, rep), {}, std::nullopt};
  result.diagnostics.method = "ml";
  result.diagnostics.visited_states = static_cast<int>(states.size());
  record_iterations(sols, result.diagnostics);
  record_active_constraints(rep.A, rep.c, params.b, config, result.diagnostics);
  result.converged = result.diagnostics.converged;
  result.iterations = result.diagnostics.iterations;
  return result;
}

EstimateResult ml_estimate_generic(const TransitionCounts& counts, const SpaceConfig& config,
                                   const OptimizerOptions& opts) {
  check_counts(counts, config);
  const int p = counts.p();
  const std::vector<State> states = counts.visited_states();
  const Matrix X = state_features(states, p, true);
  const std::vector<NodeSolution> sols = solve_nodes(counts, states, X, RowBounds::of(config), opts);

  // Mass shared by a_ij and a_tilde_ij only shifts theta by a constant;
  // moving it into c leaves the likelihood unchanged.
  ReparamSigned raw{Matrix(p, p), Vector(p)};
  for (int i = 0; i < p; ++i) {
    const NodeSolution& s = sols[static_cast<std::size_t>(i)];
    double c = s.c;
    double tilde_sum = 0.0;
    for (int j = 0; j < p; ++j) {
      const double overlap = std::min(s.z(j), s.z(p + j));
      const double a = s.z(j) - overlap;
      const double a_tilde = s.z(p + j) - overlap;
      c += overlap;
      tilde_sum += a_tilde;
      raw.A_bar(i, j) = a - a_tilde;
    }
    raw.c_bar(i) = tilde_sum + c;
  }

  const ReparamSigned rep = project_theta_signed(raw, config);
  GenericBarParams params = from_reparam_signed(rep, config);

  EstimateResult result{params, rep, true, 0, log_likelihood(counts, rep), {}, std::nullopt};
  auto& diag = result.diagnostics;
  diag.method = "ml-generic";
  diag.visited_states = static_cast<int>(states.size());
  record_iterations(sols, diag);
  diag.projection_displacement = max_abs_gap(raw.A_bar, raw.c_bar, rep.A_bar, rep.c_bar);
  diag.projection_moved = diag.projection_displacement > opts.projection_tolerance;
  record_active_constraints(params.A + params.A_tilde, params.b.cwiseProduct(params.rho_w), params.b, config,
                            diag);
  result.converged = diag.converged;
  result.iterations = diag.iterations;
  return result;
}

EstimateResult closed_form_estimate(const TransitionCounts& counts, const DesignMatrix& design,
                                    const SpaceConfig& config, const ClosedFormOptions& opts) {
  check_counts(counts, config);
  LeastSquaresFit fit = least_squares_fit(counts, design);
  if (opts.shared_noise) fit.offset.setConstant(fit.offset.mean());

  const ReparamPositive raw{fit.weights, fit.offset};
  const ReparamPositive rep = project_theta(raw, config);
  BarParams params = from_reparam(rep, config);

  EstimateResult result{params, rep, true, 0, log_likelihood(counts, rep), {}, MarginalModel{raw.A, raw.c}};
  auto& diag = result.diagnostics;
  diag.method = opts.shared_noise ? "closed-form-shared-noise" : "closed-form";
  diag.rank = fit.rank;
  diag.visited_states = design.m();
  diag.projection_displacement = max_abs_gap(raw.A, raw.c, rep.A, rep.c);
  diag.projection_moved = diag.projection_displacement > 0.0;
  return result;
}

EstimateResult closed_form_estimate_generic(const TransitionCounts& counts, const DesignMatrix& design,
                                            const SpaceConfig& config) {
  check_counts(counts, config);
  const LeastSquaresFit fit = least_squares_fit(counts, design);

  const ReparamSigned raw{fit.weights, fit.offset};
  const ReparamSigned rep = project_theta_signed(raw, config, SignPattern::of(raw.A_bar));
  GenericBarParams params = from_reparam_signed(rep, config);

  EstimateResult result{params, rep, true, 0, log_likelihood(counts, rep), {}, MarginalModel{raw.A_bar, raw.c_bar}};
  auto& diag = result.diagnostics;
  diag.method = "closed-form-generic";
  diag.rank = fit.rank;
  diag.visited_states = design.m();
  diag.projection_displacement = max_abs_gap(raw.A_bar, raw.c_bar, rep.A_bar, rep.c_bar);
  diag.projection_moved = diag.projection_displacement > 0.0;
  return result;
}

}  // namespace bar
