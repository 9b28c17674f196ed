#include "bar/exact.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bar/kernels.hpp"

namespace bar {
namespace {

void check_exact_size(int p) {
  if (p > kMaxExactNodes) {
    std::ostringstream os;
    os << "exact analysis is limited to p <= " << kMaxExactNodes << " (got p = " << p << ")";
    throw std::invalid_argument(os.str());
  }
}

double binary_entropy(double theta) {
  double h = 0.0;
  if (theta > 0.0) h -= theta * std::log(theta);
  if (theta < 1.0) h -= (1.0 - theta) * std::log(1.0 - theta);
  return h;
}

template <typename Step>
int power_iterate(Vector& pi, const StationaryOptions& opts, Step&& step) {
  Vector next(pi.size());
  for (int it = 1; it <= opts.max_iters; ++it) {
    step(pi, next);
    next /= next.sum();
    const double residual = (next - pi).cwiseAbs().maxCoeff();
    pi.swap(next);
    if (residual <= opts.residual_tol) return it;
  }
  throw std::runtime_error("power iteration did not reach the residual tolerance");
}

}  // namespace

double transition_prob(const MarginalModel& model, State u, State v) {
  double prob = 1.0;
  for (int i = 0; i < model.p(); ++i) {
    const double theta = model.success_prob(i, u);
    prob *= bit(v, i) ? theta : 1.0 - theta;
  }
  return prob;
}

double transition_prob(const Model& model, State u, State v) {
  return transition_prob(marginal_model(model), u, v);
}

void transition_row(const MarginalModel& model, State u, std::span<double> row) {
  const Vector theta = model.success_probs(u);
  row[0] = 1.0;
  for (int i = 0; i < model.p(); ++i) {
    const std::size_t half = std::size_t{1} << i;
    const double on = theta(i);
    const double off = 1.0 - on;
    for (std::size_t v = 0; v < half; ++v) {
      row[v + half] = row[v] * on;
      row[v] *= off;
    }
  }
}

double ExactChain::prob(State u, State v) const {
  if (P) return (*P)(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  return transition_prob(model, u, v);
}

ExactChain build_chain(const MarginalModel& model, const StationaryOptions& opts) {
  check_exact_size(model.p());
  ExactChain chain;
  chain.p = model.p();
  chain.model = model;
  const auto n = static_cast<Eigen::Index>(chain.states());
  chain.pi = Vector::Constant(n, 1.0 / static_cast<double>(n));

  if (chain.p <= kMaxDenseNodes) {
    RowMatrix P;
    kernels::omp::fill_transition_matrix(model, P);
    chain.power_iterations = power_iterate(
        chain.pi, opts, [&](const Vector& in, Vector& out) { kernels::omp::stationary_step(P, in, out); });

    // (P^T - I) pi = 0 with the last balance equation replaced by sum(pi) = 1.
    Matrix M = P.transpose();
    M.diagonal().array() -= 1.0;
    M.row(n - 1).setOnes();
    Vector rhs = Vector::Zero(n);
    rhs(n - 1) = 1.0;
    chain.pi_direct = M.partialPivLu().solve(rhs);
    chain.method_gap = (chain.pi - chain.pi_direct).cwiseAbs().maxCoeff();

    Vector image;
    kernels::omp::stationary_step(P, chain.pi, image);
    chain.stationarity_residual = (image - chain.pi).cwiseAbs().maxCoeff();
    chain.P = std::move(P);
    if (!(chain.method_gap <= opts.agreement_tol)) {
      std::ostringstream os;
      os << "stationary solvers disagree: max gap " << chain.method_gap;
      throw std::runtime_error(os.str());
    }
  } else {
    chain.power_iterations = power_iterate(chain.pi, opts, [&](const Vector& in, Vector& out) {
      kernels::omp::stationary_step_matrix_free(model, in, out);
    });
    Vector image;
    kernels::omp::stationary_step_matrix_free(model, chain.pi, image);
    chain.stationarity_residual = (image - chain.pi).cwiseAbs().maxCoeff();
    chain.method_gap = std::numeric_limits<double>::quiet_NaN();
    if (!(chain.stationarity_residual <= opts.agreement_tol)) {
      throw std::runtime_error("matrix-free stationary distribution failed its residual check");
    }
  }
  return chain;
}

ExactChain build_chain(const Model& model, const StationaryOptions& opts) {
  check_exact_size(node_count(model));
  return build_chain(marginal_model(model), opts);
}

double entropy_rate(const ExactChain& chain) {
  const auto n = static_cast<Eigen::Index>(chain.states());
  double h = 0.0;
  if (chain.P) {
    const RowMatrix& P = *chain.P;
    for (Eigen::Index u = 0; u < n; ++u) {
      double row = 0.0;
      for (Eigen::Index v = 0; v < n; ++v) {
        const double puv = P(u, v);
        if (puv > 0.0) row -= puv * std::log(puv);
      }
      h += chain.pi(u) * row;
    }
    return h;
  }
  // Entropy of a product law is the sum of the node entropies.
  for (Eigen::Index u = 0; u < n; ++u) {
    double row = 0.0;
    for (int i = 0; i < chain.p; ++i) row += binary_entropy(chain.model.success_prob(i, static_cast<State>(u)));
    h += chain.pi(u) * row;
  }
  return h;
}

Vector empirical_row(const TransitionCounts& counts, State u) {
  check_exact_size(counts.p());
  const auto n = static_cast<Eigen::Index>(std::size_t{1} << counts.p());
  const std::uint64_t visits = counts.visits(u);
  if (visits == 0) return Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector q(n);
  for (Eigen::Index v = 0; v < n; ++v) {
    q(v) = static_cast<double>(counts.pair(u, static_cast<State>(v))) / static_cast<double>(visits);
  }
  return q;
}

double kl_divergence(std::span<const double> q, std::span<const double> p) {
  if (q.size() != p.size()) throw std::invalid_argument("kl_divergence: support sizes differ");
  double d = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    if (p[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += q[i] * std::log(q[i] / p[i]);
  }
  return d;
}

double tv_distance(std::span<const double> q, std::span<const double> p) {
  if (q.size() != p.size()) throw std::invalid_argument("tv_distance: support sizes differ");
  double d = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) d += std::abs(q[i] - p[i]);
  return 0.5 * d;
}

double identifiability_probe(const Model& theta, const Model& theta_prime) {
  const int p = node_count(theta);
  if (node_count(theta_prime) != p) throw std::invalid_argument("identifiability_probe: p mismatch");
  check_exact_size(p);
  return kernels::omp::max_transition_gap(marginal_model(theta), marginal_model(theta_prime));
}

}  // namespace bar
