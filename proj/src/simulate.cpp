#include "bar/simulate.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bar {
namespace {

constexpr int kMaxWeightDraws = 10000;

struct NodeDraw {
  std::vector<int> parents;
  std::vector<double> weights;
  double b = 0.0;
};

NodeDraw draw_node(const GraphSpec& spec, const SpaceConfig& config, Rng& rng) {
  NodeDraw node;
  const int d = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.d_max)));

  std::vector<int> pool(static_cast<std::size_t>(spec.p));
  std::iota(pool.begin(), pool.end(), 0);
  for (int k = 0; k < d; ++k) {
    const auto pick = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.p - k)));
    std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick)]);
  }
  node.parents.assign(pool.begin(), pool.begin() + d);
  std::sort(node.parents.begin(), node.parents.end());

  const double b_cap = spec.b_cap > config.b_min ? spec.b_cap : config.b_min + 0.1;
  const double b_hi = std::max(config.b_min, std::min(b_cap, 1.0 - d * spec.a_min));

  node.weights.resize(static_cast<std::size_t>(d));
  for (int attempt = 0; attempt < kMaxWeightDraws; ++attempt) {
    node.b = rng.uniform(config.b_min, b_hi);
    for (double& w : node.weights) w = rng.uniform(spec.a_min, spec.w_max);
    const double scale = (1.0 - node.b) / std::accumulate(node.weights.begin(), node.weights.end(), 0.0);
    const double smallest = *std::min_element(node.weights.begin(), node.weights.end()) * scale;
    if (smallest >= spec.a_min) {
      for (double& w : node.weights) w *= scale;
      return node;
    }
  }
  // Equal split is always admissible because b_hi <= 1 - d * a_min.
  node.b = b_hi;
  std::fill(node.weights.begin(), node.weights.end(), (1.0 - node.b) / d);
  return node;
}

}  // namespace

Model generate_graph(const GraphSpec& spec, const SpaceConfig& config, std::uint64_t seed) {
  config.check();
  spec.check(config);
  const int p = spec.p;
  Rng rng = Rng::stream(seed, Purpose::graph);

  Matrix A = Matrix::Zero(p, p);
  Matrix A_tilde = Matrix::Zero(p, p);
  Vector b(p);
  Vector rho(p);
  for (int i = 0; i < p; ++i) {
    const NodeDraw node = draw_node(spec, config, rng);
    for (std::size_t k = 0; k < node.parents.size(); ++k) {
      const int j = node.parents[k];
      const bool negative = spec.signed_model && rng.uniform() < 0.5;
      (negative ? A_tilde : A)(i, j) = node.weights[k];
    }
    // Recompute b from the weights so the row-sum identity holds to rounding.
    b(i) = 1.0 - A.row(i).sum() - A_tilde.row(i).sum();
    rho(i) = rng.uniform(config.rho_min, config.rho_max);
  }

  if (spec.signed_model) return GenericBarParams{A, A_tilde, b, rho};
  return BarParams{A, b, rho};
}

Vector bernoulli_argument(const MarginalModel& model, State state) { return model.success_probs(state); }

Vector bernoulli_argument(const Model& model, State state) {
  return marginal_model(model).success_probs(state);
}

State step(const MarginalModel& model, State state, Rng& rng) {
  const Vector theta = model.success_probs(state);
  State next = 0;
  for (int i = 0; i < model.p(); ++i) {
    if (rng.uniform() < theta(i)) next |= State{1} << i;
  }
  return next;
}

State step(const Model& model, State state, Rng& rng) { return step(marginal_model(model), state, rng); }

State draw_initial(const InitialDistribution& initial, int p, Rng& rng) {
  struct Draw {
    int p;
    Rng& rng;
    State operator()(const UniformInitial&) const {
      State s = 0;
      for (int i = 0; i < p; ++i) {
        if (rng.uniform() < 0.5) s |= State{1} << i;
      }
      return s;
    }
    State operator()(const PointMassInitial& point) const {
      if (p < 64 && (point.state >> p) != 0) {
        throw std::invalid_argument("initial state has bits beyond p");
      }
      return point.state;
    }
    State operator()(const ProductBernoulliInitial& prod) const {
      if (prod.q.size() != p) throw std::invalid_argument("initial q has wrong length");
      State s = 0;
      for (int i = 0; i < p; ++i) {
        if (rng.uniform() < prod.q(i)) s |= State{1} << i;
      }
      return s;
    }
  };
  return std::visit(Draw{p, rng}, initial);
}

Trajectory simulate(const Model& model, std::size_t T, const InitialDistribution& initial,
                    std::uint64_t seed) {
  const MarginalModel marginal = marginal_model(model);
  Trajectory traj;
  traj.p = marginal.p();
  traj.states.reserve(T + 1);

  Rng init_rng = Rng::stream(seed, Purpose::initial_state);
  Rng rng = Rng::stream(seed, Purpose::transitions);
  State x = draw_initial(initial, traj.p, init_rng);
  traj.states.push_back(x);
  for (std::size_t k = 0; k < T; ++k) {
    x = step(marginal, x, rng);
    traj.states.push_back(x);
  }
  return traj;
}

}  // namespace bar
