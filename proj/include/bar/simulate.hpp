#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "bar/model.hpp"
#include "bar/rng.hpp"

namespace bar {

struct Trajectory {
  int p = 0;
  std::vector<State> states;  // x(0), ..., x(T)

  std::size_t T() const { return states.empty() ? 0 : states.size() - 1; }
};

struct UniformInitial {};
struct PointMassInitial {
  State state = 0;
};
struct ProductBernoulliInitial {
  Vector q;
};
using InitialDistribution = std::variant<UniformInitial, PointMassInitial, ProductBernoulliInitial>;

/// Random ground-truth network. Node i gets an in-degree uniform on
/// {1..d_max}, distinct parents uniform without replacement, a noise weight
/// uniform on [b_min, b_cap] (capped so every edge can keep weight >= a_min),
/// edge weights uniform on [a_min, w_max] rescaled to sum to 1 - b_i (a draw
/// that would push a weight below a_min is rejected and redrawn), and
/// rho_wi uniform on [rho_min, rho_max]. In the signed model each edge goes
/// to A or A_tilde with probability 1/2.
Model generate_graph(const GraphSpec& spec, const SpaceConfig& config, std::uint64_t seed);

/// theta_i = a_i^T x + c_i (or a_bar_i^T x + c_bar_i).
Vector bernoulli_argument(const Model& model, State state);
Vector bernoulli_argument(const MarginalModel& model, State state);

/// One transition; draws exactly p uniforms, node 1 first.
State step(const MarginalModel& model, State state, Rng& rng);
State step(const Model& model, State state, Rng& rng);

State draw_initial(const InitialDistribution& initial, int p, Rng& rng);

Trajectory simulate(const Model& model, std::size_t T, const InitialDistribution& initial,
                    std::uint64_t seed);

}  // namespace bar
