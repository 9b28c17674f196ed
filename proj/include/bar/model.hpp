#pragma once

// Parameter tuples of the Bernoulli autoregressive (BAR) model, their
// constraint sets, and the (A, c) / (A_bar, c_bar) reparameterizations.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace bar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Network state; bit i is X_i(k). Only the low p bits are meaningful.
using State = std::uint64_t;

inline constexpr int kMaxNodes = 64;
inline constexpr double kConstraintTol = 1e-12;

inline int bit(State s, int i) { return static_cast<int>((s >> i) & 1u); }

struct SpaceConfig {
  int p = 1;
  double b_min = 0.2;
  double rho_min = 0.2;
  double rho_max = 0.8;

  /// Throws std::invalid_argument when the bounds are not ordered as
  /// 0 < b_min < 1 and 0 < rho_min < rho_max < 1.
  void check() const;
};

/// Positive-only model: X_i(k+1) ~ Ber(a_i^T X(k) + b_i W_i(k+1)).
struct BarParams {
  Matrix A;
  Vector b;
  Vector rho_w;

  int p() const { return static_cast<int>(b.size()); }
};

/// Signed model with negative influences entering through 1 - X_j(k).
struct GenericBarParams {
  Matrix A;
  Matrix A_tilde;
  Vector b;
  Vector rho_w;

  int p() const { return static_cast<int>(b.size()); }
};

using Model = std::variant<BarParams, GenericBarParams>;

struct ReparamPositive {
  Matrix A;
  Vector c;  // c_i = b_i * rho_wi
};

struct ReparamSigned {
  Matrix A_bar;  // a_i - a_tilde_i
  Vector c_bar;  // a_tilde_i^T 1 + b_i * rho_wi
};

/// Random-network recipe. The weight law parameters (w_max, b_cap) are
/// generator choices; see generate_graph.
struct GraphSpec {
  int p = 10;
  int d_max = 5;
  double a_min = 0.1;
  bool signed_model = false;
  double w_max = 1.0;
  /// Upper end of the noise-weight draw. Values <= b_min mean "use b_min + 0.1".
  double b_cap = 0.0;

  void check(const SpaceConfig& config) const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const BarParams& params, const SpaceConfig& config);
ValidationReport validate(const GenericBarParams& params, const SpaceConfig& config);
ValidationReport validate(const Model& model, const SpaceConfig& config);

ReparamPositive to_reparam(const BarParams& params);
BarParams from_reparam(const ReparamPositive& rep, const SpaceConfig& config);

ReparamSigned to_reparam_signed(const GenericBarParams& params);
GenericBarParams from_reparam_signed(const ReparamSigned& rep, const SpaceConfig& config);

/// Marginal success probabilities are affine in the current state:
/// theta_i(u) = offset_i + sum_j weights(i, j) u_j. Both model variants
/// reduce to this form, which is all the simulator and the exact chain need.
struct MarginalModel {
  Matrix weights;
  Vector offset;

  int p() const { return static_cast<int>(offset.size()); }
  double success_prob(int i, State u) const;
  Vector success_probs(State u) const;
};

MarginalModel marginal_model(const BarParams& params);
MarginalModel marginal_model(const GenericBarParams& params);
MarginalModel marginal_model(const Model& model);
MarginalModel marginal_model(const ReparamPositive& rep);
MarginalModel marginal_model(const ReparamSigned& rep);

int node_count(const Model& model);
bool is_signed(const Model& model);

/// Signed view of either variant (A_tilde = 0 for the positive model).
GenericBarParams as_generic(const Model& model);

}  // namespace bar
