#pragma once

// Euclidean projections onto the reparameterized parameter spaces.
//
// Rows are independent. For the positive model row i is projected onto
//   K_i = { a >= 0, sum(a) <= 1 - b_min, rho_min (1 - sum a) <= c <= rho_max (1 - sum a) }.
// For the signed model the sign of each entry of a_bar_i is fixed by a
// pattern, which makes the row set a convex polyhedron in (a_bar_i, c_bar_i).

#include <cstdint>
#include <optional>
#include <vector>

#include "bar/model.hpp"

namespace bar {

enum class Sign : std::int8_t { negative = -1, zero = 0, positive = 1 };

class SignPattern {
 public:
  SignPattern() = default;
  explicit SignPattern(int p, Sign fill = Sign::positive) : p_(p), signs_(p * p, fill) {}

  /// Nonnegative entries map to positive, negative entries to negative.
  static SignPattern of(const Matrix& a_bar);
  /// Support-preserving pattern: positive on supp(A), negative on supp(A_tilde),
  /// zero (pinned) elsewhere.
  static SignPattern from_supports(const Matrix& A, const Matrix& A_tilde);

  int p() const { return p_; }
  Sign operator()(int i, int j) const { return signs_[static_cast<std::size_t>(i * p_ + j)]; }
  Sign& operator()(int i, int j) { return signs_[static_cast<std::size_t>(i * p_ + j)]; }

  friend bool operator==(const SignPattern&, const SignPattern&) = default;

 private:
  int p_ = 0;
  std::vector<Sign> signs_;
};

struct RowBounds {
  double b_min;
  double rho_min;
  double rho_max;

  static RowBounds of(const SpaceConfig& c) { return {c.b_min, c.rho_min, c.rho_max}; }
};

/// Projects one positive row (a, c) onto K_i in place. `a` may have any
/// length; the lifted signed optimizer uses rows of length 2p.
void project_positive_row(Eigen::Ref<Vector> a, double& c, const RowBounds& bounds);

/// Projects one signed row (a_bar, c_bar) in place, restricted to the
/// orthant given by `signs` (one entry per column).
void project_signed_row(Eigen::Ref<Vector> a_bar, double& c_bar, const std::vector<Sign>& signs,
                        const RowBounds& bounds);

bool in_positive_row_set(const Eigen::Ref<const Vector>& a, double c, const RowBounds& bounds);

ReparamPositive project_theta(const ReparamPositive& raw, const SpaceConfig& config);

/// Without a pattern, the pattern of `raw` itself is used.
ReparamSigned project_theta_signed(const ReparamSigned& raw, const SpaceConfig& config,
                                   const std::optional<SignPattern>& pattern = std::nullopt);

}  // namespace bar
