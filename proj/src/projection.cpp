#include "bar/projection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace bar {
namespace {

// Projection of a fixed target onto the scaled simplex {z >= 0, sum z = s},
// parameterized by s. The squared distance is convex in s with derivative
// -threshold(s), which is what the outer bisections consume.
class SimplexTarget {
 public:
  explicit SimplexTarget(std::vector<double> z) : sorted_(std::move(z)) {
    std::sort(sorted_.begin(), sorted_.end(), std::greater<>());
  }

  bool empty() const { return sorted_.empty(); }

  // tau with sum_j max(z_j - tau, 0) = s; for s = 0 the right limit max(z).
  double threshold(double s) const {
    if (s <= 0.0) return sorted_.front();
    double cum = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < sorted_.size(); ++k) {
      cum += sorted_[k];
      const double t = (cum - s) / static_cast<double>(k + 1);
      if (k > 0 && !(sorted_[k] > t)) break;
      tau = t;
    }
    return tau;
  }

 private:
  std::vector<double> sorted_;
};

// Smallest root of a nondecreasing function on [lo, hi], clamped to the ends.
double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  if (hi <= lo) return lo;
  if (f(lo) >= 0.0) return lo;
  if (f(hi) <= 0.0) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct BandTerm {
  double lower;
  double upper;
  double d_pos;
  double d_neg;
};

// Squared distance of c0 to [L, U] with L = rho_min (1 - s) + s_neg and
// U = rho_max (1 - s) + s_neg, s = s_pos + s_neg, and its partials.
BandTerm band_term(double s_pos, double s_neg, double c0, const RowBounds& bounds) {
  const double s = s_pos + s_neg;
  BandTerm t;
  t.lower = bounds.rho_min * (1.0 - s) + s_neg;
  t.upper = bounds.rho_max * (1.0 - s) + s_neg;
  const double lo = std::max(t.lower - c0, 0.0);
  const double hi = std::max(c0 - t.upper, 0.0);
  t.d_pos = -bounds.rho_min * lo + bounds.rho_max * hi;
  t.d_neg = (1.0 - bounds.rho_min) * lo - (1.0 - bounds.rho_max) * hi;
  return t;
}

struct RowSolution {
  double s_pos = 0.0;
  double s_neg = 0.0;
};

// Minimizes 1/2 d_P(s_pos)^2 + 1/2 d_N(s_neg)^2 + band term over the
// triangle s_pos, s_neg >= 0, s_pos + s_neg <= 1 - b_min.
RowSolution solve_row(const SimplexTarget& pos, const SimplexTarget& neg, double c0,
                      const RowBounds& bounds) {
  const double cap = 1.0 - bounds.b_min;

  auto dneg = [&](double sp, double sn) {
    return -neg.threshold(sn) + band_term(sp, sn, c0, bounds).d_neg;
  };
  auto inner = [&](double sp) {
    if (neg.empty()) return 0.0;
    return bisect_root([&](double sn) { return dneg(sp, sn); }, 0.0, std::max(cap - sp, 0.0));
  };
  auto outer_slope = [&](double sp) {
    const double sn = inner(sp);
    double slope = -pos.threshold(sp) + band_term(sp, sn, c0, bounds).d_pos;
    if (!neg.empty() && sn >= cap - sp) {
      const double dn = dneg(sp, sn);
      if (dn < 0.0) slope -= dn;
    }
    return slope;
  };

  RowSolution sol;
  if (!pos.empty()) sol.s_pos = bisect_root(outer_slope, 0.0, cap);
  sol.s_neg = inner(sol.s_pos);
  return sol;
}

bool signed_row_feasible(const Eigen::Ref<const Vector>& a_bar, double c_bar,
                         const std::vector<Sign>& signs, const RowBounds& bounds) {
  for (Eigen::Index j = 0; j < a_bar.size(); ++j) {
    const double v = a_bar(j);
    switch (signs[static_cast<std::size_t>(j)]) {
      case Sign::positive:
        if (v < 0.0) return false;
        break;
      case Sign::negative:
        if (v > 0.0) return false;
        break;
      case Sign::zero:
        if (v != 0.0) return false;
        break;
    }
  }
  const double s = a_bar.cwiseAbs().sum();
  if (s > 1.0 - bounds.b_min) return false;
  const double c = c_bar - (-a_bar.array()).max(0.0).sum();
  return c >= bounds.rho_min * (1.0 - s) && c <= bounds.rho_max * (1.0 - s);
}

// Thresholding and clamping are computed from the target sums; rounding can
// leave the assembled row an ulp outside the set, so nudge it back.
void settle_row(Eigen::Ref<Vector> a, double& c, const RowBounds& bounds) {
  const double cap = 1.0 - bounds.b_min;
  for (int k = 0; k < 8; ++k) {
    const double s = a.cwiseAbs().sum();
    if (s <= cap) break;
    Eigen::Index j = 0;
    a.cwiseAbs().maxCoeff(&j);
    const double mag = std::abs(a(j));
    const double cut = std::max(s - cap, mag - std::nextafter(mag, 0.0));
    a(j) = std::copysign(std::max(mag - cut, 0.0), a(j));
  }
  const double s = a.cwiseAbs().sum();
  const double neg = (-a.array()).max(0.0).sum();
  const double lo = bounds.rho_min * (1.0 - s);
  const double hi = bounds.rho_max * (1.0 - s);
  c = std::clamp(c, neg + lo, neg + hi);
  for (int k = 0; k < 8; ++k) {
    const double off = c - neg;
    if (off < lo) {
      c = std::nextafter(c, INFINITY);
    } else if (off > hi) {
      c = std::nextafter(c, -INFINITY);
    } else {
      break;
    }
  }
}

}  // namespace

SignPattern SignPattern::of(const Matrix& a_bar) {
  SignPattern out(static_cast<int>(a_bar.rows()));
  for (int i = 0; i < out.p(); ++i) {
    for (int j = 0; j < out.p(); ++j) {
      out(i, j) = a_bar(i, j) < 0.0 ? Sign::negative : Sign::positive;
    }
  }
  return out;
}

SignPattern SignPattern::from_supports(const Matrix& A, const Matrix& A_tilde) {
  SignPattern out(static_cast<int>(A.rows()), Sign::zero);
  for (int i = 0; i < out.p(); ++i) {
    for (int j = 0; j < out.p(); ++j) {
      if (A(i, j) > 0.0) {
        out(i, j) = Sign::positive;
      } else if (A_tilde(i, j) > 0.0) {
        out(i, j) = Sign::negative;
      }
    }
  }
  return out;
}

bool in_positive_row_set(const Eigen::Ref<const Vector>& a, double c, const RowBounds& bounds) {
  if ((a.array() < 0.0).any()) return false;
  const double s = a.cwiseAbs().sum();
  if (s > 1.0 - bounds.b_min) return false;
  return c >= bounds.rho_min * (1.0 - s) && c <= bounds.rho_max * (1.0 - s);
}

void project_positive_row(Eigen::Ref<Vector> a, double& c, const RowBounds& bounds) {
  if (in_positive_row_set(a, c, bounds)) return;
  const SimplexTarget pos(std::vector<double>(a.data(), a.data() + a.size()));
  const SimplexTarget neg({});
  const RowSolution sol = solve_row(pos, neg, c, bounds);
  const double tau = pos.threshold(sol.s_pos);
  for (Eigen::Index j = 0; j < a.size(); ++j) a(j) = sol.s_pos > 0.0 ? std::max(a(j) - tau, 0.0) : 0.0;
  const BandTerm band = band_term(sol.s_pos, 0.0, c, bounds);
  c = std::clamp(c, band.lower, band.upper);
  settle_row(a, c, bounds);
}

void project_signed_row(Eigen::Ref<Vector> a_bar, double& c_bar, const std::vector<Sign>& signs,
                        const RowBounds& bounds) {
  if (signs.size() != static_cast<std::size_t>(a_bar.size())) {
    throw std::invalid_argument("sign pattern width does not match the row");
  }
  if (signed_row_feasible(a_bar, c_bar, signs, bounds)) return;

  std::vector<double> zp;
  std::vector<double> zn;
  for (Eigen::Index j = 0; j < a_bar.size(); ++j) {
    const Sign s = signs[static_cast<std::size_t>(j)];
    if (s == Sign::positive) zp.push_back(a_bar(j));
    if (s == Sign::negative) zn.push_back(-a_bar(j));
  }
  const SimplexTarget pos(zp);
  const SimplexTarget neg(zn);
  const RowSolution sol = solve_row(pos, neg, c_bar, bounds);
  const double tau_p = pos.empty() ? 0.0 : pos.threshold(sol.s_pos);
  const double tau_n = neg.empty() ? 0.0 : neg.threshold(sol.s_neg);

  for (Eigen::Index j = 0; j < a_bar.size(); ++j) {
    switch (signs[static_cast<std::size_t>(j)]) {
      case Sign::positive:
        a_bar(j) = sol.s_pos > 0.0 ? std::max(a_bar(j) - tau_p, 0.0) : 0.0;
        break;
      case Sign::negative:
        a_bar(j) = sol.s_neg > 0.0 ? -std::max(-a_bar(j) - tau_n, 0.0) : 0.0;
        break;
      case Sign::zero:
        a_bar(j) = 0.0;
        break;
    }
  }
  const BandTerm band = band_term(sol.s_pos, sol.s_neg, c_bar, bounds);
  c_bar = std::clamp(c_bar, band.lower, band.upper);
  settle_row(a_bar, c_bar, bounds);
}

ReparamPositive project_theta(const ReparamPositive& raw, const SpaceConfig& config) {
  const Eigen::Index p = raw.c.size();
  if (raw.A.rows() != p || raw.A.cols() != p) {
    throw std::invalid_argument("project_theta: A and c dimensions disagree");
  }
  const RowBounds bounds = RowBounds::of(config);
  ReparamPositive out = raw;
  Vector row(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    row = out.A.row(i).transpose();
    project_positive_row(row, out.c(i), bounds);
    out.A.row(i) = row.transpose();
  }
  return out;
}

ReparamSigned project_theta_signed(const ReparamSigned& raw, const SpaceConfig& config,
                                   const std::optional<SignPattern>& pattern) {
  const int p = static_cast<int>(raw.c_bar.size());
  if (raw.A_bar.rows() != p || raw.A_bar.cols() != p) {
    throw std::invalid_argument("project_theta_signed: A_bar and c_bar dimensions disagree");
  }
  const SignPattern signs = pattern ? *pattern : SignPattern::of(raw.A_bar);
  if (signs.p() != p) throw std::invalid_argument("project_theta_signed: pattern has wrong size");

  const RowBounds bounds = RowBounds::of(config);
  ReparamSigned out = raw;
  Vector row(p);
  std::vector<Sign> row_signs(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) row_signs[static_cast<std::size_t>(j)] = signs(i, j);
    row = out.A_bar.row(i).transpose();
    project_signed_row(row, out.c_bar(i), row_signs, bounds);
    out.A_bar.row(i) = row.transpose();
  }
  return out;
}

}  // namespace bar
