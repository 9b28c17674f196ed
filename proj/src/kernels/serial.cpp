#include <algorithm>
#include <cmath>
#include <vector>

#include "bar/kernels.hpp"

namespace bar::kernels::serial {

void fill_transition_matrix(const MarginalModel& model, RowMatrix& P) {
  const auto n = static_cast<Eigen::Index>(std::size_t{1} << model.p());
  P.resize(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    transition_row(model, static_cast<State>(u), std::span<double>(P.row(u).data(), static_cast<std::size_t>(n)));
  }
}

void stationary_step(const RowMatrix& P, const Vector& pi, Vector& next) {
  next.noalias() = P.transpose() * pi;
}

void stationary_step_matrix_free(const MarginalModel& model, const Vector& pi, Vector& next) {
  const std::size_t n = std::size_t{1} << model.p();
  std::vector<double> row(n);
  next.setZero(static_cast<Eigen::Index>(n));
  for (std::size_t u = 0; u < n; ++u) {
    transition_row(model, static_cast<State>(u), row);
    const double w = pi(static_cast<Eigen::Index>(u));
    for (std::size_t v = 0; v < n; ++v) next(static_cast<Eigen::Index>(v)) += w * row[v];
  }
}

double max_transition_gap(const MarginalModel& a, const MarginalModel& b) {
  const std::size_t n = std::size_t{1} << a.p();
  std::vector<double> ra(n);
  std::vector<double> rb(n);
  double gap = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    transition_row(a, static_cast<State>(u), ra);
    transition_row(b, static_cast<State>(u), rb);
    for (std::size_t v = 0; v < n; ++v) gap = std::max(gap, std::abs(ra[v] - rb[v]));
  }
  return gap;
}

TransitionCounts count_transitions(const Trajectory& traj) {
  TransitionCounts counts(traj.p);
  for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) counts.add(traj.states[k], traj.states[k + 1]);
  return counts;
}

}  // namespace bar::kernels::serial
