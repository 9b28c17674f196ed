#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bar/kernels.hpp"

namespace bar::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {
namespace {

// Fixed block sizes keep floating-point summation order independent of the
// number of threads.
constexpr std::int64_t kRowBlock = 256;
constexpr std::int64_t kColumnBlock = 512;
constexpr std::size_t kCountChunk = std::size_t{1} << 16;

}  // namespace

void fill_transition_matrix(const MarginalModel& model, RowMatrix& P) {
  const auto n = static_cast<std::int64_t>(std::size_t{1} << model.p());
  P.resize(n, n);
#pragma omp parallel for schedule(static)
  for (std::int64_t u = 0; u < n; ++u) {
    transition_row(model, static_cast<State>(u), std::span<double>(P.row(u).data(), static_cast<std::size_t>(n)));
  }
}

void stationary_step(const RowMatrix& P, const Vector& pi, Vector& next) {
  const std::int64_t n = P.rows();
  next.resize(n);
  const std::int64_t blocks = (n + kColumnBlock - 1) / kColumnBlock;
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    const std::int64_t v0 = blk * kColumnBlock;
    const std::int64_t v1 = std::min(n, v0 + kColumnBlock);
    next.segment(v0, v1 - v0).setZero();
    for (std::int64_t u = 0; u < n; ++u) {
      const double w = pi(u);
      const double* row = P.row(u).data();
      for (std::int64_t v = v0; v < v1; ++v) next(v) += w * row[v];
    }
  }
}

void stationary_step_matrix_free(const MarginalModel& model, const Vector& pi, Vector& next) {
  const auto n = static_cast<std::int64_t>(std::size_t{1} << model.p());
  const std::int64_t blocks = (n + kRowBlock - 1) / kRowBlock;
  std::vector<Vector> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel
  {
    std::vector<double> row(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
    for (std::int64_t blk = 0; blk < blocks; ++blk) {
      Vector& acc = partial[static_cast<std::size_t>(blk)];
      acc.setZero(n);
      const std::int64_t u1 = std::min(n, (blk + 1) * kRowBlock);
      for (std::int64_t u = blk * kRowBlock; u < u1; ++u) {
        transition_row(model, static_cast<State>(u), row);
        const double w = pi(u);
        for (std::int64_t v = 0; v < n; ++v) acc(v) += w * row[static_cast<std::size_t>(v)];
      }
    }
  }
  next.setZero(n);
  for (const Vector& acc : partial) next += acc;
}

double max_transition_gap(const MarginalModel& a, const MarginalModel& b) {
  const auto n = static_cast<std::int64_t>(std::size_t{1} << a.p());
  double gap = 0.0;
#pragma omp parallel reduction(max : gap)
  {
    std::vector<double> ra(static_cast<std::size_t>(n));
    std::vector<double> rb(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
    for (std::int64_t u = 0; u < n; ++u) {
      transition_row(a, static_cast<State>(u), ra);
      transition_row(b, static_cast<State>(u), rb);
      for (std::size_t v = 0; v < ra.size(); ++v) gap = std::max(gap, std::abs(ra[v] - rb[v]));
    }
  }
  return gap;
}

TransitionCounts count_transitions(const Trajectory& traj) {
  const std::size_t transitions = traj.T();
  const std::size_t chunks = std::max<std::size_t>(1, (transitions + kCountChunk - 1) / kCountChunk);
  if (chunks == 1) return serial::count_transitions(traj);

  std::vector<TransitionCounts> partial(chunks, TransitionCounts(traj.p));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::size_t k0 = static_cast<std::size_t>(c) * kCountChunk;
    const std::size_t k1 = std::min(transitions, k0 + kCountChunk);
    TransitionCounts& mine = partial[static_cast<std::size_t>(c)];
    for (std::size_t k = k0; k < k1; ++k) mine.add(traj.states[k], traj.states[k + 1]);
  }
  TransitionCounts total(traj.p);
  for (const auto& part : partial) total.merge(part);
  return total;
}

}  // namespace omp
}  // namespace bar::kernels
