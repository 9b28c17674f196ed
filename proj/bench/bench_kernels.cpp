#include <benchmark/benchmark.h>

#include "bar/kernels.hpp"
#include "bar/simulate.hpp"

namespace {

using namespace bar;

MarginalModel model_for(int p) {
  const SpaceConfig config{p};
  GraphSpec spec{p, std::min(p, 4), 0.1};
  return marginal_model(generate_graph(spec, config, 1));
}

template <void (*Fill)(const MarginalModel&, RowMatrix&)>
void BM_FillTransitionMatrix(benchmark::State& state) {
  const MarginalModel m = model_for(static_cast<int>(state.range(0)));
  RowMatrix P;
  for (auto _ : state) {
    Fill(m, P);
    benchmark::DoNotOptimize(P.data());
  }
}

template <void (*Step)(const RowMatrix&, const Vector&, Vector&)>
void BM_StationaryStep(benchmark::State& state) {
  const MarginalModel m = model_for(static_cast<int>(state.range(0)));
  RowMatrix P;
  kernels::serial::fill_transition_matrix(m, P);
  const Vector pi = Vector::Constant(P.rows(), 1.0 / static_cast<double>(P.rows()));
  Vector next;
  for (auto _ : state) {
    Step(P, pi, next);
    benchmark::DoNotOptimize(next.data());
  }
}

template <void (*Step)(const MarginalModel&, const Vector&, Vector&)>
void BM_MatrixFreeStep(benchmark::State& state) {
  const MarginalModel m = model_for(static_cast<int>(state.range(0)));
  const auto n = Eigen::Index{1} << m.p();
  const Vector pi = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector next;
  for (auto _ : state) {
    Step(m, pi, next);
    benchmark::DoNotOptimize(next.data());
  }
}

template <double (*Gap)(const MarginalModel&, const MarginalModel&)>
void BM_TransitionGap(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const MarginalModel a = model_for(p);
  MarginalModel b = a;
  b.offset.array() += 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(Gap(a, b));
}

template <TransitionCounts (*Count)(const Trajectory&)>
void BM_CountTransitions(benchmark::State& state) {
  const int p = 20;
  const Model m = generate_graph(GraphSpec{p, 5, 0.1}, SpaceConfig{p}, 2);
  const Trajectory traj = simulate(m, static_cast<std::size_t>(state.range(0)), UniformInitial{}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Count(traj).T());
}

BENCHMARK_TEMPLATE(BM_FillTransitionMatrix, kernels::serial::fill_transition_matrix)->Arg(8)->Arg(11);
BENCHMARK_TEMPLATE(BM_FillTransitionMatrix, kernels::omp::fill_transition_matrix)->Arg(8)->Arg(11);
BENCHMARK_TEMPLATE(BM_StationaryStep, kernels::serial::stationary_step)->Arg(8)->Arg(11);
BENCHMARK_TEMPLATE(BM_StationaryStep, kernels::omp::stationary_step)->Arg(8)->Arg(11);
BENCHMARK_TEMPLATE(BM_MatrixFreeStep, kernels::serial::stationary_step_matrix_free)->Arg(10)->Arg(12);
BENCHMARK_TEMPLATE(BM_MatrixFreeStep, kernels::omp::stationary_step_matrix_free)->Arg(10)->Arg(12);
BENCHMARK_TEMPLATE(BM_TransitionGap, kernels::serial::max_transition_gap)->Arg(8)->Arg(11);
BENCHMARK_TEMPLATE(BM_TransitionGap, kernels::omp::max_transition_gap)->Arg(8)->Arg(11);
BENCHMARK_TEMPLATE(BM_CountTransitions, kernels::serial::count_transitions)->Arg(100000)->Arg(1000000);
BENCHMARK_TEMPLATE(BM_CountTransitions, kernels::omp::count_transitions)->Arg(100000)->Arg(1000000);

}  // namespace

BENCHMARK_MAIN();
