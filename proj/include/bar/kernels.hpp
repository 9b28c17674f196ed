#pragma once

// Data-parallel inner loops. Each kernel has a straightforward serial
// version, kept as the reference the OpenMP version is tested against.

#include "bar/exact.hpp"
#include "bar/stats.hpp"

namespace bar::kernels {

int max_threads();

namespace serial {

void fill_transition_matrix(const MarginalModel& model, RowMatrix& P);
/// next = pi^T P.
void stationary_step(const RowMatrix& P, const Vector& pi, Vector& next);
void stationary_step_matrix_free(const MarginalModel& model, const Vector& pi, Vector& next);
double max_transition_gap(const MarginalModel& a, const MarginalModel& b);
TransitionCounts count_transitions(const Trajectory& traj);

}  // namespace serial

namespace omp {

void fill_transition_matrix(const MarginalModel& model, RowMatrix& P);
void stationary_step(const RowMatrix& P, const Vector& pi, Vector& next);
void stationary_step_matrix_free(const MarginalModel& model, const Vector& pi, Vector& next);
double max_transition_gap(const MarginalModel& a, const MarginalModel& b);
TransitionCounts count_transitions(const Trajectory& traj);

}  // namespace omp

}  // namespace bar::kernels
