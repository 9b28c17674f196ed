#pragma once

#include <set>
#include <utility>

#include "bar/model.hpp"

namespace bar {

/// Directed edges (j, i), 0-based, meaning node j influences node i.
struct EdgeSet {
  int p = 0;
  std::set<std::pair<int, int>> edges;

  std::size_t size() const { return edges.size(); }
  bool contains(int j, int i) const { return edges.count({j, i}) > 0; }
  void insert(int j, int i);
};

struct ParameterErrors {
  double max_abs_A = 0.0;
  double frob_A = 0.0;
  double max_abs_A_tilde = 0.0;
  double frob_A_tilde = 0.0;
  double max_abs_b = 0.0;
  double max_abs_rho = 0.0;
};

struct ScoreReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  ParameterErrors errors;
};

/// Union of the supports of A and A_tilde.
EdgeSet true_edges(const Model& params);

/// (j, i) is inferred when max(a_ij, a_tilde_ij) >= c_thresh * a_min.
EdgeSet infer_edges(const Model& estimate, double a_min, double c_thresh);

/// Empty inferred set gives precision 0. Empty true set gives recall 1 if
/// nothing was inferred, else 0. F1 is 0 when either component is 0.
ScoreReport score(const EdgeSet& truth, const EdgeSet& inferred);

ParameterErrors parameter_errors(const Model& truth, const Model& estimate);

/// Edge score plus parameter errors.
ScoreReport score(const Model& truth, const Model& estimate, double a_min, double c_thresh);

}  // namespace bar
