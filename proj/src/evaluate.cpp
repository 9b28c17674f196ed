#include "bar/evaluate.hpp"

#include <algorithm>
#include <stdexcept>

namespace bar {

void EdgeSet::insert(int j, int i) {
  if (j < 0 || j >= p || i < 0 || i >= p) throw std::out_of_range("edge endpoint outside [0, p)");
  edges.emplace(j, i);
}

EdgeSet true_edges(const Model& params) {
  const GenericBarParams g = as_generic(params);
  EdgeSet out{g.p(), {}};
  for (int i = 0; i < g.p(); ++i) {
    for (int j = 0; j < g.p(); ++j) {
      if (g.A(i, j) > 0.0 || g.A_tilde(i, j) > 0.0) out.insert(j, i);
    }
  }
  return out;
}

EdgeSet infer_edges(const Model& estimate, double a_min, double c_thresh) {
  if (!(c_thresh > 0.0 && c_thresh < 1.0)) throw std::invalid_argument("c_thresh must lie in (0, 1)");
  if (!(a_min > 0.0 && a_min < 1.0)) throw std::invalid_argument("a_min must lie in (0, 1)");
  const GenericBarParams g = as_generic(estimate);
  const double cut = c_thresh * a_min;
  EdgeSet out{g.p(), {}};
  for (int i = 0; i < g.p(); ++i) {
    for (int j = 0; j < g.p(); ++j) {
      if (std::max(g.A(i, j), g.A_tilde(i, j)) >= cut) out.insert(j, i);
    }
  }
  return out;
}

ScoreReport score(const EdgeSet& truth, const EdgeSet& inferred) {
  if (truth.p != inferred.p) throw std::invalid_argument("score: edge sets over different p");
  ScoreReport r;
  for (const auto& e : inferred.edges) {
    if (truth.edges.count(e)) {
      ++r.true_positives;
    } else {
      ++r.false_positives;
    }
  }
  r.false_negatives = truth.size() - r.true_positives;

  if (!inferred.edges.empty()) {
    r.precision = static_cast<double>(r.true_positives) / static_cast<double>(inferred.size());
  }
  if (truth.edges.empty()) {
    r.recall = inferred.edges.empty() ? 1.0 : 0.0;
  } else {
    r.recall = static_cast<double>(r.true_positives) / static_cast<double>(truth.size());
  }
  if (r.precision > 0.0 && r.recall > 0.0) r.f1 = 2.0 / (1.0 / r.precision + 1.0 / r.recall);
  return r;
}

ParameterErrors parameter_errors(const Model& truth, const Model& estimate) {
  const GenericBarParams t = as_generic(truth);
  const GenericBarParams e = as_generic(estimate);
  if (t.p() != e.p()) throw std::invalid_argument("parameter_errors: p mismatch");
  ParameterErrors out;
  const Matrix dA = e.A - t.A;
  const Matrix dAt = e.A_tilde - t.A_tilde;
  out.max_abs_A = dA.cwiseAbs().maxCoeff();
  out.frob_A = dA.norm();
  out.max_abs_A_tilde = dAt.cwiseAbs().maxCoeff();
  out.frob_A_tilde = dAt.norm();
  out.max_abs_b = (e.b - t.b).cwiseAbs().maxCoeff();
  out.max_abs_rho = (e.rho_w - t.rho_w).cwiseAbs().maxCoeff();
  return out;
}

ScoreReport score(const Model& truth, const Model& estimate, double a_min, double c_thresh) {
  ScoreReport r = score(true_edges(truth), infer_edges(estimate, a_min, c_thresh));
  r.errors = parameter_errors(truth, estimate);
  return r;
}

}  // namespace bar
