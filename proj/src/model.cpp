#include "bar/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bar {
namespace {

void check_dims(int p, const Matrix& m, const char* name) {
  if (m.rows() != p || m.cols() != p) {
    std::ostringstream os;
    os << name << " is " << m.rows() << "x" << m.cols() << ", expected " << p << "x" << p;
    throw std::invalid_argument(os.str());
  }
}

void check_dims(int p, const Vector& v, const char* name) {
  if (v.size() != p) {
    std::ostringstream os;
    os << name << " has length " << v.size() << ", expected " << p;
    throw std::invalid_argument(os.str());
  }
}

void check_config_p(int p, const SpaceConfig& config) {
  if (config.p != p) {
    std::ostringstream os;
    os << "parameters have p=" << p << " but config has p=" << config.p;
    throw std::invalid_argument(os.str());
  }
}

// Constraints shared by both variants: b, rho and the row sum, where
// `weight_sum` is sum_j (a_ij + a_tilde_ij).
void check_row(int i, double weight_sum, double b, double rho, const SpaceConfig& config,
               std::vector<std::string>& out) {
  const int row = i + 1;
  if (!std::isfinite(weight_sum) || !std::isfinite(b) || !std::isfinite(rho)) {
    out.push_back("row " + std::to_string(row) + " has non-finite entries");
    return;
  }
  if (std::abs(weight_sum + b - 1.0) > kConstraintTol) {
    out.push_back("row " + std::to_string(row) + " sum != 1");
  }
  if (b < config.b_min - kConstraintTol) {
    out.push_back("row " + std::to_string(row) + " b < b_min");
  }
  if (rho < config.rho_min - kConstraintTol || rho > config.rho_max + kConstraintTol) {
    out.push_back("row " + std::to_string(row) + " rho_w outside [rho_min, rho_max]");
  }
}

}  // namespace

void SpaceConfig::check() const {
  if (p < 1 || p > kMaxNodes) {
    throw std::invalid_argument("p must lie in [1, 64]");
  }
  if (!(b_min > 0.0 && b_min < 1.0)) {
    throw std::invalid_argument("b_min must lie in (0, 1)");
  }
  if (!(rho_min > 0.0 && rho_min < rho_max && rho_max < 1.0)) {
    throw std::invalid_argument("need 0 < rho_min < rho_max < 1");
  }
}

void GraphSpec::check(const SpaceConfig& config) const {
  if (p != config.p) {
    throw std::invalid_argument("graph spec and space config disagree on p");
  }
  if (d_max < 1 || d_max > p) {
    throw std::invalid_argument("d_max must lie in [1, p]");
  }
  if (!(a_min > 0.0 && a_min < 1.0)) {
    throw std::invalid_argument("a_min must lie in (0, 1)");
  }
  if (d_max * a_min > 1.0 - config.b_min + kConstraintTol) {
    std::ostringstream os;
    os << "infeasible graph spec: d_max*a_min = " << d_max * a_min << " exceeds 1 - b_min = "
       << 1.0 - config.b_min;
    throw std::invalid_argument(os.str());
  }
  if (w_max < a_min) {
    throw std::invalid_argument("w_max must be at least a_min");
  }
}

ValidationReport validate(const BarParams& params, const SpaceConfig& config) {
  const int p = params.p();
  check_dims(p, params.A, "A");
  check_dims(p, params.rho_w, "rho_w");
  check_config_p(p, config);

  ValidationReport report;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (params.A(i, j) < -kConstraintTol) {
        report.violations.push_back("row " + std::to_string(i + 1) + " has a negative weight in column " +
                                    std::to_string(j + 1));
      }
    }
    check_row(i, params.A.row(i).sum(), params.b(i), params.rho_w(i), config, report.violations);
  }
  return report;
}

ValidationReport validate(const GenericBarParams& params, const SpaceConfig& config) {
  const int p = params.p();
  check_dims(p, params.A, "A");
  check_dims(p, params.A_tilde, "A_tilde");
  check_dims(p, params.rho_w, "rho_w");
  check_config_p(p, config);

  ValidationReport report;
  for (int i = 0; i < p; ++i) {
    const std::string row = "row " + std::to_string(i + 1);
    for (int j = 0; j < p; ++j) {
      const std::string col = std::to_string(j + 1);
      if (params.A(i, j) < -kConstraintTol) {
        report.violations.push_back(row + " has a negative weight in column " + col);
      }
      if (params.A_tilde(i, j) < -kConstraintTol) {
        report.violations.push_back(row + " has a negative A_tilde weight in column " + col);
      }
      if (std::min(params.A(i, j), params.A_tilde(i, j)) > kConstraintTol) {
        report.violations.push_back(row + " has overlapping A and A_tilde supports in column " + col);
      }
    }
    const double weight_sum = params.A.row(i).sum() + params.A_tilde.row(i).sum();
    check_row(i, weight_sum, params.b(i), params.rho_w(i), config, report.violations);
  }
  return report;
}

ValidationReport validate(const Model& model, const SpaceConfig& config) {
  return std::visit([&](const auto& m) { return validate(m, config); }, model);
}

ReparamPositive to_reparam(const BarParams& params) {
  check_dims(params.p(), params.A, "A");
  check_dims(params.p(), params.rho_w, "rho_w");
  return {params.A, params.b.cwiseProduct(params.rho_w)};
}

BarParams from_reparam(const ReparamPositive& rep, const SpaceConfig& config) {
  const int p = static_cast<int>(rep.c.size());
  check_dims(p, rep.A, "A");
  check_config_p(p, config);
  BarParams out;
  out.A = rep.A;
  out.b = Vector::Ones(p) - rep.A.rowwise().sum();
  out.rho_w.resize(p);
  for (int i = 0; i < p; ++i) {
    if (!(out.b(i) > 0.0)) {
      throw std::domain_error("from_reparam: noise weight b_" + std::to_string(i + 1) +
                              " is not positive; rho_w is undefined");
    }
    out.rho_w(i) = rep.c(i) / out.b(i);
  }
  return out;
}

ReparamSigned to_reparam_signed(const GenericBarParams& params) {
  const int p = params.p();
  check_dims(p, params.A, "A");
  check_dims(p, params.A_tilde, "A_tilde");
  check_dims(p, params.rho_w, "rho_w");
  return {params.A - params.A_tilde,
          params.A_tilde.rowwise().sum() + params.b.cwiseProduct(params.rho_w)};
}

GenericBarParams from_reparam_signed(const ReparamSigned& rep, const SpaceConfig& config) {
  const int p = static_cast<int>(rep.c_bar.size());
  check_dims(p, rep.A_bar, "A_bar");
  check_config_p(p, config);
  GenericBarParams out;
  out.A = rep.A_bar.cwiseMax(0.0);
  out.A_tilde = (-rep.A_bar).cwiseMax(0.0);
  out.b = Vector::Ones(p) - (out.A + out.A_tilde).rowwise().sum();
  const Vector c = rep.c_bar - out.A_tilde.rowwise().sum();
  out.rho_w.resize(p);
  for (int i = 0; i < p; ++i) {
    if (!(out.b(i) > 0.0)) {
      throw std::domain_error("from_reparam_signed: noise weight b_" + std::to_string(i + 1) +
                              " is not positive; rho_w is undefined");
    }
    out.rho_w(i) = c(i) / out.b(i);
  }
  return out;
}

double MarginalModel::success_prob(int i, State u) const {
  double value = offset(i);
  const int n = p();
  for (int j = 0; j < n; ++j) {
    if (bit(u, j)) value += weights(i, j);
  }
  return value;
}

Vector MarginalModel::success_probs(State u) const {
  Vector out = offset;
  const int n = p();
  for (int j = 0; j < n; ++j) {
    if (bit(u, j)) out += weights.col(j);
  }
  return out;
}

MarginalModel marginal_model(const BarParams& params) {
  ReparamPositive rep = to_reparam(params);
  return {std::move(rep.A), std::move(rep.c)};
}

MarginalModel marginal_model(const GenericBarParams& params) {
  ReparamSigned rep = to_reparam_signed(params);
  return {std::move(rep.A_bar), std::move(rep.c_bar)};
}

MarginalModel marginal_model(const Model& model) {
  return std::visit([](const auto& m) { return marginal_model(m); }, model);
}

MarginalModel marginal_model(const ReparamPositive& rep) { return {rep.A, rep.c}; }
MarginalModel marginal_model(const ReparamSigned& rep) { return {rep.A_bar, rep.c_bar}; }

int node_count(const Model& model) {
  return std::visit([](const auto& m) { return m.p(); }, model);
}

bool is_signed(const Model& model) { return std::holds_alternative<GenericBarParams>(model); }

GenericBarParams as_generic(const Model& model) {
  if (const auto* g = std::get_if<GenericBarParams>(&model)) return *g;
  const auto& m = std::get<BarParams>(model);
  return {m.A, Matrix::Zero(m.p(), m.p()), m.b, m.rho_w};
}

}  // namespace bar
