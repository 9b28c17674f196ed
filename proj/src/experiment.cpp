#include "bar/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "bar/estimate.hpp"
#include "bar/simulate.hpp"
#include "bar/stats.hpp"

namespace bar {
namespace {

void write_number(std::ostream& os, double x) {
  if (std::isfinite(x)) os << x;
}

struct SeedData {
  Model truth;
  Trajectory traj;
  std::string error;
};

Trajectory prefix(const Trajectory& traj, std::size_t T) {
  Trajectory out;
  out.p = traj.p;
  out.states.assign(traj.states.begin(), traj.states.begin() + static_cast<std::ptrdiff_t>(T + 1));
  return out;
}

EstimateResult run_estimator(Estimator e, bool signed_model, const TransitionCounts& counts,
                             const SpaceConfig& space) {
  OptimizerOptions opts;
  opts.parallel = false;
  if (e == Estimator::ml) {
    return signed_model ? ml_estimate_generic(counts, space, opts) : ml_estimate(counts, space, opts);
  }
  const DesignMatrix design = build_design(counts);
  return signed_model ? closed_form_estimate_generic(counts, design, space)
                      : closed_form_estimate(counts, design, space);
}

}  // namespace

std::string to_string(Estimator e) { return e == Estimator::ml ? "ml" : "closed-form"; }

Estimator parse_estimator(const std::string& name) {
  if (name == "ml") return Estimator::ml;
  if (name == "closed-form") return Estimator::closed_form;
  throw std::invalid_argument("unknown estimator '" + name + "' (expected ml or closed-form)");
}

void ExperimentConfig::check() const {
  space.check();
  if (space.p != spec.p) throw std::invalid_argument("experiment: space and graph spec disagree on p");
  spec.check(space);
  if (T_grid.empty()) throw std::invalid_argument("experiment: T grid is empty");
  if (seeds.empty()) throw std::invalid_argument("experiment: seed list is empty");
  if (estimators.empty()) throw std::invalid_argument("experiment: estimator list is empty");
  for (std::size_t T : T_grid) {
    if (T == 0) throw std::invalid_argument("experiment: every T must be positive");
  }
  if (!(c_thresh > 0.0 && c_thresh < 1.0)) throw std::invalid_argument("experiment: c_thresh must lie in (0, 1)");
}

ExperimentConfig experiment_config_from_json(const io::Json& j) {
  ExperimentConfig c;
  try {
    const std::string variant = j.value("variant", std::string("positive"));
    if (variant != "positive" && variant != "generic") {
      throw std::invalid_argument("variant must be 'positive' or 'generic'");
    }
    c.signed_model = variant == "generic";
    c.spec.p = j.value("p", c.spec.p);
    c.spec.d_max = j.value("d_max", c.spec.d_max);
    c.spec.a_min = j.value("a_min", c.spec.a_min);
    c.spec.signed_model = c.signed_model;
    c.space.p = c.spec.p;
    c.space.b_min = j.value("b_min", c.space.b_min);
    c.space.rho_min = j.value("rho_min", c.space.rho_min);
    c.space.rho_max = j.value("rho_max", c.space.rho_max);
    c.T_grid = j.at("T").get<std::vector<std::size_t>>();
    c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    for (const auto& name : j.value("estimators", std::vector<std::string>{"ml", "closed-form"})) {
      c.estimators.push_back(parse_estimator(name));
    }
    c.c_thresh = j.value("c_thresh", c.c_thresh);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.record_runtime = j.value("record_runtime", c.record_runtime);
  } catch (const nlohmann::json::exception& e) {
    throw io::FormatError(std::string("experiment config: ") + e.what());
  }
  c.check();
  return c;
}

io::Json to_json(const ExperimentConfig& c) {
  io::Json j;
  j["variant"] = c.signed_model ? "generic" : "positive";
  j["p"] = c.spec.p;
  j["d_max"] = c.spec.d_max;
  j["a_min"] = c.spec.a_min;
  j["b_min"] = c.space.b_min;
  j["rho_min"] = c.space.rho_min;
  j["rho_max"] = c.space.rho_max;
  j["T"] = c.T_grid;
  j["seeds"] = c.seeds;
  std::vector<std::string> names;
  for (Estimator e : c.estimators) names.push_back(to_string(e));
  j["estimators"] = names;
  j["c_thresh"] = c.c_thresh;
  j["output_dir"] = c.output_dir;
  j["master_seed"] = c.master_seed;
  j["record_runtime"] = c.record_runtime;
  return j;
}

std::uint64_t graph_seed(const ExperimentConfig& config, std::uint64_t seed) {
  return derive_seed(config.master_seed, {static_cast<std::uint64_t>(Purpose::graph), seed});
}

std::uint64_t trajectory_seed(const ExperimentConfig& config, std::uint64_t seed) {
  return derive_seed(config.master_seed, {static_cast<std::uint64_t>(Purpose::experiment_cell), seed});
}

std::vector<CellResult> run_experiment(const ExperimentConfig& config) {
  config.check();
  const std::size_t T_max = *std::max_element(config.T_grid.begin(), config.T_grid.end());
  const auto n_seeds = static_cast<std::int64_t>(config.seeds.size());

  // One network and one trajectory per seed; every T uses a prefix.
  std::vector<SeedData> data(config.seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t s = 0; s < n_seeds; ++s) {
    SeedData& d = data[static_cast<std::size_t>(s)];
    const std::uint64_t seed = config.seeds[static_cast<std::size_t>(s)];
    try {
      d.truth = generate_graph(config.spec, config.space, graph_seed(config, seed));
      d.traj = simulate(d.truth, T_max, UniformInitial{}, trajectory_seed(config, seed));
    } catch (const std::exception& e) {
      d.error = e.what();
    }
  }

  std::vector<CellResult> cells;
  for (Estimator e : config.estimators) {
    for (std::size_t T : config.T_grid) {
      for (std::uint64_t seed : config.seeds) cells.push_back({e, T, seed, {}, false, 0.0, {}});
    }
  }

  const auto n_cells = static_cast<std::int64_t>(cells.size());
  const std::size_t per_estimator = config.T_grid.size() * config.seeds.size();
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < n_cells; ++k) {
    CellResult& cell = cells[static_cast<std::size_t>(k)];
    const SeedData& d = data[static_cast<std::size_t>(k) % per_estimator % config.seeds.size()];
    if (!d.error.empty()) {
      cell.error = d.error;
      continue;
    }
    try {
      const auto start = std::chrono::steady_clock::now();
      const TransitionCounts counts = count_transitions(prefix(d.traj, cell.T));
      const EstimateResult est = run_estimator(cell.estimator, config.signed_model, counts, config.space);
      const auto stop = std::chrono::steady_clock::now();
      cell.report = score(d.truth, est.params, config.spec.a_min, config.c_thresh);
      cell.converged = est.converged;
      if (config.record_runtime) {
        cell.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      }
    } catch (const std::exception& ex) {
      cell.error = ex.what();
    }
  }
  return cells;
}

void write_results_csv(std::ostream& os, const ExperimentConfig& config, const std::vector<CellResult>& cells) {
  os << std::setprecision(10);
  os << "# master_seed=" << config.master_seed << " b_min=" << config.space.b_min
     << " rho_min=" << config.space.rho_min << " rho_max=" << config.space.rho_max
     << " a_min=" << config.spec.a_min << " c_thresh=" << config.c_thresh << " initial=uniform\n";
  os << "variant,estimator,p,d_max,T,seed,f1,precision,recall,max_abs_err_A,frob_err_A,err_b,err_rho,converged,"
        "runtime_ms,error\n";
  const char* variant = config.signed_model ? "generic" : "positive";
  for (const CellResult& c : cells) {
    os << variant << ',' << to_string(c.estimator) << ',' << config.spec.p << ',' << config.spec.d_max << ','
       << c.T << ',' << c.seed << ',';
    if (c.error.empty()) {
      const ScoreReport& r = c.report;
      write_number(os, r.f1);
      os << ',';
      write_number(os, r.precision);
      os << ',';
      write_number(os, r.recall);
      os << ',';
      // For the signed model the A columns cover both weight matrices.
      const double max_abs = std::max(r.errors.max_abs_A, r.errors.max_abs_A_tilde);
      const double frob = std::hypot(r.errors.frob_A, r.errors.frob_A_tilde);
      write_number(os, max_abs);
      os << ',';
      write_number(os, frob);
      os << ',';
      write_number(os, r.errors.max_abs_b);
      os << ',';
      write_number(os, r.errors.max_abs_rho);
      os << ',' << (c.converged ? 1 : 0) << ',' << c.runtime_ms << ",\n";
    } else {
      std::string msg = c.error;
      std::replace(msg.begin(), msg.end(), '"', '\'');
      os << ",,,,,,,0,0,\"" << msg << "\"\n";
    }
  }
}

std::vector<SummaryRow> summarize(const ExperimentConfig& config, const std::vector<CellResult>& cells) {
  std::vector<SummaryRow> rows;
  for (Estimator e : config.estimators) {
    for (std::size_t T : config.T_grid) {
      std::vector<double> f1;
      std::size_t failed = 0;
      for (const CellResult& c : cells) {
        if (c.estimator != e || c.T != T) continue;
        if (c.error.empty()) {
          f1.push_back(c.report.f1);
        } else {
          ++failed;
        }
      }
      SummaryRow row{e, T, f1.size(), failed, std::nan(""), std::nan("")};
      if (!f1.empty()) {
        double sum = 0.0;
        for (double x : f1) sum += x;
        row.mean_f1 = sum / static_cast<double>(f1.size());
        double ss = 0.0;
        for (double x : f1) ss += (x - row.mean_f1) * (x - row.mean_f1);
        row.std_f1 = f1.size() > 1 ? std::sqrt(ss / static_cast<double>(f1.size() - 1)) : 0.0;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << std::setprecision(10) << "estimator,T,n_ok,n_failed,mean_f1,std_f1\n";
  for (const SummaryRow& r : rows) {
    os << to_string(r.estimator) << ',' << r.T << ',' << r.ok << ',' << r.failed << ',';
    write_number(os, r.mean_f1);
    os << ',';
    write_number(os, r.std_f1);
    os << '\n';
  }
}

void write_plot_data(std::ostream& os, const ExperimentConfig& config, const std::vector<SummaryRow>& rows) {
  os << std::setprecision(10) << "# T";
  for (Estimator e : config.estimators) os << ' ' << to_string(e) << "_mean " << to_string(e) << "_std";
  os << '\n';
  for (std::size_t T : config.T_grid) {
    os << T;
    for (Estimator e : config.estimators) {
      for (const SummaryRow& r : rows) {
        if (r.estimator != e || r.T != T) continue;
        if (std::isfinite(r.mean_f1)) {
          os << ' ' << r.mean_f1 << ' ' << r.std_f1;
        } else {
          os << " NaN NaN";
        }
      }
    }
    os << '\n';
  }
}

}  // namespace bar
