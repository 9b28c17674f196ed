#pragma once

// (estimator x T x seed) sweeps: generate, simulate, estimate, score.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bar/evaluate.hpp"
#include "bar/io.hpp"
#include "bar/model.hpp"

namespace bar {

enum class Estimator { ml, closed_form };

std::string to_string(Estimator e);
Estimator parse_estimator(const std::string& name);

struct ExperimentConfig {
  bool signed_model = false;
  GraphSpec spec;
  SpaceConfig space;
  std::vector<std::size_t> T_grid;
  std::vector<std::uint64_t> seeds;
  std::vector<Estimator> estimators;
  double c_thresh = 0.5;
  std::string output_dir = ".";
  std::uint64_t master_seed = 0;
  /// Wall-clock times make the CSV differ between runs, so they are off by default.
  bool record_runtime = false;

  void check() const;
};

ExperimentConfig experiment_config_from_json(const io::Json& j);
io::Json to_json(const ExperimentConfig& config);

struct CellResult {
  Estimator estimator = Estimator::ml;
  std::size_t T = 0;
  std::uint64_t seed = 0;
  ScoreReport report;
  bool converged = false;
  double runtime_ms = 0.0;
  std::string error;  // empty on success
};

std::uint64_t graph_seed(const ExperimentConfig& config, std::uint64_t seed);
std::uint64_t trajectory_seed(const ExperimentConfig& config, std::uint64_t seed);

/// Cells in (estimator, T, seed) order.
std::vector<CellResult> run_experiment(const ExperimentConfig& config);

void write_results_csv(std::ostream& os, const ExperimentConfig& config, const std::vector<CellResult>& cells);

struct SummaryRow {
  Estimator estimator;
  std::size_t T;
  std::size_t ok;
  std::size_t failed;
  double mean_f1;
  double std_f1;  // sample standard deviation
};

std::vector<SummaryRow> summarize(const ExperimentConfig& config, const std::vector<CellResult>& cells);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
/// Whitespace-separated table: T, then mean and std of F1 per estimator.
void write_plot_data(std::ostream& os, const ExperimentConfig& config, const std::vector<SummaryRow>& rows);

}  // namespace bar
