#include "bar/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "bar/estimate.hpp"
#include "bar/evaluate.hpp"
#include "bar/exact.hpp"
#include "bar/experiment.hpp"
#include "bar/io.hpp"
#include "bar/simulate.hpp"
#include "bar/stats.hpp"

namespace bar {
namespace {

namespace fs = std::filesystem;

struct SpaceFlags {
  double b_min = 0.2;
  double rho_min = 0.2;
  double rho_max = 0.8;

  void add(CLI::App* cmd) {
    cmd->add_option("--b-min", b_min, "Lower bound on every noise weight b_i")->capture_default_str();
    cmd->add_option("--rho-min", rho_min, "Lower bound on rho_w")->capture_default_str();
    cmd->add_option("--rho-max", rho_max, "Upper bound on rho_w")->capture_default_str();
  }
  SpaceConfig config(int p) const { return {p, b_min, rho_min, rho_max}; }
};

struct GenerateArgs {
  GraphSpec spec;
  SpaceFlags space;
  std::uint64_t seed = 0;
  std::string out;
};

struct SimulateArgs {
  std::string params;
  std::size_t T = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "text";
  std::optional<std::uint64_t> initial_state;
};

struct EstimateArgs {
  std::string trajectory;
  std::string method = "ml";
  std::string variant = "positive";
  SpaceFlags space;
  bool shared_noise = false;
  OptimizerOptions opts;
  std::string out;
  std::string counts_out;
};

struct ExactArgs {
  std::string params;
  std::string out_dir;
};

struct ScoreArgs {
  std::string truth;
  std::string estimate;
  double a_min = 0.1;
  double c_thresh = 0.5;
  std::string out;
};

struct ExperimentArgs {
  std::string config;
  std::optional<std::uint64_t> master_seed;
  std::optional<std::string> output_dir;
  bool record_runtime = false;
};

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

void require_valid(const Model& model, const SpaceConfig& config, const std::string& what) {
  const ValidationReport report = validate(model, config);
  if (report.ok()) return;
  std::string msg = what + " violates the parameter space:";
  for (const auto& v : report.violations) msg += "\n  " + v;
  throw PreconditionError(msg);
}

void cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const SpaceConfig config = a.space.config(a.spec.p);
  const Model model = generate_graph(a.spec, config, a.seed);
  io::write_json(a.out, io::to_json(model, config));
  out << "wrote " << a.out << '\n';
}

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const io::ParamFile file = io::read_params(a.params);
  require_valid(file.params, file.config, a.params);
  InitialDistribution initial = UniformInitial{};
  if (a.initial_state) initial = PointMassInitial{*a.initial_state};
  const Trajectory traj = simulate(file.params, a.T, initial, a.seed);
  io::write_trajectory(fs::path(a.out), traj,
                       a.format == "binary" ? io::TrajectoryFormat::binary : io::TrajectoryFormat::text);
  out << "wrote " << a.out << " (T = " << traj.T() << ")\n";
}

void cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const Trajectory traj = io::read_trajectory(fs::path(a.trajectory));
  const SpaceConfig config = a.space.config(traj.p);
  const TransitionCounts counts = count_transitions(traj);
  if (!a.counts_out.empty()) {
    std::ofstream os = open_out(a.counts_out);
    io::write_counts_csv(os, counts);
  }
  const bool generic = a.variant == "generic";
  EstimateResult result = [&] {
    if (a.method == "ml") {
      return generic ? ml_estimate_generic(counts, config, a.opts) : ml_estimate(counts, config, a.opts);
    }
    const DesignMatrix design = build_design(counts);
    return generic ? closed_form_estimate_generic(counts, design, config)
                   : closed_form_estimate(counts, design, config, {a.shared_noise});
  }();
  require_valid(result.params, config, "estimate");
  io::write_json(a.out, io::to_json(result, config));
  out << "wrote " << a.out << " (" << result.diagnostics.method << ", log-likelihood "
      << std::setprecision(10) << result.likelihood.total << ")\n";
}

void cmd_exact(const ExactArgs& a, std::ostream& out) {
  const io::ParamFile file = io::read_params(a.params);
  require_valid(file.params, file.config, a.params);
  const ExactChain chain = build_chain(file.params);
  io::Json summary;
  summary["p"] = chain.p;
  summary["entropy_rate"] = entropy_rate(chain);
  summary["power_iterations"] = chain.power_iterations;
  summary["stationarity_residual"] = chain.stationarity_residual;
  if (chain.dense()) summary["method_gap"] = chain.method_gap;
  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    if (chain.dense()) {
      std::ofstream os = open_out(fs::path(a.out_dir) / "transition.csv");
      io::write_transition_csv(os, chain);
    }
    std::ofstream os = open_out(fs::path(a.out_dir) / "stationary.csv");
    io::write_stationary_csv(os, chain);
    io::write_json(fs::path(a.out_dir) / "summary.json", summary);
  }
  out << summary.dump(2) << '\n';
}

void cmd_score(const ScoreArgs& a, std::ostream& out) {
  const io::ParamFile truth = io::read_params(a.truth);
  const io::ParamFile est = io::read_params(a.estimate);
  if (node_count(truth.params) != node_count(est.params)) {
    throw PreconditionError("truth and estimate have different p");
  }
  const ScoreReport r = score(truth.params, est.params, a.a_min, a.c_thresh);
  io::Json j;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["true_positives"] = r.true_positives;
  j["false_positives"] = r.false_positives;
  j["false_negatives"] = r.false_negatives;
  j["max_abs_err_A"] = r.errors.max_abs_A;
  j["frob_err_A"] = r.errors.frob_A;
  j["max_abs_err_A_tilde"] = r.errors.max_abs_A_tilde;
  j["frob_err_A_tilde"] = r.errors.frob_A_tilde;
  j["err_b"] = r.errors.max_abs_b;
  j["err_rho"] = r.errors.max_abs_rho;
  if (!a.out.empty()) io::write_json(a.out, j);
  out << j.dump(2) << '\n';
}

void cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
  io::Json j = io::read_json(a.config);
  if (a.master_seed) j["master_seed"] = *a.master_seed;
  if (a.output_dir) j["output_dir"] = *a.output_dir;
  if (a.record_runtime) j["record_runtime"] = true;
  const ExperimentConfig config = experiment_config_from_json(j);
  const std::vector<CellResult> cells = run_experiment(config);
  const std::vector<SummaryRow> rows = summarize(config, cells);

  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  {
    std::ofstream os = open_out(dir / "results.csv");
    write_results_csv(os, config, cells);
  }
  {
    std::ofstream os = open_out(dir / "summary.csv");
    write_summary_csv(os, rows);
  }
  {
    std::ofstream os = open_out(dir / "f1.dat");
    write_plot_data(os, config, rows);
  }
  std::size_t failed = 0;
  for (const auto& c : cells) failed += c.error.empty() ? 0 : 1;
  out << "wrote " << cells.size() << " cells (" << failed << " failed) to " << dir.string() << '\n';
  write_summary_csv(out, rows);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate, estimate and score Bernoulli autoregressive network processes", "bar"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Draw a random ground-truth network");
  generate->add_option("--p", gen.spec.p, "Number of nodes")->capture_default_str();
  generate->add_option("--d-max", gen.spec.d_max, "Maximum in-degree")->capture_default_str();
  generate->add_option("--a-min", gen.spec.a_min, "Minimum edge weight")->capture_default_str();
  generate->add_flag("--signed", gen.spec.signed_model, "Generate the signed model");
  generate->add_option("--w-max", gen.spec.w_max, "Upper end of the raw edge-weight draw")->capture_default_str();
  generate->add_option("--b-cap", gen.spec.b_cap, "Upper end of the noise-weight draw (<= b_min: b_min + 0.1)");
  gen.space.add(generate);
  generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  generate->add_option("--out", gen.out, "Output parameter JSON")->required();

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a trajectory from a parameter file");
  simulate_cmd->add_option("--params", sim.params, "Parameter JSON")->required()->check(CLI::ExistingFile);
  simulate_cmd->add_option("--T", sim.T, "Number of transitions")->required();
  simulate_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate_cmd->add_option("--out", sim.out, "Output trajectory file")->required();
  simulate_cmd->add_option("--format", sim.format, "Trajectory format")
      ->check(CLI::IsMember({"text", "binary"}))
      ->capture_default_str();
  simulate_cmd->add_option("--initial-state", sim.initial_state, "Start from this integer-encoded state");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate parameters from a trajectory");
  estimate->add_option("--trajectory", est.trajectory, "Trajectory file")->required()->check(CLI::ExistingFile);
  estimate->add_option("--method", est.method, "Estimator")
      ->check(CLI::IsMember({"ml", "closed-form"}))
      ->capture_default_str();
  estimate->add_option("--variant", est.variant, "Model variant")
      ->check(CLI::IsMember({"positive", "generic"}))
      ->capture_default_str();
  est.space.add(estimate);
  estimate->add_flag("--shared-noise", est.shared_noise, "Closed form: average c over nodes");
  estimate->add_option("--max-iters", est.opts.max_iters, "ML iteration cap per node")->capture_default_str();
  estimate->add_option("--grad-tol", est.opts.grad_tolerance, "ML projected-gradient tolerance")
      ->capture_default_str();
  estimate->add_option("--out", est.out, "Output estimate JSON")->required();
  estimate->add_option("--counts-out", est.counts_out, "Also write transition counts as CSV");

  ExactArgs ex;
  auto* exact = app.add_subcommand("exact", "Exact transition matrix, stationary law and entropy rate");
  exact->add_option("--params", ex.params, "Parameter JSON")->required()->check(CLI::ExistingFile);
  exact->add_option("--out-dir", ex.out_dir, "Directory for transition.csv, stationary.csv, summary.json");

  ScoreArgs sc;
  auto* score_cmd = app.add_subcommand("score", "Score an estimate against the ground truth");
  score_cmd->add_option("--truth", sc.truth, "Ground-truth parameter JSON")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--estimate", sc.estimate, "Estimate JSON")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--a-min", sc.a_min, "Minimum edge weight")->capture_default_str();
  score_cmd->add_option("--c-thresh", sc.c_thresh, "Edge threshold factor c")->capture_default_str();
  score_cmd->add_option("--out", sc.out, "Also write the report as JSON");

  ExperimentArgs xp;
  auto* experiment = app.add_subcommand("experiment", "Run an (estimator x T x seed) sweep");
  experiment->add_option("--config", xp.config, "Experiment JSON")->required()->check(CLI::ExistingFile);
  experiment->add_option("--master-seed", xp.master_seed, "Override master_seed");
  experiment->add_option("--output-dir", xp.output_dir, "Override output_dir");
  experiment->add_flag("--record-runtime", xp.record_runtime, "Record wall-clock runtimes");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (generate->parsed()) cmd_generate(gen, out);
    if (simulate_cmd->parsed()) cmd_simulate(sim, out);
    if (estimate->parsed()) cmd_estimate(est, out);
    if (exact->parsed()) cmd_exact(ex, out);
    if (score_cmd->parsed()) cmd_score(sc, out);
    if (experiment->parsed()) cmd_experiment(xp, out);
  } catch (const std::exception& e) {
    err << "bar: " << e.what() << '\n';
    return kExitPrecondition;
  }
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace bar
