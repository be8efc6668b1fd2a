#include "smav/cli.hpp"

#include "smav/diagnostics.hpp"
#include "smav/io.hpp"
#include "smav/selfcheck.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace smav {

namespace fs = std::filesystem;

namespace {

fs::path default_out(const std::string& suffix) {
  if (const char* env = std::getenv("SMAV_OUT_DIR")) return fs::path(env);
  return fs::path("smav_out_" + suffix);
}

std::optional<Scenario> load_or_report(const std::string& file) {
  const ParseResult parsed = load_scenario(file);
  if (!parsed.ok()) {
    std::cerr << "scenario rejected:\n";
    for (const auto& e : parsed.errors) std::cerr << "  " << e << "\n";
    return std::nullopt;
  }
  return parsed.scenario;
}

int cmd_run(const std::string& file, fs::path out, int stride_override) {
  const auto scenario = load_or_report(file);
  if (!scenario) return 1;
  const ValidationReport report = validate_scenario(*scenario);
  for (const auto& warn : report.warnings) std::cerr << "warning: " << warn << "\n";

  const int stride = stride_override > 0 ? stride_override : scenario->config.snapshot_stride;
  const Trajectory traj = run_simulation(*scenario);
  write_trajectory(traj, *scenario, out, stride);
  if (!traj.completed) {
    std::cerr << "solver failure at t = "
              << (traj.states.empty() ? 0.0 : traj.states.back().t) << ": " << traj.failure
              << "\n";
    std::cerr << "partial trajectory written to " << out << "\n";
    return 2;
  }
  std::cout << "completed " << traj.reports.size() << " steps; output in " << out << "\n";
  return 0;
}

int cmd_audit(const fs::path& dir) {
  StoredTrajectory stored;
  try {
    stored = read_trajectory(dir);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  Trajectory traj;
  traj.states = stored.states;
  traj.completed = true;
  const AuditResult audit = energy_audit(traj, stored.scenario);

  const fs::path out_file = dir / "audit.tsv";
  std::ofstream out(out_file);
  if (!out) {
    std::cerr << "cannot write " << out_file << "\n";
    return 1;
  }
  out << "t\tlyapunov\tdissipation_inc\twork_inc\tviolation\n";
  for (std::size_t n = 0; n < audit.steps.size(); ++n) {
    const LedgerEntry& e = audit.steps[n];
    out << fmt17(traj.states[n + 1].t) << '\t' << fmt17(e.lyapunov) << '\t'
        << fmt17(e.dissipation_inc) << '\t' << fmt17(e.work_inc) << '\t' << fmt17(e.violation)
        << '\n';
  }
  std::cout << "audited " << audit.steps.size() << " steps; " << audit.flagged
            << " ledger violations; table in " << out_file << "\n";
  if (static_cast<int>(stored.states.size()) != stored.timeseries_rows + 1)
    std::cout << "note: snapshots are strided; rerun with --stride 1 for a step-exact audit\n";
  return 0;
}

int cmd_sweep(const std::string& file, const std::vector<double>& epsilons, fs::path out) {
  const auto scenario = load_or_report(file);
  if (!scenario) return 1;

  SweepResult result;
  try {
    result = epsilon_sweep(*scenario, epsilons);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  fs::create_directories(out);
  std::ofstream table(out / "sweep.tsv");
  table << "epsilon\tconstraint_residual\tmass_residual\tpressure_norm\n";
  for (std::size_t i = 0; i < result.epsilons.size(); ++i)
    table << fmt17(result.epsilons[i]) << '\t' << fmt17(result.constraint_residuals[i]) << '\t'
          << fmt17(result.mass_residuals[i]) << '\t' << fmt17(result.pressure_norms[i]) << '\n';

  std::cout << "fitted orders: constraint " << result.constraint_order << ", mass "
            << result.mass_order << "; table in " << (out / "sweep.tsv") << "\n";
  if (!result.completed) {
    std::cerr << "sweep aborted: " << result.failure << " (partial results retained)\n";
    return 2;
  }
  return 0;
}

int cmd_depend(const std::string& file, const std::vector<double>& deltas, fs::path out) {
  const auto scenario = load_or_report(file);
  if (!scenario) return 1;

  std::vector<DependRow> rows;
  try {
    rows = continuous_dependence_experiment(*scenario, deltas);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  fs::create_directories(out);
  std::ofstream table(out / "depend.tsv");
  table << "delta\tlhs\trhs\n";
  for (const auto& row : rows)
    table << fmt17(row.delta) << '\t' << fmt17(row.lhs) << '\t' << fmt17(row.rhs) << '\n';

  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].lhs > 0.0 && rows[i].rhs > 0.0)
      std::cout << "delta " << rows[i - 1].delta << " -> " << rows[i].delta
                << ": lhs ratio " << rows[i - 1].lhs / rows[i].lhs << ", rhs ratio "
                << rows[i - 1].rhs / rows[i].rhs << "\n";
  }
  std::cout << "table in " << (out / "depend.tsv") << "\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"Quasi-static simulator for a constrained three-phase solid "
               "with voids, coupled to an entropy-form heat balance"};
  app.require_subcommand(1);

  std::string scenario_file, out_dir;
  int stride = 0;
  std::vector<double> epsilons, deltas;

  auto* run = app.add_subcommand("run", "integrate a scenario and write the trajectory");
  run->add_option("scenario", scenario_file, "scenario file (JSON)")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--stride", stride, "snapshot stride (default: scenario setting)");

  std::string traj_dir;
  auto* audit = app.add_subcommand("audit", "recompute the energy ledger from snapshots");
  audit->add_option("trajectory-dir", traj_dir, "directory written by `run`")->required();

  auto* sweep = app.add_subcommand("sweep-epsilon", "rerun a scenario across epsilon values");
  sweep->add_option("scenario", scenario_file, "scenario file (JSON)")->required();
  sweep->add_option("--epsilons", epsilons, "comma-separated epsilon list")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out_dir, "output directory");

  auto* depend = app.add_subcommand("depend", "initial-data sensitivity experiment");
  depend->add_option("scenario", scenario_file, "scenario file (JSON)")->required();
  depend->add_option("--deltas", deltas, "comma-separated perturbation sizes")
      ->required()
      ->delimiter(',');
  depend->add_option("--out", out_dir, "output directory");

  auto* check = app.add_subcommand("check", "run the built-in property suite");

  std::vector<std::string> argv_storage = args;
  std::vector<const char*> argv;
  argv.push_back("smav");
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed())
      return cmd_run(scenario_file, out_dir.empty() ? default_out("run") : fs::path(out_dir),
                     stride);
    if (audit->parsed()) return cmd_audit(traj_dir);
    if (sweep->parsed())
      return cmd_sweep(scenario_file, epsilons,
                       out_dir.empty() ? default_out("sweep") : fs::path(out_dir));
    if (depend->parsed())
      return cmd_depend(scenario_file, deltas,
                        out_dir.empty() ? default_out("depend") : fs::path(out_dir));
    if (check->parsed()) {
      const CheckSummary summary = run_selfcheck(std::cout);
      std::cout << summary.passed << " checks passed, " << summary.failed << " failed\n";
      return summary.ok() ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace smav
