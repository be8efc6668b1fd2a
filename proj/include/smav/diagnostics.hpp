#pragma once

#include "smav/solver.hpp"

namespace smav {

/// Lyapunov functional of a snapshot:
///   int(gamma_hat(w) + w^2/2) + (k/2)|grad beta|^2 + int j_eps(beta) + |u|_A^2/2.
double lyapunov(const Stepper& stepper, const StateSnapshot& s);

/// Energy bookkeeping across one accepted step; pure function of the two
/// snapshots, the loads at the end time, and the discretization.
LedgerEntry ledger_step(const Stepper& stepper, const StateSnapshot& prev,
                        const StateSnapshot& next, const LoadSample& loads, double dt);

struct AuditResult {
  std::vector<LedgerEntry> steps;
  int flagged = 0;  // no-source steps whose ledger inequality fails
};

/// Recomputes the full ledger from stored snapshots and flags violations of
/// the no-source monotonicity (checked only where the step is source-free and
/// the coupling stress is inactive). Violations are reported, never thrown.
AuditResult energy_audit(const Trajectory& traj, const Scenario& sc);

struct SweepResult {
  std::vector<double> epsilons;
  std::vector<double> constraint_residuals;  // max over trajectory of dist(beta, C)
  std::vector<double> mass_residuals;        // L2(Q) norm of eps*p
  std::vector<double> pressure_norms;        // L2(Q) norm of p
  double constraint_order = 0.0;             // log-log slope in eps
  double mass_order = 0.0;
  bool completed = true;
  std::string failure;
};

/// Reruns the scenario per epsilon with dt = min(dt_base, eps/2).
/// Requires at least 3 values spanning at least 2 decades.
SweepResult epsilon_sweep(const Scenario& sc, const std::vector<double>& epsilons);

struct DependRow {
  double delta = 0.0;
  double lhs = 0.0;  // squared trajectory-difference norm
  double rhs = 0.0;  // squared data-difference norm
};

/// Stability harness: perturbs the initial log-temperature by delta*cos(pi x/L)
/// and measures the trajectory difference against the baseline.
std::vector<DependRow> continuous_dependence_experiment(const Scenario& sc,
                                                        const std::vector<double>& deltas);

/// Least-squares slope of log(y) against log(x).
double fitted_order(const std::vector<double>& x, const std::vector<double>& y);

/// L2(Q) accumulation helpers over a trajectory.
double pressure_l2q(const Stepper& stepper, const Trajectory& traj);
double max_constraint_residual(const Trajectory& traj);

/// Elementwise check of the integrated mass balance: the drift of
/// mean(sum beta) + div u from its initial value equals eps * int p dt.
double integrated_mass_drift(const Stepper& stepper, const Trajectory& traj);

}  // namespace smav
