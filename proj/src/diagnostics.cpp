#include "smav/diagnostics.hpp"

#include "smav/constraint.hpp"
#include "smav/regularized.hpp"

#include <cmath>
#include <stdexcept>

namespace smav {

double lyapunov(const Stepper& stepper, const StateSnapshot& s) {
  const MaterialParams& m = stepper.material();
  const RegularizationParams reg{stepper.config().epsilon};
  const Vec& ml = stepper.mass_lumped();
  const SpMat& stiff = stepper.stiffness();

  double thermal = 0.0;
  for (int j = 0; j < s.w.size(); ++j)
    thermal += ml[j] * (reg_exp_primitive(s.w[j], reg) + 0.5 * s.w[j] * s.w[j]);

  double interfacial = 0.0;
  for (int i = 0; i < 3; ++i) interfacial += 0.5 * m.k_grad * s.beta[i].dot(stiff * s.beta[i]);

  double indicator = 0.0;
  for (int j = 0; j < s.w.size(); ++j) {
    const double d = dist_c(beta_at(s.beta, j));
    indicator += ml[j] * d * d / (2.0 * stepper.config().epsilon);
  }

  const Vec u_free = restrict_vector(s.u, stepper.dofs());
  const double elastic = 0.5 * u_free.dot(stepper.elasticity_reduced() * u_free);

  return thermal + interfacial + indicator + elastic;
}

LedgerEntry ledger_step(const Stepper& stepper, const StateSnapshot& prev,
                        const StateSnapshot& next, const LoadSample& loads, double dt) {
  const MaterialParams& m = stepper.material();
  const Mesh1D& mesh = stepper.mesh();
  const Vec& ml = stepper.mass_lumped();
  const SpMat& stiff = stepper.stiffness();
  const double eps = stepper.config().epsilon;

  LedgerEntry entry;
  const double lyap_prev = lyapunov(stepper, prev);
  entry.lyapunov = lyapunov(stepper, next);

  // Dissipation: viscous phase rate, thermal gradient, pressure penalty.
  double d_visc = 0.0;
  std::array<Vec, 3> rate;
  for (int i = 0; i < 3; ++i) {
    rate[i] = (next.beta[i] - prev.beta[i]) / dt;
    d_visc += m.c_visc * rate[i].dot(ml.cwiseProduct(rate[i]));
    d_visc += m.upsilon * rate[i].dot(stiff * rate[i]);
  }
  const double d_thermal = m.lambda * next.w.dot(stiff * next.w);
  double p_sq = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) p_sq += mesh.h(e) * next.p[e] * next.p[e];
  entry.dissipation_inc = dt * (d_visc + d_thermal + eps * p_sq);

  // Work: external loads paired with the same multipliers the scheme uses,
  // plus the coupling-stress exchange terms.
  const Vec theta = stepper.temperature(next.w);
  const Vec u_rate = (next.u - prev.u) / dt;
  const double w_f = stepper.load_vector_f(loads).dot(u_rate);
  const double w_r = stepper.load_vector_r(loads).dot(theta + next.w);

  Vec tau_nodal(mesh.n_nodes()), coupling(mesh.n_nodes());
  for (int j = 0; j < mesh.n_nodes(); ++j) {
    tau_nodal[j] = coupling_stress(theta[j], m);
    coupling[j] = (next.beta[0][j] - next.beta[1][j]) * tau_nodal[j];
  }
  const Vec ones_elem = Vec::Ones(mesh.n_elements());
  const Vec strain = divergence(mesh, next.u);
  const double w_tau = u_rate.dot(mixed_gradient_load(mesh, coupling, ones_elem)) +
                       (rate[0] - rate[1]).dot(mixed_value_load(mesh, tau_nodal, strain));
  entry.work_inc = dt * (w_f + w_r + w_tau);

  entry.violation = entry.lyapunov + entry.dissipation_inc - lyap_prev - entry.work_inc;

  entry.cross_pressure = dt * eps * p_sq;
  const Vec dbeta3 = next.beta[2] - prev.beta[2];
  entry.cross_latent =
      (m.l_a / m.theta_0) * dbeta3.dot(ml.cwiseProduct(next.w + Vec::Constant(next.w.size(), m.theta_0)));
  entry.cross_wgrad = dt * m.lambda * next.w.dot(stiff * theta);
  return entry;
}

AuditResult energy_audit(const Trajectory& traj, const Scenario& sc) {
  const Mesh1D mesh = build_mesh(sc.mesh.length, sc.mesh.n_elements, sc.mesh.gamma0_side);
  Stepper stepper(mesh, sc.material, sc.config);

  AuditResult result;
  for (std::size_t n = 1; n < traj.states.size(); ++n) {
    const StateSnapshot& a = traj.states[n - 1];
    const StateSnapshot& b = traj.states[n];
    const double dt = b.t - a.t;
    const LoadSample loads = sc.loads_at(b.t);
    const LedgerEntry entry = ledger_step(stepper, a, b, loads, dt);
    result.steps.push_back(entry);

    const bool no_source = loads.f == 0.0 && loads.g == 0.0 && loads.R == 0.0 &&
                           loads.Pi_left == 0.0 && loads.Pi_right == 0.0;
    const bool tau_off = stepper.temperature(a.w).minCoeff() >= sc.material.theta_c &&
                         stepper.temperature(b.w).minCoeff() >= sc.material.theta_c;
    if (no_source && tau_off) {
      const double lyap_prev = entry.lyapunov + entry.dissipation_inc - entry.work_inc - entry.violation;
      if (entry.violation > 1e-8 * (1.0 + std::abs(lyap_prev))) ++result.flagged;
    }
  }
  return result;
}

double fitted_order(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fitted_order: need at least two samples");
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double pressure_l2q(const Stepper& stepper, const Trajectory& traj) {
  const Mesh1D& mesh = stepper.mesh();
  double acc = 0.0;
  for (std::size_t n = 1; n < traj.states.size(); ++n) {
    const double dt = traj.states[n].t - traj.states[n - 1].t;
    for (int e = 0; e < mesh.n_elements(); ++e)
      acc += dt * mesh.h(e) * traj.states[n].p[e] * traj.states[n].p[e];
  }
  return std::sqrt(acc);
}

double max_constraint_residual(const Trajectory& traj) {
  double worst = 0.0;
  for (const auto& s : traj.states) {
    for (int j = 0; j < s.w.size(); ++j) worst = std::max(worst, dist_c(beta_at(s.beta, j)));
  }
  return worst;
}

double integrated_mass_drift(const Stepper& stepper, const Trajectory& traj) {
  const Mesh1D& mesh = stepper.mesh();
  const double eps = stepper.config().epsilon;
  const auto sum_beta_mean = [&](const StateSnapshot& s) {
    Vec total = s.beta[0] + s.beta[1] + s.beta[2];
    return element_mean(mesh, total);
  };

  const Vec base = sum_beta_mean(traj.states.front()) + divergence(mesh, traj.states.front().u);
  Vec pressure_time_integral = Vec::Zero(mesh.n_elements());
  double worst = 0.0;
  for (std::size_t n = 1; n < traj.states.size(); ++n) {
    const double dt = traj.states[n].t - traj.states[n - 1].t;
    pressure_time_integral += dt * traj.states[n].p;
    const Vec current = sum_beta_mean(traj.states[n]) + divergence(mesh, traj.states[n].u);
    const Vec defect = current - base - eps * pressure_time_integral;
    worst = std::max(worst, defect.cwiseAbs().maxCoeff());
  }
  return worst;
}

SweepResult epsilon_sweep(const Scenario& sc, const std::vector<double>& epsilons) {
  if (epsilons.size() < 3)
    throw std::invalid_argument("epsilon_sweep: at least 3 values spanning 2 decades required");
  double lo = epsilons[0], hi = epsilons[0];
  for (double e : epsilons) {
    if (!(e > 0.0)) throw std::invalid_argument("epsilon_sweep: epsilon values must be positive");
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  if (hi / lo < 100.0)
    throw std::invalid_argument("epsilon_sweep: at least 3 values spanning 2 decades required");

  SweepResult result;
  for (double eps : epsilons) {
    Scenario run_sc = sc;
    run_sc.config.epsilon = eps;
    run_sc.config.dt = std::min(sc.config.dt, 0.5 * eps);

    Trajectory traj;
    try {
      traj = run_simulation(run_sc);
    } catch (const std::exception& e) {
      result.completed = false;
      result.failure = e.what();
      break;
    }
    if (!traj.completed) {
      result.completed = false;
      result.failure = traj.failure;
      break;
    }

    const Mesh1D mesh = build_mesh(run_sc.mesh.length, run_sc.mesh.n_elements, run_sc.mesh.gamma0_side);
    Stepper stepper(mesh, run_sc.material, run_sc.config);
    result.epsilons.push_back(eps);
    result.constraint_residuals.push_back(max_constraint_residual(traj));
    const double p_norm = pressure_l2q(stepper, traj);
    result.pressure_norms.push_back(p_norm);
    result.mass_residuals.push_back(eps * p_norm);
  }

  if (result.epsilons.size() >= 2) {
    result.constraint_order = fitted_order(result.epsilons, result.constraint_residuals);
    result.mass_order = fitted_order(result.epsilons, result.mass_residuals);
  }
  return result;
}

namespace {

double trajectory_difference_sq(const Stepper& stepper, const Trajectory& a, const Trajectory& b) {
  if (a.states.size() != b.states.size())
    throw std::invalid_argument("trajectory difference: runs have different lengths");
  const Vec& ml = stepper.mass_lumped();
  const SpMat& stiff = stepper.stiffness();
  const SpMat& a_form = stepper.elasticity_reduced();
  const DofMap& dofs = stepper.dofs();

  const auto h_norm_sq = [&](const Vec& v) { return v.dot(ml.cwiseProduct(v)); };
  const auto v_norm_sq = [&](const Vec& v) { return h_norm_sq(v) + v.dot(stiff * v); };
  const auto w_norm_sq = [&](const Vec& v) {
    const Vec vf = restrict_vector(v, dofs);
    return vf.dot(a_form * vf);
  };

  double w_linf = 0.0, w_l2v = 0.0, u_w12 = 0.0, beta_w12 = 0.0;
  for (std::size_t n = 0; n < a.states.size(); ++n) {
    const Vec dw = a.states[n].w - b.states[n].w;
    w_linf = std::max(w_linf, h_norm_sq(dw));
    if (n == 0) continue;
    const double dt = a.states[n].t - a.states[n - 1].t;
    w_l2v += dt * v_norm_sq(dw);
    const Vec du = a.states[n].u - b.states[n].u;
    const Vec du_prev = a.states[n - 1].u - b.states[n - 1].u;
    u_w12 += dt * (w_norm_sq(du) + w_norm_sq((du - du_prev) / dt));
    for (int i = 0; i < 3; ++i) {
      const Vec db = a.states[n].beta[i] - b.states[n].beta[i];
      const Vec db_prev = a.states[n - 1].beta[i] - b.states[n - 1].beta[i];
      beta_w12 += dt * (v_norm_sq(db) + v_norm_sq((db - db_prev) / dt));
    }
  }
  return w_linf + w_l2v + u_w12 + beta_w12;
}

}  // namespace

std::vector<DependRow> continuous_dependence_experiment(const Scenario& sc,
                                                        const std::vector<double>& deltas) {
  const Mesh1D mesh = build_mesh(sc.mesh.length, sc.mesh.n_elements, sc.mesh.gamma0_side);
  Stepper stepper(mesh, sc.material, sc.config);

  Vec profile(mesh.n_nodes());
  for (int j = 0; j < mesh.n_nodes(); ++j)
    profile[j] = std::cos(M_PI * mesh.nodes[j] / mesh.length());
  const double profile_h_sq = profile.dot(stepper.mass_lumped().cwiseProduct(profile));

  const Trajectory base = run_simulation(sc);
  if (!base.completed) throw SolverError("continuous dependence: baseline run failed: " + base.failure);

  std::vector<DependRow> rows;
  for (double delta : deltas) {
    StateSnapshot init = initial_state(sc, mesh);
    init.w += delta * profile;
    const Trajectory perturbed = run_simulation(sc, &init);
    if (!perturbed.completed)
      throw SolverError("continuous dependence: perturbed run failed: " + perturbed.failure);
    DependRow row;
    row.delta = delta;
    row.rhs = delta * delta * profile_h_sq;
    row.lhs = trajectory_difference_sq(stepper, perturbed, base);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace smav
