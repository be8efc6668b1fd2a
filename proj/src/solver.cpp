#include "smav/solver.hpp"

#include "smav/constraint.hpp"
#include "smav/diagnostics.hpp"
#include "smav/regularized.hpp"

#include <cmath>
#include <sstream>

namespace smav {

namespace {

SpMat diagonal_matrix(const Vec& d) {
  SpMat m(d.size(), d.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(d.size());
  for (int i = 0; i < d.size(); ++i) trip.emplace_back(i, i, d[i]);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SpMat restrict_rows(const SpMat& a, const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(a.nonZeros());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SpMat::InnerIterator it(a, k); it; ++it) {
      const int r = dofs.full_to_free[it.row()];
      if (r >= 0) trip.emplace_back(r, it.col(), it.value());
    }
  }
  SpMat out(dofs.n_free(), a.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace

Stepper::Stepper(const Mesh1D& mesh, const MaterialParams& mat, const SolverConfig& cfg)
    : mesh_(mesh), mat_(mat), cfg_(cfg) {
  dofs_ = make_dof_map(mesh_);
  stiffness_ = assemble(OperatorKind::NeumannLaplacian, mesh_, mat_).matrix;
  mass_ = assemble(OperatorKind::Mass, mesh_, mat_).matrix;
  mass_lumped_ = lumped_mass(mesh_);
  elem_size_ = element_sizes(mesh_);
  elasticity_reduced_ = restrict_matrix(assemble(OperatorKind::Elasticity, mesh_, mat_).matrix, dofs_);
  div_op_ = assemble(OperatorKind::Divergence, mesh_, mat_).matrix;

  const SpMat h_free = restrict_rows(div_op_, dofs_);
  const SpMat scaled = h_free * diagonal_matrix(elem_size_.cwiseInverse());
  penalty_reduced_ = scaled * SpMat(h_free.transpose());
}

const Stepper::Factors& Stepper::factors(double dt) const {
  auto it = cache_.find(dt);
  if (it != cache_.end()) return it->second;

  Factors f;
  const SpMat ml = diagonal_matrix(mass_lumped_);

  SpMat entropy_op = ml * (mat_.C_bar / dt) + stiffness_ * mat_.lambda;
  f.entropy = std::make_unique<Eigen::SimplicialLLT<SpMat>>(entropy_op);
  if (f.entropy->info() != Eigen::Success)
    throw SolverError("entropy operator factorization failed");

  SpMat phase_op = ml * (mat_.c_visc / dt) + stiffness_ * (mat_.upsilon / dt + mat_.k_grad);
  f.phase = std::make_unique<Eigen::SimplicialLLT<SpMat>>(phase_op);
  if (f.phase->info() != Eigen::Success)
    throw SolverError("phase operator factorization failed");

  // The eliminated momentum system reads
  //   A u - (1/(eps dt)) H M_p^{-1} H^T u = rhs,
  // negated so the factored operator is positive definite whenever
  // K * eps * dt < 1.
  const double penalty = 1.0 / (cfg_.epsilon * dt);
  SpMat momentum_op = penalty_reduced_ * penalty - elasticity_reduced_;
  f.momentum = std::make_unique<Eigen::SimplicialLLT<SpMat>>(momentum_op);
  if (f.momentum->info() != Eigen::Success) {
    std::ostringstream os;
    os << "momentum solve ill-conditioned: penalty factor 1/(eps*dt) = " << penalty
       << " does not dominate the elastic operator";
    throw SolverError(os.str());
  }

  auto [pos, inserted] = cache_.emplace(dt, std::move(f));
  return pos->second;
}

Vec Stepper::temperature(const Vec& w) const {
  const RegularizationParams reg{cfg_.epsilon};
  Vec theta(w.size());
  for (int i = 0; i < w.size(); ++i) theta[i] = reg_exp(w[i], reg);
  return theta;
}

Vec Stepper::load_vector_f(const LoadSample& loads) const {
  Vec load = mass_lumped_ * loads.f;
  load[mesh_.gamma1_nodes[0]] += loads.g;
  return load;
}

Vec Stepper::load_vector_r(const LoadSample& loads) const {
  // Boundary flux data enters through the conductivity-scaled natural term.
  Vec load = mass_lumped_ * loads.R;
  load += mat_.lambda * neumann_load(mesh_, loads.Pi_left, loads.Pi_right);
  return load;
}

double Stepper::fp_norm(const std::array<Vec, 3>& a, const std::array<Vec, 3>& b) const {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec d = a[i] - b[i];
    acc += d.dot(mass_lumped_.cwiseProduct(d));
  }
  return std::sqrt(acc);
}

Vec Stepper::solve_entropy(const Vec& w_prev, const Vec& beta3_rate, const LoadSample& loads,
                           double dt) const {
  return solve_entropy_with_load(w_prev, beta3_rate, load_vector_r(loads), dt);
}

Vec Stepper::solve_entropy_with_load(const Vec& w_prev, const Vec& beta3_rate, const Vec& load,
                                     double dt) const {
  Vec rhs = mass_lumped_.cwiseProduct(w_prev) * (mat_.C_bar / dt);
  rhs -= (mat_.l_a / mat_.theta_0) * mass_lumped_.cwiseProduct(beta3_rate);
  rhs += load;
  return factors(dt).entropy->solve(rhs);
}

std::pair<Vec, Vec> Stepper::solve_momentum(const std::array<Vec, 3>& beta, const Vec& w,
                                            const Vec& beta_rate_sum, const Vec& u_prev,
                                            const LoadSample& loads, double dt) const {
  const double eps = cfg_.epsilon;
  const MaterialParams& m = mat_;

  const Vec theta = temperature(w);
  Vec coupling(mesh_.n_nodes());
  for (int j = 0; j < mesh_.n_nodes(); ++j)
    coupling[j] = (beta[0][j] - beta[1][j]) * coupling_stress(theta[j], m);

  const Vec ones_elem = Vec::Ones(mesh_.n_elements());
  const Vec rate_mean = element_mean(mesh_, beta_rate_sum);

  Vec rhs_full = load_vector_f(loads);
  rhs_full += mixed_gradient_load(mesh_, coupling, ones_elem);
  rhs_full += (1.0 / eps) * (div_op_ * rate_mean);

  const Vec u_prev_free = restrict_vector(u_prev, dofs_);
  Vec rhs_free = (1.0 / (eps * dt)) * (penalty_reduced_ * u_prev_free);
  rhs_free -= restrict_vector(rhs_full, dofs_);

  const Vec u_free = factors(dt).momentum->solve(rhs_free);
  const Vec u = expand_vector(u_free, dofs_, mesh_.n_nodes());

  // Elementwise pressure recovery from the penalized mass balance.
  const Vec div_rate = divergence(mesh_, (u - u_prev) / dt);
  const Vec p = (rate_mean + div_rate) / eps;
  return {u, p};
}

std::array<Vec, 3> Stepper::solve_phase(const Vec& u, const Vec& w, const Vec& p,
                                        const std::array<Vec, 3>& beta_prev, double dt) const {
  const int n = mesh_.n_nodes();
  const MaterialParams& m = mat_;
  const double eps = cfg_.epsilon;

  const Vec theta = temperature(w);
  Vec tau_nodal(n);
  for (int j = 0; j < n; ++j) tau_nodal[j] = coupling_stress(theta[j], m);
  const Vec strain = divergence(mesh_, u);
  const Vec ones_nodal = Vec::Ones(n);

  const Vec pressure_load = mixed_value_load(mesh_, ones_nodal, p);
  const Vec tau_strain_load = mixed_value_load(mesh_, tau_nodal, strain);
  Vec thermal(n);
  for (int j = 0; j < n; ++j)
    thermal[j] = (m.l_a / m.theta_0) * (theta[j] - m.theta_0);

  // Base right-hand sides: history term plus the driving-force loads.
  std::array<Vec, 3> rhs;
  const auto history = [&](const Vec& b) {
    return mass_lumped_.cwiseProduct(b) * (m.c_visc / dt) + (m.upsilon / dt) * (stiffness_ * b);
  };
  rhs[0] = history(beta_prev[0]) + pressure_load + tau_strain_load;
  rhs[1] = history(beta_prev[1]) + pressure_load - tau_strain_load;
  rhs[2] = history(beta_prev[2]) + pressure_load + mass_lumped_.cwiseProduct(thermal);

  const auto& llt = *factors(dt).phase;
  const double omega = cfg_.picard_relaxation;
  const double inner_tol = 0.1 * cfg_.fp_tol;
  const int inner_cap = 500;

  std::array<Vec, 3> z = beta_prev;
  for (int sweep = 0; sweep < inner_cap; ++sweep) {
    std::array<Vec, 3> alpha{Vec(n), Vec(n), Vec(n)};
    for (int j = 0; j < n; ++j) {
      const PhasePoint a = yosida(beta_at(z, j), eps);
      alpha[0][j] = a[0];
      alpha[1][j] = a[1];
      alpha[2][j] = a[2];
    }
    std::array<Vec, 3> next;
    for (int i = 0; i < 3; ++i) {
      const Vec cand = llt.solve(rhs[i] - mass_lumped_.cwiseProduct(alpha[i]));
      next[i] = (1.0 - omega) * z[i] + omega * cand;
    }
    const double res = fp_norm(next, z);
    z = next;
    if (res <= inner_tol) return z;
  }
  std::ostringstream os;
  os << "phase update stalled after " << inner_cap
     << " Picard sweeps; dt too large relative to epsilon (dt/epsilon = " << dt / eps << ")";
  throw SolverError(os.str());
}

StepOutcome Stepper::fixed_point_step(const StateSnapshot& prev, const LoadSample& loads,
                                      double dt) const {
  StepOutcome out;
  std::array<Vec, 3> beta_bar = prev.beta;
  Vec w, u, p;
  std::vector<double> residuals;
  bool converged = false;

  try {
    for (int k = 0; k < cfg_.fp_max_iter; ++k) {
      const Vec beta3_rate = (beta_bar[2] - prev.beta[2]) / dt;
      w = solve_entropy(prev.w, beta3_rate, loads, dt);
      Vec rate_sum = Vec::Zero(mesh_.n_nodes());
      for (int i = 0; i < 3; ++i) rate_sum += (beta_bar[i] - prev.beta[i]) / dt;
      std::tie(u, p) = solve_momentum(beta_bar, w, rate_sum, prev.u, loads, dt);
      const std::array<Vec, 3> beta_new = solve_phase(u, w, p, prev.beta, dt);
      const double res = fp_norm(beta_new, beta_bar);
      residuals.push_back(res);
      beta_bar = beta_new;
      if (res <= cfg_.fp_tol) {
        converged = true;
        break;
      }
    }
  } catch (const SolverError& e) {
    out.message = e.what();
    out.report.fp_residuals = residuals;
    return out;
  }

  if (!converged) {
    std::ostringstream os;
    os << "fixed point did not converge within " << cfg_.fp_max_iter
       << " iterations (last residual " << residuals.back() << ")";
    out.message = os.str();
    out.report.fp_residuals = residuals;
    return out;
  }

  // Consistency pass: re-solve the linear stages with the converged fractions
  // so the stored snapshot satisfies them exactly.
  const Vec beta3_rate = (beta_bar[2] - prev.beta[2]) / dt;
  w = solve_entropy(prev.w, beta3_rate, loads, dt);
  Vec rate_sum = Vec::Zero(mesh_.n_nodes());
  for (int i = 0; i < 3; ++i) rate_sum += (beta_bar[i] - prev.beta[i]) / dt;
  std::tie(u, p) = solve_momentum(beta_bar, w, rate_sum, prev.u, loads, dt);

  StateSnapshot next;
  next.t = prev.t + dt;
  next.u = u;
  next.w = w;
  next.beta = beta_bar;
  next.p = p;

  const Vec theta = temperature(w);
  if (!(theta.minCoeff() > 0.0)) throw SolverError("temperature positivity lost");

  StepReport rep;
  rep.fp_iterations = static_cast<int>(residuals.size());
  rep.fp_final_residual = residuals.back();
  rep.fp_residuals = residuals;
  double worst = 0.0;
  for (int j = 0; j < mesh_.n_nodes(); ++j)
    worst = std::max(worst, dist_c(beta_at(beta_bar, j)));
  rep.constraint_residual = worst;

  const Vec rate_mean = element_mean(mesh_, rate_sum);
  const Vec div_rate = divergence(mesh_, (u - prev.u) / dt);
  double acc = 0.0;
  for (int e = 0; e < mesh_.n_elements(); ++e) {
    const double defect = rate_mean[e] + div_rate[e] - cfg_.epsilon * p[e];
    acc += elem_size_[e] * defect * defect;
  }
  rep.mass_residual = std::sqrt(acc);
  rep.ledger = ledger_step(*this, prev, next, loads, dt);

  out.converged = true;
  out.state = std::move(next);
  out.report = std::move(rep);
  return out;
}

StateSnapshot initial_state(const Scenario& sc, const Mesh1D& mesh) {
  StateSnapshot s;
  s.t = 0.0;
  s.u = sc.u0.evaluate(mesh);
  const Vec theta0 = sc.theta0.evaluate(mesh);
  s.w = theta0.array().log().matrix();
  for (int i = 0; i < 3; ++i) s.beta[i] = sc.beta0[i].evaluate(mesh);
  s.p = Vec::Zero(mesh.n_elements());
  return s;
}

namespace {

StepReport merge_reports(const StepReport& a, const StepReport& b, double lyap_final) {
  StepReport out = b;
  out.fp_iterations = a.fp_iterations + b.fp_iterations;
  out.dt_halvings = std::max(a.dt_halvings, b.dt_halvings);
  out.fp_residuals = a.fp_residuals;
  out.fp_residuals.insert(out.fp_residuals.end(), b.fp_residuals.begin(), b.fp_residuals.end());
  out.ledger.lyapunov = lyap_final;
  out.ledger.dissipation_inc = a.ledger.dissipation_inc + b.ledger.dissipation_inc;
  out.ledger.work_inc = a.ledger.work_inc + b.ledger.work_inc;
  out.ledger.violation = a.ledger.violation + b.ledger.violation;
  out.ledger.cross_pressure = a.ledger.cross_pressure + b.ledger.cross_pressure;
  out.ledger.cross_latent = a.ledger.cross_latent + b.ledger.cross_latent;
  out.ledger.cross_wgrad = a.ledger.cross_wgrad + b.ledger.cross_wgrad;
  return out;
}

// Advances one outer step, recursively halving dt on failure (4 levels).
StepOutcome advance(const Stepper& stepper, const Scenario& sc, const StateSnapshot& from,
                    double dt, int depth) {
  StepOutcome out = stepper.fixed_point_step(from, sc.loads_at(from.t + dt), dt);
  if (out.converged || depth >= 4) return out;

  StepOutcome first = advance(stepper, sc, from, 0.5 * dt, depth + 1);
  if (!first.converged) return first;
  StepOutcome second = advance(stepper, sc, first.state, 0.5 * dt, depth + 1);
  if (!second.converged) return second;

  second.report = merge_reports(first.report, second.report, second.report.ledger.lyapunov);
  second.report.dt_halvings = std::max(second.report.dt_halvings, depth + 1);
  return second;
}

}  // namespace

Trajectory run_simulation(const Scenario& sc, const StateSnapshot* init_override) {
  const ValidationReport check = validate_scenario(sc);
  if (!check.ok()) {
    std::string joined = "invalid scenario:";
    for (const auto& e : check.errors) joined += "\n  " + e;
    throw std::invalid_argument(joined);
  }

  const Mesh1D mesh = build_mesh(sc.mesh.length, sc.mesh.n_elements, sc.mesh.gamma0_side);
  Stepper stepper(mesh, sc.material, sc.config);

  Trajectory traj;
  traj.states.push_back(init_override ? *init_override : initial_state(sc, mesh));

  const double dt = sc.config.dt;
  const long n_steps = std::max<long>(1, std::lround(sc.config.t_end / dt));
  for (long n = 1; n <= n_steps; ++n) {
    const StepOutcome out = advance(stepper, sc, traj.states.back(), dt, 0);
    if (!out.converged) {
      traj.failure = out.message;
      return traj;
    }
    traj.states.push_back(out.state);
    traj.reports.push_back(out.report);
  }
  traj.completed = true;
  return traj;
}

}  // namespace smav
