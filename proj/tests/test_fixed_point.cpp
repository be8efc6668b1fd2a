#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "presets.hpp"
#include "smav/solver.hpp"

#include <cmath>

using namespace smav;

namespace {

double geometric_mean_ratio(const Trajectory& traj) {
  double log_sum = 0.0;
  int count = 0;
  for (const auto& rep : traj.reports) {
    for (std::size_t k = 1; k < rep.fp_residuals.size(); ++k) {
      if (rep.fp_residuals[k - 1] > 1e-14 && rep.fp_residuals[k] > 0.0) {
        log_sum += std::log(rep.fp_residuals[k] / rep.fp_residuals[k - 1]);
        ++count;
      }
    }
  }
  REQUIRE(count > 0);
  return std::exp(log_sum / count);
}

bool states_identical(const StateSnapshot& a, const StateSnapshot& b) {
  if (a.u != b.u || a.w != b.w || a.p != b.p) return false;
  for (int i = 0; i < 3; ++i)
    if (a.beta[i] != b.beta[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("equilibrium state is a fixed point reached in one sweep") {
  const Scenario sc = presets::trivial_equilibrium();
  const Mesh1D mesh = build_mesh(sc.mesh.length, sc.mesh.n_elements, sc.mesh.gamma0_side);
  Stepper stepper(mesh, sc.material, sc.config);
  const StateSnapshot init = initial_state(sc, mesh);

  const StepOutcome out = stepper.fixed_point_step(init, sc.loads_at(sc.config.dt), sc.config.dt);
  REQUIRE(out.converged);
  CHECK(out.report.fp_iterations == 1);
  CHECK((out.state.u - init.u).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((out.state.w - init.w).cwiseAbs().maxCoeff() <= 1e-13);
  for (int i = 0; i < 3; ++i)
    CHECK((out.state.beta[i] - init.beta[i]).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("trivial scenario: 100 steps stay at the initial state") {
  Scenario sc = presets::trivial_equilibrium();
  const Trajectory traj = run_simulation(sc);
  REQUIRE(traj.completed);
  REQUIRE(traj.states.size() == 101);
  const StateSnapshot& init = traj.states.front();
  for (const auto& s : traj.states) {
    CHECK((s.u - init.u).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((s.w - init.w).cwiseAbs().maxCoeff() <= 1e-12);
    for (int i = 0; i < 3; ++i)
      CHECK((s.beta[i] - init.beta[i]).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("loaded scenario: accepted steps converge and contract") {
  const Scenario sc = presets::loaded();
  const Trajectory traj = run_simulation(sc);
  REQUIRE(traj.completed);
  for (const auto& rep : traj.reports) {
    CHECK(rep.fp_final_residual <= sc.config.fp_tol);
    CHECK(rep.fp_iterations <= sc.config.fp_max_iter);
    CHECK(rep.dt_halvings == 0);
  }
  CHECK(geometric_mean_ratio(traj) < 0.9);
}

TEST_CASE("contraction improves as dt shrinks") {
  Scenario coarse = presets::loaded();
  coarse.config.t_end = 0.1;
  Scenario fine = coarse;
  fine.config.dt = 0.5 * coarse.config.dt;

  const double ratio_coarse = geometric_mean_ratio(run_simulation(coarse));
  const double ratio_fine = geometric_mean_ratio(run_simulation(fine));
  CHECK(ratio_fine < ratio_coarse);
}

TEST_CASE("identical inputs give bit-identical trajectories") {
  const Scenario sc = presets::loaded();
  const Trajectory a = run_simulation(sc);
  const Trajectory b = run_simulation(sc);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t n = 0; n < a.states.size(); ++n) CHECK(states_identical(a.states[n], b.states[n]));
}

TEST_CASE("temperature stays positive at every node of every snapshot") {
  for (const Scenario& sc :
       {presets::trivial_equilibrium(), presets::loaded(), presets::cooling_heating()}) {
    const Trajectory traj = run_simulation(sc);
    REQUIRE(traj.completed);
    const Mesh1D mesh = build_mesh(sc.mesh.length, sc.mesh.n_elements, sc.mesh.gamma0_side);
    Stepper stepper(mesh, sc.material, sc.config);
    for (const auto& s : traj.states) CHECK(stepper.temperature(s.w).minCoeff() > 0.0);
  }
}

TEST_CASE("essential boundary condition holds exactly") {
  const Scenario sc = presets::loaded();
  const Trajectory traj = run_simulation(sc);
  const Mesh1D mesh = build_mesh(sc.mesh.length, sc.mesh.n_elements, sc.mesh.gamma0_side);
  for (const auto& s : traj.states)
    for (int g0 : mesh.gamma0_nodes) CHECK(s.u[g0] == 0.0);
}

TEST_CASE("penalized mass balance holds to solver precision each step") {
  const Scenario sc = presets::loaded();
  const Trajectory traj = run_simulation(sc);
  for (const auto& rep : traj.reports) CHECK(rep.mass_residual <= 1e-8);
}
