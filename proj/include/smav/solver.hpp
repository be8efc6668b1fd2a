#pragma once

#include "smav/operators.hpp"
#include "smav/scenario.hpp"

#include <Eigen/SparseCholesky>

#include <array>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace smav {

/// Full discrete state at one time.
struct StateSnapshot {
  double t = 0.0;
  Vec u;                      // nodal displacement, zero on the essential end
  Vec w;                      // nodal log-temperature
  std::array<Vec, 3> beta;    // nodal fractions
  Vec p;                      // element pressures
};

inline PhasePoint beta_at(const std::array<Vec, 3>& beta, int node) {
  return {beta[0][node], beta[1][node], beta[2][node]};
}

/// Per-step energy bookkeeping (see diagnostics for the audit).
struct LedgerEntry {
  double lyapunov = 0.0;          // value at the end of the step
  double dissipation_inc = 0.0;   // dt * (|beta_t|_V^2 + |grad w|^2 + eps |p|^2)
  double work_inc = 0.0;          // dt * (F, R/Pi, and coupling work)
  double violation = 0.0;         // lyap_new + diss - lyap_old - work
  double cross_pressure = 0.0;    // dt * eps |p|^2 (penalty remainder)
  double cross_latent = 0.0;      // dt * latent-coupling remainder
  double cross_wgrad = 0.0;       // dt * extra thermal dissipation
};

struct StepReport {
  int fp_iterations = 0;
  double fp_final_residual = 0.0;
  int dt_halvings = 0;
  double constraint_residual = 0.0;  // max nodal dist(beta, C)
  double mass_residual = 0.0;        // penalized mass-balance defect
  LedgerEntry ledger;
  std::vector<double> fp_residuals;  // per-sweep residual history
};

struct StepOutcome {
  bool converged = false;
  std::string message;
  StateSnapshot state;
  StepReport report;
};

struct Trajectory {
  std::vector<StateSnapshot> states;   // every step, states[0] = initial data
  std::vector<StepReport> reports;     // one per accepted step
  bool completed = false;
  std::string failure;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Advances the regularized coupled system one implicit step via the staged
/// fixed-point map (entropy -> momentum -> phase). Holds the assembled
/// operators and per-dt factorizations; stateless across calls otherwise.
class Stepper {
 public:
  Stepper(const Mesh1D& mesh, const MaterialParams& mat, const SolverConfig& cfg);

  /// Implicit solve of the entropy balance with a frozen fraction rate.
  Vec solve_entropy(const Vec& w_prev, const Vec& beta3_rate, const LoadSample& loads,
                    double dt) const;

  /// Entropy solve against an already assembled load functional.
  Vec solve_entropy_with_load(const Vec& w_prev, const Vec& beta3_rate, const Vec& load,
                              double dt) const;

  /// Momentum balance with the pressure eliminated through the penalized mass
  /// balance; returns (u, p).
  std::pair<Vec, Vec> solve_momentum(const std::array<Vec, 3>& beta, const Vec& w,
                                     const Vec& beta_rate_sum, const Vec& u_prev,
                                     const LoadSample& loads, double dt) const;

  /// Viscous constrained phase update by relaxed Picard iteration on the
  /// Yosida term. Throws SolverError when the inner iteration stalls.
  std::array<Vec, 3> solve_phase(const Vec& u, const Vec& w, const Vec& p,
                                 const std::array<Vec, 3>& beta_prev, double dt) const;

  StepOutcome fixed_point_step(const StateSnapshot& prev, const LoadSample& loads,
                               double dt) const;

  const Mesh1D& mesh() const { return mesh_; }
  const MaterialParams& material() const { return mat_; }
  const SolverConfig& config() const { return cfg_; }
  const SpMat& stiffness() const { return stiffness_; }
  const SpMat& mass() const { return mass_; }
  const Vec& mass_lumped() const { return mass_lumped_; }
  const SpMat& elasticity_reduced() const { return elasticity_reduced_; }
  const DofMap& dofs() const { return dofs_; }
  const Vec& element_size() const { return elem_size_; }

  /// Nodal theta = capped exponential of w; positive for any finite w.
  Vec temperature(const Vec& w) const;

  /// Assembled mechanical load (body force + traction).
  Vec load_vector_f(const LoadSample& loads) const;

  /// Assembled entropy load (interior source + boundary flux data).
  Vec load_vector_r(const LoadSample& loads) const;

  /// Combined nodal norm used for fixed-point residuals.
  double fp_norm(const std::array<Vec, 3>& a, const std::array<Vec, 3>& b) const;

 private:
  struct Factors {
    std::unique_ptr<Eigen::SimplicialLLT<SpMat>> entropy;
    std::unique_ptr<Eigen::SimplicialLLT<SpMat>> phase;
    std::unique_ptr<Eigen::SimplicialLLT<SpMat>> momentum;
  };
  const Factors& factors(double dt) const;

  Mesh1D mesh_;
  MaterialParams mat_;
  SolverConfig cfg_;
  DofMap dofs_;
  SpMat stiffness_;            // unit-coefficient Neumann Laplacian
  SpMat mass_;
  Vec mass_lumped_;
  Vec elem_size_;
  SpMat elasticity_reduced_;   // K-scaled, essential dofs removed
  SpMat div_op_;               // <H q, v> incidence, n_nodes x n_elements
  SpMat penalty_reduced_;      // H M_p^{-1} H^T on free dofs
  mutable std::map<double, Factors> cache_;
};

/// Initial snapshot from the scenario data (w = log theta0, p = 0).
StateSnapshot initial_state(const Scenario& sc, const Mesh1D& mesh);

/// Full time loop with up to 4 automatic dt halvings per failed step.
/// Throws std::invalid_argument when the scenario does not validate.
/// `init_override`, when given, replaces the scenario's initial state.
Trajectory run_simulation(const Scenario& sc, const StateSnapshot* init_override = nullptr);

}  // namespace smav
