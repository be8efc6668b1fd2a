#include "smav/constitutive.hpp"

#include "smav/constraint.hpp"
#include "smav/regularized.hpp"

#include <cmath>
#include <stdexcept>

namespace smav {

std::vector<std::string> validate(const MaterialParams& m) {
  std::vector<std::string> errors;
  if (!(m.theta_0 > 0.0)) errors.push_back("theta_0 must be positive");
  if (!(m.theta_c > m.theta_0)) errors.push_back("theta_c must exceed theta_0");
  if (m.tau_bar > 0.0) errors.push_back("tau_bar must be nonpositive");
  if (!(m.K > 0.0)) errors.push_back("K must be positive");
  if (!(m.k_grad > 0.0)) errors.push_back("k_grad must be positive");
  if (m.C_bar < 0.0) errors.push_back("C_bar must be nonnegative");
  if (m.c_visc < 0.0) errors.push_back("c_visc must be nonnegative");
  if (m.upsilon < 0.0) errors.push_back("upsilon must be nonnegative");
  if (m.lambda < 0.0) errors.push_back("lambda must be nonnegative");
  return errors;
}

namespace {
void require_theta(double theta) {
  if (!(theta > 0.0)) throw std::domain_error("theta must be positive");
}
}  // namespace

std::optional<double> free_energy(const LocalState& s, const MaterialParams& m) {
  require_theta(s.theta);
  if (!in_c(s.beta)) return std::nullopt;
  const double tau = coupling_stress(s.theta, m);
  const double elastic = 0.5 * s.beta.sum() * m.K * s.strain * s.strain;
  const double coupling = -(s.beta[0] - s.beta[1]) * tau * s.strain;
  const double latent = -s.beta[2] * (m.l_a / m.theta_0) * (s.theta - m.theta_0);
  const double thermal = -m.C_bar * s.theta * std::log(s.theta);
  const double interfacial = 0.5 * m.k_grad * s.grad_beta.squaredNorm();
  return elastic + coupling + latent + thermal + interfacial;
}

double stress(const LocalState& s, const MaterialParams& m) {
  require_theta(s.theta);
  const double tau = coupling_stress(s.theta, m);
  return m.K * s.strain - (s.beta[0] - s.beta[1]) * tau - s.pressure;
}

PhasePoint phase_driving_force(const LocalState& s, const MaterialParams& m) {
  require_theta(s.theta);
  const double tau = coupling_stress(s.theta, m);
  const double p = s.pressure;
  return {tau * s.strain + p, -tau * s.strain + p,
          (m.l_a / m.theta_0) * (s.theta - m.theta_0) + p};
}

double entropy_density(const LocalState& s, const MaterialParams& m) {
  require_theta(s.theta);
  return m.C_bar * (1.0 + std::log(s.theta)) + s.beta[2] * m.l_a / m.theta_0;
}

double entropy_flux(double grad_w, const MaterialParams& m) {
  return -m.lambda * grad_w;
}

}  // namespace smav
