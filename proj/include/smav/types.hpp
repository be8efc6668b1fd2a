#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace smav {

/// Triple of volume fractions (two martensite variants, austenite).
using PhasePoint = Eigen::Vector3d;

/// Physical constants of the alloy. Defaults are the normalized set
/// c = k = l_a/theta_0 = C_bar = lambda = upsilon = 1 with theta_c = 2*theta_0
/// and tau_bar = -1.
struct MaterialParams {
  double K = 1.0;         // elastic modulus (scalar in 1D)
  double C_bar = 1.0;     // volumetric heat capacity
  double l_a = 1.0;       // latent heat of the martensite-austenite change
  double theta_0 = 1.0;   // phase-equilibrium temperature (absolute)
  double theta_c = 2.0;   // stress-coupling cutoff temperature (absolute)
  double tau_bar = -1.0;  // stress-temperature slope, <= 0
  double c_visc = 1.0;    // phase change viscosity
  double k_grad = 1.0;    // interfacial energy coefficient
  double upsilon = 1.0;   // gradient viscosity
  double lambda = 1.0;    // thermal conductivity
};

/// Field-level error messages; empty means the parameter set is admissible.
std::vector<std::string> validate(const MaterialParams& m);

/// Pointwise state used by the constitutive relations.
struct LocalState {
  double strain = 0.0;                            // du/dx
  PhasePoint beta = PhasePoint::Zero();           // fractions
  PhasePoint grad_beta = PhasePoint::Zero();      // d(beta_i)/dx
  double theta = 1.0;                             // absolute temperature, > 0
  double pressure = 0.0;                          // mixture pressure
};

}  // namespace smav
