#pragma once

#include "smav/types.hpp"

namespace smav {

/// Shared regularization parameter: Yosida step, temperature cap, pressure penalty.
struct RegularizationParams {
  double epsilon = 1e-2;
};

/// Lipschitz-capped exponential: exp(r) for r <= 1/eps, affine with slope
/// exp(1/eps) beyond. Strictly increasing, C^1 at the junction, positive.
double reg_exp(double r, const RegularizationParams& reg);

/// Antiderivative 1 + integral_0^r reg_exp(s) ds, in closed form per branch.
double reg_exp_primitive(double r, const RegularizationParams& reg);

/// Exact inverse of reg_exp. Throws std::domain_error for s <= 0.
double reg_log(double s, const RegularizationParams& reg);

/// Derivative of reg_log (closed form); satisfies s * d(reg_log)/ds >= 1.
double reg_log_derivative(double s, const RegularizationParams& reg);

/// Stress-temperature coupling tau(theta): (theta - theta_c) * tau_bar below
/// theta_c, zero above. Throws std::domain_error for theta <= 0.
double coupling_stress(double theta, const MaterialParams& m);

}  // namespace smav
