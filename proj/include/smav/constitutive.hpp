#pragma once

#include "smav/types.hpp"

#include <optional>

namespace smav {

/// Free energy density of the mixture. Returns nullopt when beta is outside
/// the admissible set (the indicator contribution is +infinity).
std::optional<double> free_energy(const LocalState& s, const MaterialParams& m);

/// 1D stress K*strain - (b1 - b2)*tau(theta) - p.
double stress(const LocalState& s, const MaterialParams& m);

/// Right-hand side of the phase gradient flow:
///   ( tau(theta)*strain + p,
///    -tau(theta)*strain + p,
///    (l_a/theta_0)*(theta - theta_0) + p ).
PhasePoint phase_driving_force(const LocalState& s, const MaterialParams& m);

/// Entropy density C_bar*(1 + log theta) + b3*l_a/theta_0.
double entropy_density(const LocalState& s, const MaterialParams& m);

/// Entropy flux -lambda * grad(log theta).
double entropy_flux(double grad_w, const MaterialParams& m);

}  // namespace smav
