#pragma once

#include "smav/types.hpp"

namespace smav {

// Admissible fraction set C = { b : b_i >= 0, b1 + b2 + b3 <= 1 }.
// The upper bounds b_i <= 1 are implied by nonnegativity plus the sum bound.

/// Exact membership test (no tolerance band).
bool in_c(const PhasePoint& x);

/// Euclidean projection onto C by exhaustive active-set enumeration.
/// Points already in C are returned unchanged; idempotent.
PhasePoint project_c(const PhasePoint& x);

/// Distance to C.
double dist_c(const PhasePoint& x);

/// Yosida approximation of the constraint reaction: (x - project_c(x)) / epsilon.
/// Lipschitz with constant 1/epsilon, monotone, vanishes on C.
PhasePoint yosida(const PhasePoint& x, double epsilon);

}  // namespace smav
