#pragma once

#include "smav/types.hpp"

#include <iosfwd>

namespace smav {

/// Derivative-free projection oracle: shrinking-grid search over the
/// admissible set, independent of the active-set solver. Accurate to roughly
/// `tol` in the projected point.
PhasePoint project_c_grid_oracle(const PhasePoint& x, double tol);

struct CheckSummary {
  int passed = 0;
  int failed = 0;

  bool ok() const { return failed == 0; }
};

/// Built-in property suite: projection vs. the grid oracle, the capped
/// exponential family, manufactured-solution convergence, and the exact bar
/// solution. Prints one line per check.
CheckSummary run_selfcheck(std::ostream& out);

/// L2 error of the implicit entropy solve against a manufactured solution
/// w(x, t) = cos(pi x) exp(-t) on [0, 1].
double manufactured_entropy_error(int n_elements, double dt, double t_end);

/// Max nodal error of the static bar under unit end traction (exact: x/K).
double bar_solution_error(int n_elements);

}  // namespace smav
