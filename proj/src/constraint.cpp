#include "smav/constraint.hpp"

#include <limits>
#include <stdexcept>

namespace smav {

bool in_c(const PhasePoint& x) {
  return x[0] >= 0.0 && x[1] >= 0.0 && x[2] >= 0.0 && x.sum() <= 1.0;
}

namespace {

// Candidate KKT point for a given active set: coordinates in `zero_mask`
// pinned to zero, sum constraint active iff `sum_active`.
struct Candidate {
  PhasePoint p;
  bool feasible = false;
};

Candidate solve_active_set(const PhasePoint& x, int zero_mask, bool sum_active) {
  Candidate c;
  int n_free = 0;
  double free_sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (!(zero_mask & (1 << i))) {
      ++n_free;
      free_sum += x[i];
    }
  }
  if (n_free == 0 && sum_active) return c;  // 0 = 1 has no solution

  const double mu = sum_active ? (free_sum - 1.0) / n_free : 0.0;
  if (sum_active && mu < 0.0) return c;  // multiplier sign

  constexpr double slack = 1e-12;
  PhasePoint p;
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (zero_mask & (1 << i)) {
      p[i] = 0.0;
    } else {
      p[i] = x[i] - mu;
      if (p[i] < -slack) return c;
      if (p[i] < 0.0) p[i] = 0.0;
      sum += p[i];
    }
  }
  if (!sum_active && sum > 1.0 + slack) return c;
  c.p = p;
  c.feasible = true;
  return c;
}

}  // namespace

PhasePoint project_c(const PhasePoint& x) {
  if (in_c(x)) return x;  // boundary ties resolve to the identity

  double best = std::numeric_limits<double>::infinity();
  PhasePoint best_p = PhasePoint::Zero();
  for (int zero_mask = 0; zero_mask < 8; ++zero_mask) {
    for (int sum_active = 0; sum_active <= 1; ++sum_active) {
      const Candidate c = solve_active_set(x, zero_mask, sum_active != 0);
      if (!c.feasible) continue;
      const double d2 = (c.p - x).squaredNorm();
      if (d2 < best) {
        best = d2;
        best_p = c.p;
      }
    }
  }
  return best_p;
}

double dist_c(const PhasePoint& x) { return (x - project_c(x)).norm(); }

PhasePoint yosida(const PhasePoint& x, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("yosida: epsilon must be positive");
  return (x - project_c(x)) / epsilon;
}

}  // namespace smav
