#include "smav/regularized.hpp"

#include <cmath>
#include <stdexcept>

namespace smav {

namespace {
void require_eps(const RegularizationParams& reg) {
  if (!(reg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}
}  // namespace

double reg_exp(double r, const RegularizationParams& reg) {
  require_eps(reg);
  const double cap = 1.0 / reg.epsilon;
  if (r <= cap) return std::exp(r);
  const double e_cap = std::exp(cap);
  return (r - cap) * e_cap + e_cap;
}

double reg_exp_primitive(double r, const RegularizationParams& reg) {
  require_eps(reg);
  const double cap = 1.0 / reg.epsilon;
  // 1 + int_0^r exp = exp(r) on the exponential branch.
  if (r <= cap) return std::exp(r);
  const double e_cap = std::exp(cap);
  const double d = r - cap;
  return e_cap * (1.0 + d + 0.5 * d * d);
}

double reg_log(double s, const RegularizationParams& reg) {
  require_eps(reg);
  if (!(s > 0.0)) throw std::domain_error("reg_log: argument must be positive");
  const double cap = 1.0 / reg.epsilon;
  if (cap > 709.0) return std::log(s);  // affine branch unreachable in double range
  const double e_cap = std::exp(cap);
  if (s <= e_cap) return std::log(s);
  return cap + (s - e_cap) / e_cap;
}

double reg_log_derivative(double s, const RegularizationParams& reg) {
  require_eps(reg);
  if (!(s > 0.0)) throw std::domain_error("reg_log_derivative: argument must be positive");
  const double cap = 1.0 / reg.epsilon;
  if (cap > 709.0) return 1.0 / s;
  const double e_cap = std::exp(cap);
  if (s <= e_cap) return 1.0 / s;
  return 1.0 / e_cap;
}

double coupling_stress(double theta, const MaterialParams& m) {
  if (!(theta > 0.0)) throw std::domain_error("coupling_stress: theta must be positive");
  if (theta >= m.theta_c) return 0.0;
  return (theta - m.theta_c) * m.tau_bar;
}

}  // namespace smav
