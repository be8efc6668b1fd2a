#include "smav/scenario.hpp"

#include "smav/constraint.hpp"

#include <cmath>
#include <sstream>

namespace smav {

double TimeSeries::at(double t) const {
  if (points.empty()) return 0.0;
  if (t <= points.front().first) return points.front().second;
  if (t >= points.back().first) return points.back().second;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (t <= points[i].first) {
      const auto& [t0, v0] = points[i - 1];
      const auto& [t1, v1] = points[i];
      if (t1 == t0) return v1;
      const double s = (t - t0) / (t1 - t0);
      return v0 + s * (v1 - v0);
    }
  }
  return points.back().second;
}

Eigen::VectorXd Profile::evaluate(const Mesh1D& mesh) const {
  const int n = mesh.n_nodes();
  Eigen::VectorXd out(n);
  switch (kind) {
    case Kind::Constant:
      out.setConstant(value);
      break;
    case Kind::Cosine: {
      const double L = mesh.length();
      for (int i = 0; i < n; ++i)
        out[i] = mean + amplitude * std::cos(mode * M_PI * mesh.nodes[i] / L);
      break;
    }
    case Kind::Nodes:
      if (static_cast<int>(nodes.size()) != n)
        throw std::invalid_argument("Profile: nodal value count does not match the mesh");
      for (int i = 0; i < n; ++i) out[i] = nodes[i];
      break;
  }
  return out;
}

LoadSample Scenario::loads_at(double t) const {
  return {f.at(t), g.at(t), R.at(t), Pi_left.at(t), Pi_right.at(t)};
}

ValidationReport validate_scenario(const Scenario& sc) {
  ValidationReport report;
  auto err = [&report](const std::string& msg) { report.errors.push_back(msg); };

  if (!(sc.mesh.length > 0.0)) err("mesh.length must be positive");
  if (sc.mesh.n_elements < 2) err("mesh.elements must be at least 2");
  for (const auto& msg : validate(sc.material)) report.errors.push_back("material: " + msg);
  if (!(sc.config.dt > 0.0)) err("time.dt must be positive");
  if (!(sc.config.t_end > 0.0)) err("time.t_end must be positive");
  if (sc.config.snapshot_stride < 1) err("time.stride must be at least 1");
  if (!(sc.config.epsilon > 0.0)) err("solver.epsilon must be positive");
  if (!(sc.config.fp_tol > 0.0)) err("solver.fp_tol must be positive");
  if (sc.config.fp_max_iter < 1) err("solver.fp_max_iter must be at least 1");
  if (!(sc.config.picard_relaxation > 0.0) || sc.config.picard_relaxation > 1.0)
    err("solver.picard_relaxation must lie in (0, 1]");
  if (!(sc.material.c_visc > 0.0))
    err("material.c_visc must be positive: the discrete phase solve needs an "
        "invertible viscous operator");
  if (!(sc.material.C_bar > 0.0))
    err("material.C_bar must be positive: the discrete entropy solve needs an "
        "invertible time-derivative term");
  if (!report.errors.empty()) return report;

  const Mesh1D mesh = build_mesh(sc.mesh.length, sc.mesh.n_elements, sc.mesh.gamma0_side);
  Eigen::VectorXd theta0, u0;
  std::array<Eigen::VectorXd, 3> b0;
  try {
    theta0 = sc.theta0.evaluate(mesh);
    u0 = sc.u0.evaluate(mesh);
    for (int i = 0; i < 3; ++i) b0[i] = sc.beta0[i].evaluate(mesh);
  } catch (const std::exception& e) {
    err(e.what());
    return report;
  }

  for (int j = 0; j < mesh.n_nodes(); ++j) {
    if (!(theta0[j] > 0.0)) {
      std::ostringstream os;
      os << "theta0 must be positive at node " << j
         << ": entropy formulation requires theta in the image of exp";
      err(os.str());
    }
    const PhasePoint b{b0[0][j], b0[1][j], b0[2][j]};
    if (!in_c(b)) {
      std::ostringstream os;
      os << "beta0 at node " << j << " = (" << b[0] << ", " << b[1] << ", " << b[2]
         << ") is not admissible: fractions must be nonnegative with sum <= 1";
      err(os.str());
    }
  }
  for (int gi : mesh.gamma0_nodes) {
    if (u0[gi] != 0.0) {
      std::ostringstream os;
      os << "u0 must vanish on the essential boundary (node " << gi << ")";
      err(os.str());
    }
  }

  // The unit initial sum is a modeling simplification, not a well-posedness
  // requirement; report it as a warning only.
  double worst = 0.0;
  for (int j = 0; j < mesh.n_nodes(); ++j) {
    const double s = b0[0][j] + b0[1][j] + b0[2][j];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  if (worst > 1e-12) {
    std::ostringstream os;
    os << "initial fractions do not sum to 1 (max deviation " << worst
       << "); the mass balance is integrated from the given data";
    report.warnings.push_back(os.str());
  }

  return report;
}

}  // namespace smav
