#include "smav/selfcheck.hpp"

#include "smav/constraint.hpp"
#include "smav/operators.hpp"
#include "smav/regularized.hpp"
#include "smav/solver.hpp"

#include <cmath>
#include <ostream>
#include <limits>
#include <random>

namespace smav {

namespace {

// Shrinking-grid line search over t in [0, 1].
template <typename Embed>
PhasePoint zoom_segment(const PhasePoint& x, Embed embed, double tol) {
  constexpr int kPoints = 33;
  double center = 0.5, half_width = 0.5, best_t = 0.0;
  double best = (embed(0.0) - x).squaredNorm();
  for (double t : {0.5, 1.0}) {
    const double d = (embed(t) - x).squaredNorm();
    if (d < best) {
      best = d;
      best_t = t;
    }
  }
  while (2.0 * half_width / (kPoints - 1) > tol / 4.0) {
    for (int i = 0; i < kPoints; ++i) {
      const double t = center + half_width * (2.0 * i / (kPoints - 1) - 1.0);
      if (t < 0.0 || t > 1.0) continue;
      const double d = (embed(t) - x).squaredNorm();
      if (d < best) {
        best = d;
        best_t = t;
      }
    }
    center = best_t;
    half_width *= 0.4;
  }
  return embed(best_t);
}

// Shrinking-grid search over the parameter triangle {u, v >= 0, u + v <= 1}.
// Near the triangle's own edges the lattice may stall, but those optima are
// recovered exactly by the segment searches.
template <typename Embed>
PhasePoint zoom_triangle(const PhasePoint& x, Embed embed, double tol) {
  constexpr int kPoints = 11;
  double cu = 1.0 / 3.0, cv = 1.0 / 3.0, half_width = 0.67;
  double best_u = cu, best_v = cv;
  double best = (embed(cu, cv) - x).squaredNorm();
  while (2.0 * half_width / (kPoints - 1) > tol / 4.0) {
    for (int i = 0; i < kPoints; ++i) {
      for (int j = 0; j < kPoints; ++j) {
        const double u = cu + half_width * (2.0 * i / (kPoints - 1) - 1.0);
        const double v = cv + half_width * (2.0 * j / (kPoints - 1) - 1.0);
        if (u < 0.0 || v < 0.0 || u + v > 1.0) continue;
        const double d = (embed(u, v) - x).squaredNorm();
        if (d < best) {
          best = d;
          best_u = u;
          best_v = v;
        }
      }
    }
    cu = best_u;
    cv = best_v;
    half_width *= 0.45;
  }
  return embed(best_u, best_v);
}

}  // namespace

PhasePoint project_c_grid_oracle(const PhasePoint& x, double tol) {
  if (in_c(x)) return x;

  // The projection of an exterior point lies on the boundary: search every
  // face, edge, and vertex with its own feasibility-exact parametrization and
  // keep the best candidate.
  PhasePoint best = PhasePoint::Zero();
  double best_d2 = std::numeric_limits<double>::infinity();
  const auto consider = [&](const PhasePoint& c) {
    const double d2 = (c - x).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = c;
    }
  };

  const PhasePoint verts[4] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (const auto& v : verts) consider(v);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      consider(zoom_segment(
          x, [&](double t) { return PhasePoint((1.0 - t) * verts[i] + t * verts[j]); }, tol));
    }
  }
  consider(zoom_triangle(x, [](double u, double v) { return PhasePoint{0.0, u, v}; }, tol));
  consider(zoom_triangle(x, [](double u, double v) { return PhasePoint{u, 0.0, v}; }, tol));
  consider(zoom_triangle(x, [](double u, double v) { return PhasePoint{u, v, 0.0}; }, tol));
  consider(
      zoom_triangle(x, [](double u, double v) { return PhasePoint{u, v, 1.0 - u - v}; }, tol));
  return best;
}

double manufactured_entropy_error(int n_elements, double dt, double t_end) {
  // w(x, t) = cos(pi x) exp(-t) solves  w_t - w_xx = R  with
  // R = (pi^2 - 1) cos(pi x) exp(-t) and homogeneous Neumann ends.
  const Mesh1D mesh = build_mesh(1.0, n_elements, Side::Left);
  MaterialParams mat;
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.epsilon = 1e-2;
  Stepper stepper(mesh, mat, cfg);

  const int n = mesh.n_nodes();
  const Vec ml = lumped_mass(mesh);
  const auto exact = [&](double t) {
    Vec w(n);
    for (int j = 0; j < n; ++j) w[j] = std::cos(M_PI * mesh.nodes[j]) * std::exp(-t);
    return w;
  };

  Vec w = exact(0.0);
  const Vec zero_rate = Vec::Zero(n);
  const long steps = std::lround(t_end / dt);
  // Source assembled against the same lumped pairing as the solver; the
  // boundary flux data vanishes for this solution.
  for (long s = 1; s <= steps; ++s) {
    const double t = s * dt;
    Vec source(n);
    for (int j = 0; j < n; ++j)
      source[j] = (M_PI * M_PI - 1.0) * std::cos(M_PI * mesh.nodes[j]) * std::exp(-t);
    w = stepper.solve_entropy_with_load(w, zero_rate, ml.cwiseProduct(source), dt);
  }
  const Vec err = w - exact(t_end);
  return std::sqrt(err.dot(ml.cwiseProduct(err)));
}

double bar_solution_error(int n_elements) {
  const Mesh1D mesh = build_mesh(1.0, n_elements, Side::Left);
  MaterialParams mat;
  const SpMat a_full = assemble(OperatorKind::Elasticity, mesh, mat).matrix;
  const DofMap dofs = make_dof_map(mesh);
  const SpMat a_red = restrict_matrix(a_full, dofs);

  Vec load = Vec::Zero(mesh.n_nodes());
  load[mesh.gamma1_nodes[0]] = 1.0;
  Eigen::SimplicialLLT<SpMat> llt(a_red);
  const Vec u_free = llt.solve(restrict_vector(load, dofs));
  const Vec u = expand_vector(u_free, dofs, mesh.n_nodes());

  double worst = 0.0;
  for (int j = 0; j < mesh.n_nodes(); ++j)
    worst = std::max(worst, std::abs(u[j] - mesh.nodes[j] / mat.K));
  return worst;
}

namespace {

bool check(std::ostream& out, CheckSummary& summary, const char* name, bool ok) {
  out << (ok ? "pass" : "FAIL") << "  " << name << "\n";
  ok ? ++summary.passed : ++summary.failed;
  return ok;
}

}  // namespace

CheckSummary run_selfcheck(std::ostream& out) {
  CheckSummary summary;

  {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coord(-2.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const PhasePoint x{coord(rng), coord(rng), coord(rng)};
      worst = std::max(worst, (project_c(x) - project_c_grid_oracle(x, 1e-9)).norm());
    }
    check(out, summary, "projection agrees with the grid oracle to 1e-8", worst <= 1e-8);
  }

  {
    bool ok = true;
    for (double eps : {1.0, 0.1, 0.01}) {
      const RegularizationParams reg{eps};
      for (int i = -400; i <= 400; ++i) {
        const double r = i * 0.05;
        if (reg_exp_primitive(r, reg) < reg_exp(r, reg)) ok = false;
      }
      for (int i = -120; i <= 120; ++i) {
        const double s = std::pow(10.0, i * 0.05);
        if (s * reg_log_derivative(s, reg) < 1.0) ok = false;
        if (std::abs(reg_log(reg_exp(i * 0.05, reg), reg) - i * 0.05) > 1e-12 * (1 + std::abs(i * 0.05)))
          ok = false;
      }
    }
    check(out, summary, "capped exponential family: primitive bound, inverse, slope bound", ok);
  }

  {
    const double e1 = manufactured_entropy_error(8, 1e-5, 0.02);
    const double e2 = manufactured_entropy_error(16, 1e-5, 0.02);
    const double e3 = manufactured_entropy_error(32, 1e-5, 0.02);
    const double order1 = std::log2(e1 / e2);
    const double order2 = std::log2(e2 / e3);
    check(out, summary, "entropy solve: spatial convergence order >= 1.8",
          order1 >= 1.8 && order2 >= 1.8);
  }

  {
    check(out, summary, "elasticity reproduces the exact bar solution to 1e-10",
          bar_solution_error(7) <= 1e-10);
  }

  return summary;
}

}  // namespace smav
