#pragma once

#include "smav/mesh.hpp"
#include "smav/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace smav {

/// Piecewise-linear time series; values clamp to the first/last breakpoint
/// outside the covered range. An empty series evaluates to zero.
struct TimeSeries {
  std::vector<std::pair<double, double>> points;  // (t, value), t nondecreasing

  double at(double t) const;
  bool empty() const { return points.empty(); }
};

/// Spatial profile for initial conditions.
struct Profile {
  enum class Kind { Constant, Cosine, Nodes };
  Kind kind = Kind::Constant;
  double value = 0.0;                // Constant
  double mean = 0.0, amplitude = 0.0;
  int mode = 1;                      // Cosine: mean + amplitude*cos(mode*pi*x/L)
  std::vector<double> nodes;         // Nodes: explicit nodal values

  Eigen::VectorXd evaluate(const Mesh1D& mesh) const;
};

struct MeshSpec {
  double length = 1.0;
  int n_elements = 32;
  Side gamma0_side = Side::Left;
};

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 0.1;
  double epsilon = 1e-2;
  double fp_tol = 1e-10;
  int fp_max_iter = 50;
  double picard_relaxation = 0.7;
  int snapshot_stride = 1;
};

/// Instantaneous load data.
struct LoadSample {
  double f = 0.0;        // uniform body force
  double g = 0.0;        // traction at the gamma1 end
  double R = 0.0;        // uniform entropy source
  double Pi_left = 0.0;  // boundary entropy flux data
  double Pi_right = 0.0;
};

struct Scenario {
  MeshSpec mesh;
  MaterialParams material;
  Profile u0, theta0;
  std::array<Profile, 3> beta0;
  TimeSeries f, g, R, Pi_left, Pi_right;
  SolverConfig config;

  LoadSample loads_at(double t) const;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

/// Field-level validation of the scenario, including nodal admissibility of
/// the initial fractions and positivity of the initial temperature.
ValidationReport validate_scenario(const Scenario& sc);

}  // namespace smav
