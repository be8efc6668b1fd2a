#pragma once

#include <Eigen/Dense>

#include <vector>

namespace smav {

enum class Side { Left, Right };

/// 1D mesh over [0, L] with an essential end (u = 0) and a traction end.
struct Mesh1D {
  Eigen::VectorXd nodes;            // strictly increasing, size n_elements + 1
  std::vector<int> gamma0_nodes;    // essential boundary (u = 0)
  std::vector<int> gamma1_nodes;    // traction boundary

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return n_nodes() - 1; }
  double h(int e) const { return nodes[e + 1] - nodes[e]; }
  double length() const { return nodes[n_nodes() - 1] - nodes[0]; }
  bool is_gamma0(int i) const;
};

/// Uniform mesh; the selected end carries the essential condition, the other
/// end the traction data. Throws std::invalid_argument for n_elements < 2.
Mesh1D build_mesh(double length, int n_elements, Side gamma0_side);

}  // namespace smav
