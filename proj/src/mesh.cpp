#include "smav/mesh.hpp"

#include <algorithm>
#include <stdexcept>

namespace smav {

bool Mesh1D::is_gamma0(int i) const {
  return std::find(gamma0_nodes.begin(), gamma0_nodes.end(), i) != gamma0_nodes.end();
}

Mesh1D build_mesh(double length, int n_elements, Side gamma0_side) {
  if (!(length > 0.0)) throw std::invalid_argument("build_mesh: length must be positive");
  if (n_elements < 2) throw std::invalid_argument("build_mesh: at least 2 elements required");

  Mesh1D mesh;
  mesh.nodes = Eigen::VectorXd::LinSpaced(n_elements + 1, 0.0, length);
  if (gamma0_side == Side::Left) {
    mesh.gamma0_nodes = {0};
    mesh.gamma1_nodes = {n_elements};
  } else {
    mesh.gamma0_nodes = {n_elements};
    mesh.gamma1_nodes = {0};
  }
  return mesh;
}

}  // namespace smav
