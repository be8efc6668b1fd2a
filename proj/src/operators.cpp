#include "smav/operators.hpp"

#include <vector>

namespace smav {

namespace {

SpMat assemble_tridiag(const Mesh1D& mesh, bool stiffness, double scale) {
  const int n = mesh.n_nodes();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double h = mesh.h(e);
    double diag, off;
    if (stiffness) {
      diag = scale / h;
      off = -scale / h;
    } else {
      diag = scale * h / 3.0;
      off = scale * h / 6.0;
    }
    trip.emplace_back(e, e, diag);
    trip.emplace_back(e + 1, e + 1, diag);
    trip.emplace_back(e, e + 1, off);
    trip.emplace_back(e + 1, e, off);
  }
  SpMat a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

}  // namespace

DiscreteOperator assemble(OperatorKind kind, const Mesh1D& mesh, const MaterialParams& m) {
  switch (kind) {
    case OperatorKind::Elasticity:
      return {kind, assemble_tridiag(mesh, true, m.K)};
    case OperatorKind::NeumannLaplacian:
      return {kind, assemble_tridiag(mesh, true, 1.0)};
    case OperatorKind::Mass:
      return {kind, assemble_tridiag(mesh, false, 1.0)};
    case OperatorKind::Divergence: {
      // <H q, v> = sum_e q_e (v(right) - v(left))
      const int n = mesh.n_nodes();
      const int ne = mesh.n_elements();
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(2 * ne);
      for (int e = 0; e < ne; ++e) {
        trip.emplace_back(e, e, -1.0);
        trip.emplace_back(e + 1, e, 1.0);
      }
      SpMat h(n, ne);
      h.setFromTriplets(trip.begin(), trip.end());
      return {kind, h};
    }
  }
  throw std::logic_error("assemble: unknown operator kind");
}

Vec lumped_mass(const Mesh1D& mesh) {
  Vec w = Vec::Zero(mesh.n_nodes());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double half = 0.5 * mesh.h(e);
    w[e] += half;
    w[e + 1] += half;
  }
  return w;
}

Vec element_sizes(const Mesh1D& mesh) {
  Vec h(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) h[e] = mesh.h(e);
  return h;
}

Vec neumann_load(const Mesh1D& mesh, double left_value, double right_value) {
  Vec load = Vec::Zero(mesh.n_nodes());
  load[0] += left_value;
  load[mesh.n_nodes() - 1] += right_value;
  return load;
}

Vec element_mean(const Mesh1D& mesh, const Vec& nodal) {
  Vec mean(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) mean[e] = 0.5 * (nodal[e] + nodal[e + 1]);
  return mean;
}

Vec divergence(const Mesh1D& mesh, const Vec& u) {
  Vec d(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) d[e] = (u[e + 1] - u[e]) / mesh.h(e);
  return d;
}

Vec mixed_gradient_load(const Mesh1D& mesh, const Vec& q_nodal, const Vec& c_elem) {
  Vec load = Vec::Zero(mesh.n_nodes());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    // v' is constant on the element; int_e q = h (q_l + q_r) / 2.
    const double flux = c_elem[e] * 0.5 * (q_nodal[e] + q_nodal[e + 1]);
    load[e] -= flux;
    load[e + 1] += flux;
  }
  return load;
}

Vec mixed_value_load(const Mesh1D& mesh, const Vec& q_nodal, const Vec& c_elem) {
  Vec load = Vec::Zero(mesh.n_nodes());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double h = mesh.h(e);
    const double ql = q_nodal[e], qr = q_nodal[e + 1];
    load[e] += c_elem[e] * h * (2.0 * ql + qr) / 6.0;
    load[e + 1] += c_elem[e] * h * (ql + 2.0 * qr) / 6.0;
  }
  return load;
}

DofMap make_dof_map(const Mesh1D& mesh) {
  DofMap map;
  map.full_to_free.assign(mesh.n_nodes(), -1);
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    if (!mesh.is_gamma0(i)) {
      map.full_to_free[i] = static_cast<int>(map.free.size());
      map.free.push_back(i);
    }
  }
  return map;
}

SpMat restrict_matrix(const SpMat& a, const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(a.nonZeros());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SpMat::InnerIterator it(a, k); it; ++it) {
      const int r = dofs.full_to_free[it.row()];
      const int c = dofs.full_to_free[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  }
  SpMat out(dofs.n_free(), dofs.n_free());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Vec restrict_vector(const Vec& v, const DofMap& dofs) {
  Vec out(dofs.n_free());
  for (int i = 0; i < dofs.n_free(); ++i) out[i] = v[dofs.free[i]];
  return out;
}

Vec expand_vector(const Vec& v_free, const DofMap& dofs, int n_full) {
  Vec out = Vec::Zero(n_full);
  for (int i = 0; i < dofs.n_free(); ++i) out[dofs.free[i]] = v_free[i];
  return out;
}

}  // namespace smav
