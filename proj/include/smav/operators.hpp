#pragma once

#include "smav/mesh.hpp"
#include "smav/types.hpp"

#include <Eigen/Sparse>

namespace smav {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

enum class OperatorKind {
  Elasticity,       // a(u, v) = int K u' v', coercive on the constrained space
  NeumannLaplacian, // int u' v', kernel = constants
  Divergence,       // <H q, v> = int q div v, q element-constant
  Mass              // int u v
};

struct DiscreteOperator {
  OperatorKind kind;
  SpMat matrix;  // n_nodes x n_nodes, or n_nodes x n_elements for Divergence
};

/// P1 assembly of the requested operator. Only Elasticity is scaled (by K);
/// the Laplacian and mass carry unit coefficient, callers apply k/upsilon/lambda.
DiscreteOperator assemble(OperatorKind kind, const Mesh1D& mesh, const MaterialParams& m);

/// Row-sum (trapezoidal) mass weights.
Vec lumped_mass(const Mesh1D& mesh);

/// Element lengths = mass of the piecewise-constant pressure basis.
Vec element_sizes(const Mesh1D& mesh);

/// Load from interior source R (uniform) and boundary values: in 1D the
/// boundary integral reduces to point evaluation at the two end nodes.
Vec neumann_load(const Mesh1D& mesh, double left_value, double right_value);

/// Element means of a nodal field (exact L2 projection onto P0).
Vec element_mean(const Mesh1D& mesh, const Vec& nodal);

/// Element-constant derivative of a nodal field.
Vec divergence(const Mesh1D& mesh, const Vec& u);

/// Load vector of v -> int q c v' for nodal q (P1) and element-constant c;
/// exact for the mixed polynomial degree.
Vec mixed_gradient_load(const Mesh1D& mesh, const Vec& q_nodal, const Vec& c_elem);

/// Load vector of v -> int (q c) v for nodal q and element-constant c, exact.
Vec mixed_value_load(const Mesh1D& mesh, const Vec& q_nodal, const Vec& c_elem);

/// Free (non-essential) degrees of freedom.
struct DofMap {
  std::vector<int> free;          // free node indices in order
  std::vector<int> full_to_free;  // -1 on constrained nodes

  int n_free() const { return static_cast<int>(free.size()); }
};

DofMap make_dof_map(const Mesh1D& mesh);

SpMat restrict_matrix(const SpMat& a, const DofMap& dofs);
Vec restrict_vector(const Vec& v, const DofMap& dofs);
Vec expand_vector(const Vec& v_free, const DofMap& dofs, int n_full);

}  // namespace smav
