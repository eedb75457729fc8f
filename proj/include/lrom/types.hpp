#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>

namespace lrom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;

enum class BoundaryKind { periodic, dirichlet };

std::string to_string(BoundaryKind bc);
BoundaryKind boundary_from_string(const std::string& text);

/// Grid and physics metadata carried alongside a snapshot matrix.
struct DomainMeta {
  Index grid_size = 0;
  double domain_length = 1.0;
  double viscosity = 0.0;
  BoundaryKind boundary = BoundaryKind::periodic;
};

/// Full-order state matrix plus the discrete operators that define the
/// inner products every downstream stage uses.
///
/// Immutable by convention once validated; safe to share across threads
/// read-only.
struct SnapshotSet {
  Matrix states;          // n x s, column = one snapshot
  Vector times;           // s, strictly increasing
  SparseMatrix mass;      // n x n, SPD
  SparseMatrix stiffness; // n x n, symmetric PSD
  DomainMeta meta;

  Index dof_count() const { return states.rows(); }
  Index snapshot_count() const { return states.cols(); }

  // Checks every documented invariant eagerly; SPD/PSD are spot-checked
  // on 16 deterministic pseudo-random vectors, not factorized.
  void validate() const;
};

} // namespace lrom
