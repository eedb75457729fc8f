#pragma once

#include "lrom/types.hpp"

#include <filesystem>
#include <optional>
#include <utility>

namespace lrom {

/// M-orthonormal POD modes with their energy spectrum.
struct PodBasis {
  Matrix modes;       // n x d, columns phi_j, phi_i' M phi_j = delta_ij
  Vector eigenvalues; // d, nonincreasing, nonnegative
  std::pair<Index, Index> source_dims{0, 0}; // (n, s) of the generating set

  Index dof_count() const { return modes.rows(); }
  Index rank() const { return modes.cols(); }
};

/// Method of snapshots: builds the s x s correlation matrix
/// C_kl = (1/s) x_k' M x_l, solves its symmetric eigenproblem, maps
/// eigenvectors to spatial modes and M-orthonormalizes them. Modes with
/// lambda_j < drop_tol * lambda_1 are discarded; at most d_max are kept.
/// Each mode's largest-magnitude entry is made positive.
PodBasis compute_pod(const SnapshotSet& set, Index d_max,
                     double drop_tol = 1e-12);

/// a_j = phi_j' M u for j = 1..r.
Vector project(const PodBasis& basis, Index r, const Vector& u,
               const SparseMatrix& mass);

/// sum_j a_j phi_j.
Vector reconstruct(const PodBasis& basis, const Vector& coefficients);

// Persistence: `<base>.pod.bin` (uint64 n, d; then modes column-major and
// eigenvalues as float64) plus `<base>.pod.meta` (text). A filter radius tag
// may be attached when storing filtered bases.
void save_pod(const PodBasis& basis, const std::filesystem::path& base,
              std::optional<double> delta_tag = std::nullopt);
PodBasis load_pod(const std::filesystem::path& base,
                  std::optional<double>* delta_tag = nullptr);

} // namespace lrom
