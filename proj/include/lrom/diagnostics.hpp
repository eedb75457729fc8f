#pragma once

#include "lrom/integrate.hpp"
#include "lrom/pod.hpp"

#include <filesystem>

namespace lrom {

struct NormSeries {
  Vector times;
  Vector norms; // ||u_r(t)||_M = ||a(t)||_2 by M-orthonormality
  double mean = 0.0;
};

NormSeries l2_norm_series(const Trajectory& traj);

/// Ordered (a_i, a_j) pairs, 1-based mode indices; k x 2.
Matrix phase_portrait(const Trajectory& traj, Index i, Index j);

/// Coefficient trajectory of the snapshot data itself, a_k = Phi_r' M x_k at
/// the snapshot times; the reference ROM trajectories are compared against.
Trajectory project_snapshots(const PodBasis& basis, Index r,
                             const SnapshotSet& set);

// Plot-ready CSV exports.
void write_norm_series_csv(const NormSeries& series,
                           const std::filesystem::path& path);
void write_phase_csv(const Matrix& pairs, const std::filesystem::path& path);
void write_spectrum_csv(const PodBasis& basis,
                        const std::filesystem::path& path);

} // namespace lrom
