#pragma once

#include "lrom/integrate.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace lrom {

/// Time average of 1/2 ||a(t)||^2 over the post-warmup window; equal to the
/// mean of 1/2 ||u_r||_M^2 by M-orthonormality. Throws if the trajectory has
/// no samples left after the warmup discard.
double mean_kinetic_energy(const Trajectory& traj,
                           double warmup_fraction = 0.2);

struct CalibrationResult {
  double delta_star = 0.0;
  double objective_value = 0.0; // |mean KE(delta_star) - target|
  std::vector<std::pair<double, double>> sweep; // (delta, mean KE); NaN = blow-up
  bool converged = false;
};

struct CalibrationOptions {
  double delta_min = 1e-3;
  double delta_max = 1.0;
  int grid_points = 12;   // log-spaced coarse sweep
  int refine_iters = 20;  // golden-section steps around the best cell
  double warmup_fraction = 0.2;
  FilterVariant variant = FilterVariant::rom_level;
  double rom_dt = 5e-4;
  double rom_t_end = 0.0; // <= 0 means: integrate to the last snapshot time
  int threads = 1;        // sweep runs are independent; refinement is serial
  // Match this energy instead of the projected snapshot data's (used by the
  // self-consistency checks that chase a known-delta run's own energy).
  std::optional<double> target_ke;
};

/// Chooses the filter radius so the L-ROM's mean kinetic energy matches the
/// snapshot data's (target = projected snapshot coefficients). Coarse
/// log-grid sweep, then golden-section refinement of |KE(delta) - target|
/// around the best interior cell. A best value on the grid boundary is
/// returned unrefined with converged = false. Throws CalibrationError if
/// every sweep run blows up.
CalibrationResult calibrate_delta(const RomOperators& ops,
                                  const PodBasis& basis,
                                  const SnapshotSet& set, Index r,
                                  const CalibrationOptions& options);

} // namespace lrom
