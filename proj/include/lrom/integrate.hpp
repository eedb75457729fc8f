#pragma once

#include "lrom/filter.hpp"
#include "lrom/rom.hpp"

#include <filesystem>
#include <string>

namespace lrom {

enum class RomModel { galerkin, leray };

std::string to_string(RomModel model);
RomModel rom_model_from_string(const std::string& text);

struct RomRunConfig {
  enum class Initial { project_first_snapshot, explicit_coefficients };

  Index r = 4;
  double dt = 5e-4;
  double t_end = 2.0;
  Initial initial = Initial::project_first_snapshot;
  Vector initial_coefficients; // used when initial == explicit_coefficients
  RomModel model = RomModel::galerkin;
  FilterSpec filter;

  // galerkin demands variant none, leray demands a variant; dt, t_end > 0.
  void validate() const;
};

/// Time series of ROM coefficient vectors. A diverged run is truncated at
/// the last finite state and flagged rather than treated as a failure:
/// unfiltered G-ROM divergence is a result the toolkit reports.
struct Trajectory {
  Vector times;  // k, uniform spacing dt
  Matrix coeffs; // k x r
  std::string model_tag;
  double delta = 0.0;
  bool blown_up = false;
  Index blowup_step = -1;

  Index step_count() const { return coeffs.rows(); }
  Index rank() const { return coeffs.cols(); }
};

/// A a + a' B a. Cost is dominated by the O(r^2)-per-slice tensor
/// contraction, O(r^3) total.
Vector rhs_galerkin(const RomOperators& ops, const Vector& a);

/// Leray right-hand side. fe_level contracts the precomputed filtered
/// tensor (filtering baked in offline); rom_level filters the advecting
/// coefficients through `filter_op` on every evaluation.
Vector rhs_leray(const RomOperators& ops, const RomFilterOperator* filter_op,
                 const Vector& a, FilterVariant variant);

/// Fixed-step RK4 from the configured initial condition; records every step
/// including the start. The rom_level filter is applied inside every RK
/// stage evaluation. Blow-up (|a_i| > 1e8 or non-finite) truncates and
/// flags the trajectory.
Trajectory integrate(const RomOperators& ops, const RomRunConfig& config,
                     const PodBasis& basis, const SnapshotSet& set);

// CSV persistence: header `t,a1,...,ar`, shortest round-trip float format.
void write_trajectory_csv(const Trajectory& traj,
                          const std::filesystem::path& path);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

} // namespace lrom
