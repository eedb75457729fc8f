#pragma once

#include "lrom/types.hpp"

#include <utility>

namespace lrom {

/// Desk-scale full-order model: 1D periodic viscous Burgers,
/// u_t + u u_x = nu u_xx, piecewise-linear FE operators on a uniform grid,
/// explicit RK4 in time.
struct BurgersConfig {
  enum class Initial { sine, two_wave, custom };

  Index n = 256;
  double domain_length = 1.0;
  double nu = 0.01;
  double dt = 2.5e-4;
  double t_end = 2.0;
  Index snapshot_stride = 16;
  Initial initial = Initial::two_wave;
  Vector custom_samples; // used only when initial == custom

  Index step_count() const;
  Vector initial_state() const;

  // n >= 8, positive dt/t_end, stride >= 1, at least two snapshots, and the
  // CFL guard dt <= 0.9 * min(h/u_max, h^2/(2 nu)) against the initial state.
  // The guard is a necessary sanity check, not a stability proof; run_fom
  // still watches for blow-up.
  void validate() const;
};

/// Periodic piecewise-linear FE operators: mass rows (h/6)[1 4 1],
/// stiffness rows (1/h)[-1 2 -1]. The stiffness row sum is exactly zero.
std::pair<SparseMatrix, SparseMatrix> assemble_operators(const BurgersConfig& config);

/// Skew-symmetrized convection term N(u), defined by w' N(u) = b(u, u, w)
/// with b the discrete form used for the ROM tensors. u' N(u) = 0.
Vector burgers_nonlinearity(const Vector& u);

/// Integrates the semi-discrete system M du/dt = -N(u) - nu S u with RK4 and
/// returns the stored snapshots bundled with M, S. Snapshots are taken every
/// snapshot_stride-th step (the initial state is not stored).
/// Throws BlowupError with the offending step index if the state leaves
/// the finite range.
SnapshotSet run_fom(const BurgersConfig& config);

} // namespace lrom
