#pragma once

#include "lrom/pod.hpp"
#include "lrom/types.hpp"

#include <filesystem>
#include <vector>

namespace lrom {

/// Reduced operators of the Galerkin ROM  da/dt = A a + a' B a, with the
/// quadratic tensor stored as r slices: B[j](i,k) holds B_jik, so the
/// nonlinearity is sum_j adv_j (B[j] a) with adv the advecting coefficient
/// vector. Convention: B_jik = -b(phi_j, phi_k, phi_i) where b(u,v,w) is the
/// skew-symmetrized discrete form of the periodic convection integral
/// (u v_x, w); each slice is antisymmetric in (i,k) exactly, which makes
/// a' (a' B a) vanish to machine precision.
struct RomOperators {
  Index r = 0;
  Matrix A;   // -nu * S_r, symmetric negative semidefinite
  Matrix M_r; // identity to roundoff for an M-orthonormal basis
  Matrix S_r;
  std::vector<Matrix> B;       // r slices, r x r each
  std::vector<Matrix> B_leray; // empty unless assemble_leray_fe ran
  double leray_delta = 0.0;

  bool has_leray() const { return !B_leray.empty(); }
};

/// Skew-symmetrized convection form on the uniform periodic grid:
/// b(u,v,w) = 1/2 [ sum_l h u_l (Dv)_l w_l - sum_l h u_l (Dw)_l v_l ]
/// with D the central difference. The quadrature weight h cancels against
/// D's 1/(2h), so the value depends on the samples alone.
double convection_form(const Vector& u, const Vector& v, const Vector& w);

/// Tensor slices B[j](i,k) = -b(advecting_j, basis_k, basis_i); pass the
/// same matrix twice for the Galerkin tensor, a filtered advecting basis
/// for the Leray tensor.
std::vector<Matrix> convection_tensor(const Matrix& advecting,
                                      const Matrix& basis);

/// A = -nu Phi' S Phi, M_r = Phi' M Phi, S_r = Phi' S Phi, B as above.
RomOperators assemble_galerkin(const PodBasis& basis, Index r,
                               const SnapshotSet& set);

/// Fills B_leray with the advecting slot filtered at the FE level
/// (psi_j = filter_fe(phi_j)). A, M_r, S_r stay untouched: only the
/// advective term is filtered.
RomOperators assemble_leray_fe(RomOperators ops, const PodBasis& basis,
                               const SnapshotSet& set, double delta);

// Persistence: `<base>.rom.bin`, header (uint64 r, uint64 has_leray,
// float64 leray_delta) then A, M_r, S_r, B, optional B_leray as float64.
void save_rom(const RomOperators& ops, const std::filesystem::path& base);
RomOperators load_rom(const std::filesystem::path& base);

} // namespace lrom
