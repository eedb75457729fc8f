#pragma once

#include "lrom/pod.hpp"
#include "lrom/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

#include <memory>

namespace lrom {

enum class FilterVariant { none, fe_level, rom_level };

std::string to_string(FilterVariant variant);
FilterVariant filter_variant_from_string(const std::string& text);

struct FilterSpec {
  FilterVariant variant = FilterVariant::none;
  double delta = 0.0; // filter radius, delta = 0 means identity

  void validate() const; // delta >= 0
};

/// Full-space differential filter: holds one sparse SPD factorization of
/// (M + delta^2 S) and solves (M + delta^2 S) y = M u repeatedly. Filtering
/// at this level happens offline, so the factorization cost is paid once
/// per (operator, delta) pair.
class FeFilter {
public:
  FeFilter(const SparseMatrix& mass, const SparseMatrix& stiffness,
           double delta);

  Vector apply(const Vector& u) const;
  Matrix apply(const Matrix& columns) const;
  double delta() const { return delta_; }

private:
  double delta_;
  SparseMatrix mass_;
  std::shared_ptr<Eigen::SimplicialLLT<SparseMatrix>> solver_; // null at delta = 0
};

/// Solution y of (M + delta^2 S) y = M u; exact identity at delta = 0.
Vector filter_fe(const Vector& u, const SparseMatrix& mass,
                 const SparseMatrix& stiffness, double delta);

/// Applies the FE-level filter to the first r POD modes, one factorization
/// for all columns. The result is generally not in the span of the input
/// modes.
Matrix filter_basis(const PodBasis& basis, Index r, const SparseMatrix& mass,
                    const SparseMatrix& stiffness, double delta);

/// ROM-level differential filter: the r x r Helmholtz problem
/// (M_r + delta^2 S_r) F(a) = M_r a. The operator is factorized once at
/// construction and resolved into its dense gain D = (M_r + delta^2 S_r)^-1
/// M_r, so each application is a single r x r multiply, O(r^2).
class RomFilterOperator {
public:
  RomFilterOperator(const Matrix& mass_r, const Matrix& stiffness_r,
                    double delta);

  Vector apply(const Vector& a) const;
  /// Allocation-free variant for hot loops (RK stages, benchmarks).
  void apply_into(const Vector& a, Vector& out) const;
  double delta() const { return delta_; }
  Index rank() const { return rank_; }

  Matrix gain_matrix() const;

private:
  double delta_;
  Index rank_;
  Matrix gain_; // identity-by-convention when delta == 0 (not stored)
};

RomFilterOperator build_rom_filter(const Matrix& mass_r,
                                   const Matrix& stiffness_r, double delta);
Vector apply_rom_filter(const RomFilterOperator& op, const Vector& a);

} // namespace lrom
