#include "lrom/filter.hpp"

#include "lrom/errors.hpp"

namespace lrom {

std::string to_string(FilterVariant variant) {
  switch (variant) {
    case FilterVariant::none: return "none";
    case FilterVariant::fe_level: return "fe";
    case FilterVariant::rom_level: return "rom";
  }
  throw ValidationError("unreachable filter variant");
}

FilterVariant filter_variant_from_string(const std::string& text) {
  if (text == "none") return FilterVariant::none;
  if (text == "fe" || text == "fe_level") return FilterVariant::fe_level;
  if (text == "rom" || text == "rom_level") return FilterVariant::rom_level;
  throw FormatError("unknown filter variant: '" + text + "'");
}

void FilterSpec::validate() const {
  if (!(delta >= 0.0)) {
    throw ValidationError("filter radius must be nonnegative");
  }
}

FeFilter::FeFilter(const SparseMatrix& mass, const SparseMatrix& stiffness,
                   double delta)
    : delta_(delta), mass_(mass) {
  if (!(delta >= 0.0)) {
    throw ValidationError("filter radius must be nonnegative");
  }
  if (mass.rows() != mass.cols() || stiffness.rows() != stiffness.cols() ||
      mass.rows() != stiffness.rows()) {
    throw ValidationError("filter operators must be square and of equal size");
  }
  if (delta_ == 0.0) {
    return; // identity, no factorization
  }
  SparseMatrix helmholtz = mass + (delta * delta) * stiffness;
  solver_ = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(helmholtz);
  if (solver_->info() != Eigen::Success) {
    throw NumericalError("Helmholtz factorization failed (operator not SPD?)");
  }
}

Vector FeFilter::apply(const Vector& u) const {
  if (u.size() != mass_.rows()) {
    throw ValidationError("filter input has wrong dimension");
  }
  if (delta_ == 0.0) {
    return u;
  }
  return solver_->solve(mass_ * u);
}

Matrix FeFilter::apply(const Matrix& columns) const {
  if (columns.rows() != mass_.rows()) {
    throw ValidationError("filter input has wrong dimension");
  }
  if (delta_ == 0.0) {
    return columns;
  }
  return solver_->solve(mass_ * columns);
}

Vector filter_fe(const Vector& u, const SparseMatrix& mass,
                 const SparseMatrix& stiffness, double delta) {
  return FeFilter(mass, stiffness, delta).apply(u);
}

Matrix filter_basis(const PodBasis& basis, Index r, const SparseMatrix& mass,
                    const SparseMatrix& stiffness, double delta) {
  if (r < 0 || r > basis.rank()) {
    throw ValidationError("filter_basis: rank " + std::to_string(r) +
                          " exceeds basis rank " +
                          std::to_string(basis.rank()));
  }
  return FeFilter(mass, stiffness, delta).apply(basis.modes.leftCols(r).eval());
}

RomFilterOperator::RomFilterOperator(const Matrix& mass_r,
                                     const Matrix& stiffness_r, double delta)
    : delta_(delta), rank_(mass_r.rows()) {
  if (!(delta >= 0.0)) {
    throw ValidationError("filter radius must be nonnegative");
  }
  if (mass_r.rows() != mass_r.cols() ||
      stiffness_r.rows() != stiffness_r.cols() ||
      mass_r.rows() != stiffness_r.rows()) {
    throw ValidationError("reduced filter operators must be square and of "
                          "equal size");
  }
  if (delta_ == 0.0) {
    return; // identity, nothing to factorize
  }
  const Matrix helmholtz = mass_r + (delta * delta) * stiffness_r;
  Eigen::LLT<Matrix> llt(helmholtz);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("reduced Helmholtz factorization failed (input not "
                         "SPD?)");
  }
  gain_ = llt.solve(mass_r);
}

Vector RomFilterOperator::apply(const Vector& a) const {
  if (a.size() != rank_) {
    throw ValidationError("coefficient vector length " +
                          std::to_string(a.size()) + " does not match rank " +
                          std::to_string(rank_));
  }
  if (delta_ == 0.0) {
    return a;
  }
  return gain_ * a;
}

void RomFilterOperator::apply_into(const Vector& a, Vector& out) const {
  if (a.size() != rank_) {
    throw ValidationError("coefficient vector length " +
                          std::to_string(a.size()) + " does not match rank " +
                          std::to_string(rank_));
  }
  if (delta_ == 0.0) {
    out = a;
    return;
  }
  out.noalias() = gain_ * a;
}

Matrix RomFilterOperator::gain_matrix() const {
  if (delta_ == 0.0) {
    return Matrix::Identity(rank_, rank_);
  }
  return gain_;
}

RomFilterOperator build_rom_filter(const Matrix& mass_r,
                                   const Matrix& stiffness_r, double delta) {
  return RomFilterOperator(mass_r, stiffness_r, delta);
}

Vector apply_rom_filter(const RomFilterOperator& op, const Vector& a) {
  return op.apply(a);
}

} // namespace lrom
