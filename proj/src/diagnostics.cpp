#include "lrom/diagnostics.hpp"

#include "lrom/errors.hpp"
#include "lrom/numfmt.hpp"

#include <fstream>

namespace lrom {

NormSeries l2_norm_series(const Trajectory& traj) {
  const Index k = traj.step_count();
  if (k == 0) {
    throw ValidationError("cannot take norms of an empty trajectory");
  }
  NormSeries series;
  series.times = traj.times;
  series.norms = traj.coeffs.rowwise().norm();
  series.mean = series.norms.mean();
  return series;
}

Matrix phase_portrait(const Trajectory& traj, Index i, Index j) {
  if (i < 1 || j < 1 || i > traj.rank() || j > traj.rank()) {
    throw ValidationError("phase portrait indices must lie in [1, r]");
  }
  Matrix pairs(traj.step_count(), 2);
  pairs.col(0) = traj.coeffs.col(i - 1);
  pairs.col(1) = traj.coeffs.col(j - 1);
  return pairs;
}

Trajectory project_snapshots(const PodBasis& basis, Index r,
                             const SnapshotSet& set) {
  if (r < 1 || r > basis.rank()) {
    throw ValidationError("projection rank " + std::to_string(r) +
                          " outside [1, " + std::to_string(basis.rank()) + "]");
  }
  Trajectory traj;
  traj.times = set.times;
  traj.coeffs =
      (basis.modes.leftCols(r).transpose() * (set.mass * set.states))
          .transpose();
  traj.model_tag = "projection";
  return traj;
}

void write_norm_series_csv(const NormSeries& series,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write norm series CSV: " + path.string());
  out << "t,norm\n";
  for (Index k = 0; k < series.times.size(); ++k) {
    out << numfmt::format_double(series.times[k]) << ','
        << numfmt::format_double(series.norms[k]) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_phase_csv(const Matrix& pairs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write phase CSV: " + path.string());
  out << "ai,aj\n";
  for (Index k = 0; k < pairs.rows(); ++k) {
    out << numfmt::format_double(pairs(k, 0)) << ','
        << numfmt::format_double(pairs(k, 1)) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_spectrum_csv(const PodBasis& basis,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write spectrum CSV: " + path.string());
  out << "j,lambda\n";
  for (Index j = 0; j < basis.rank(); ++j) {
    out << (j + 1) << ',' << numfmt::format_double(basis.eigenvalues[j])
        << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

} // namespace lrom
