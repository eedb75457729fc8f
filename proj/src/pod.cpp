#include "lrom/pod.hpp"

#include "lrom/errors.hpp"
#include "lrom/numfmt.hpp"
#include "lrom/snapshot_io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>

namespace lrom {

PodBasis compute_pod(const SnapshotSet& set, Index d_max, double drop_tol) {
  const Index n = set.dof_count();
  const Index s = set.snapshot_count();
  if (d_max < 1 || d_max > std::min(n, s)) {
    throw ValidationError("d_max must lie in [1, min(n, s)]");
  }

  const Matrix weighted = set.mass * set.states; // M X, reused below
  Matrix corr = (set.states.transpose() * weighted) / static_cast<double>(s);
  corr = 0.5 * (corr + corr.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(corr);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("correlation eigenproblem failed to converge");
  }
  // ascending from Eigen; walk from the back
  const Vector& lambda_all = eig.eigenvalues();
  const double lambda_max = lambda_all[s - 1];
  if (!(lambda_max > 0.0)) {
    throw ValidationError("degenerate snapshot data: no positive correlation "
                          "eigenvalues");
  }

  Index d = 0;
  while (d < d_max && lambda_all[s - 1 - d] >= drop_tol * lambda_max) {
    ++d;
  }

  PodBasis basis;
  basis.eigenvalues.resize(d);
  basis.modes.resize(n, d);
  for (Index j = 0; j < d; ++j) {
    const Index src = s - 1 - j;
    basis.eigenvalues[j] = lambda_all[src];
    basis.modes.col(j) = set.states * eig.eigenvectors().col(src) /
                         std::sqrt(static_cast<double>(s) * lambda_all[src]);
  }

  // Two passes of modified Gram-Schmidt in the M-inner product. The mapped
  // modes are only orthogonal up to the eigensolver's backward error, which
  // grows like lambda_1/lambda_j toward the spectrum tail; this restores
  // pairwise orthonormality without changing any leading span.
  for (int pass = 0; pass < 2; ++pass) {
    for (Index j = 0; j < d; ++j) {
      for (Index i = 0; i < j; ++i) {
        const double proj =
            basis.modes.col(i).dot(set.mass * basis.modes.col(j));
        basis.modes.col(j) -= proj * basis.modes.col(i);
      }
      const double norm = weighted_norm(basis.modes.col(j), set.mass);
      if (!(norm > 0.0)) {
        throw NumericalError("POD mode collapsed during orthonormalization");
      }
      basis.modes.col(j) /= norm;
    }
  }

  // deterministic sign: largest-magnitude entry positive
  for (Index j = 0; j < d; ++j) {
    Index argmax = 0;
    basis.modes.col(j).cwiseAbs().maxCoeff(&argmax);
    if (basis.modes(argmax, j) < 0.0) {
      basis.modes.col(j) = -basis.modes.col(j);
    }
  }

  basis.source_dims = {n, s};
  return basis;
}

Vector project(const PodBasis& basis, Index r, const Vector& u,
               const SparseMatrix& mass) {
  if (r < 0 || r > basis.rank()) {
    throw ValidationError("projection rank " + std::to_string(r) +
                          " exceeds basis rank " + std::to_string(basis.rank()));
  }
  if (u.size() != basis.dof_count() || mass.rows() != u.size()) {
    throw ValidationError("project: dimension mismatch");
  }
  return basis.modes.leftCols(r).transpose() * (mass * u);
}

Vector reconstruct(const PodBasis& basis, const Vector& coefficients) {
  if (coefficients.size() > basis.rank()) {
    throw ValidationError("reconstruct: coefficient vector longer than the "
                          "basis rank");
  }
  return basis.modes.leftCols(coefficients.size()) * coefficients;
}

void save_pod(const PodBasis& basis, const std::filesystem::path& base,
              std::optional<double> delta_tag) {
  std::filesystem::path bin = base;
  bin += ".pod.bin";
  std::filesystem::path meta = base;
  meta += ".pod.meta";
  if (base.has_parent_path()) {
    std::filesystem::create_directories(base.parent_path());
  }

  std::ofstream out(bin, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write POD basis: " + bin.string());
  const std::uint64_t header[2] = {
      static_cast<std::uint64_t>(basis.dof_count()),
      static_cast<std::uint64_t>(basis.rank())};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(basis.modes.data()),
            static_cast<std::streamsize>(sizeof(double) *
                                         static_cast<std::size_t>(
                                             basis.modes.size())));
  out.write(reinterpret_cast<const char*>(basis.eigenvalues.data()),
            static_cast<std::streamsize>(sizeof(double) *
                                         static_cast<std::size_t>(
                                             basis.eigenvalues.size())));
  if (!out) throw IoError("write failed: " + bin.string());

  std::ofstream meta_out(meta, std::ios::trunc);
  if (!meta_out) throw IoError("cannot write POD meta: " + meta.string());
  meta_out << "n=" << basis.dof_count() << '\n'
           << "d=" << basis.rank() << '\n'
           << "source_n=" << basis.source_dims.first << '\n'
           << "source_s=" << basis.source_dims.second << '\n';
  if (delta_tag) {
    meta_out << "delta=" << numfmt::format_double(*delta_tag) << '\n';
  }
  if (!meta_out) throw IoError("write failed: " + meta.string());
}

PodBasis load_pod(const std::filesystem::path& base,
                  std::optional<double>* delta_tag) {
  std::filesystem::path bin = base;
  bin += ".pod.bin";
  std::filesystem::path meta = base;
  meta += ".pod.meta";

  std::ifstream in(bin, std::ios::binary);
  if (!in) throw IoError("cannot open POD basis: " + bin.string());
  std::uint64_t header[2] = {0, 0};
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) throw FormatError("truncated POD header: " + bin.string());
  const Index n = static_cast<Index>(header[0]);
  const Index d = static_cast<Index>(header[1]);
  if (n <= 0 || d <= 0) {
    throw FormatError("POD header has nonpositive dimensions: " +
                      bin.string());
  }
  PodBasis basis;
  basis.modes.resize(n, d);
  basis.eigenvalues.resize(d);
  in.read(reinterpret_cast<char*>(basis.modes.data()),
          static_cast<std::streamsize>(sizeof(double) *
                                       static_cast<std::size_t>(n * d)));
  in.read(reinterpret_cast<char*>(basis.eigenvalues.data()),
          static_cast<std::streamsize>(sizeof(double) *
                                       static_cast<std::size_t>(d)));
  if (!in) throw FormatError("truncated POD payload: " + bin.string());

  basis.source_dims = {n, 0};
  std::ifstream meta_in(meta);
  if (meta_in) {
    std::string line;
    std::map<std::string, std::string> kv;
    while (std::getline(meta_in, line)) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        kv[line.substr(0, eq)] = line.substr(eq + 1);
      }
    }
    if (kv.count("source_n") && kv.count("source_s")) {
      basis.source_dims = {
          static_cast<Index>(numfmt::parse_integer(kv["source_n"])),
          static_cast<Index>(numfmt::parse_integer(kv["source_s"]))};
    }
    if (delta_tag) {
      *delta_tag = kv.count("delta")
                       ? std::optional<double>(numfmt::parse_double(kv["delta"]))
                       : std::nullopt;
    }
  } else if (delta_tag) {
    *delta_tag = std::nullopt;
  }
  return basis;
}

} // namespace lrom
