#pragma once

#include "lrom/types.hpp"

#include <filesystem>
#include <vector>

namespace lrom {

/// One symmetric sparse operator in coordinate storage, upper triangle only
/// (i <= j). This is the in-memory image of a `.coo` file.
struct OperatorFile {
  enum class Kind { mass, stiffness };
  Kind kind = Kind::mass;
  Index n = 0;
  std::vector<Eigen::Triplet<double>> triplets; // i <= j, no duplicates

  SparseMatrix to_symmetric() const; // expands to the full matrix
  static OperatorFile from_symmetric(Kind kind, const SparseMatrix& full);
};

OperatorFile read_operator_file(const std::filesystem::path& path,
                                OperatorFile::Kind kind, Index n);
void write_operator_file(const OperatorFile& op,
                         const std::filesystem::path& path);

// A snapshot bundle lives at `<base>.meta`, `<base>.states.bin`,
// `<base>.times.txt`, `<base>.mass.coo`, `<base>.stiffness.coo`.
SnapshotSet read_snapshot_set(const std::filesystem::path& base);
void write_snapshot_set(const SnapshotSet& set,
                        const std::filesystem::path& base);

/// x' M y. Symmetric in x and y for symmetric M.
double weighted_inner_product(const Vector& x, const Vector& y,
                              const SparseMatrix& weight);

/// sqrt(x' M x).
double weighted_norm(const Vector& x, const SparseMatrix& weight);

} // namespace lrom
