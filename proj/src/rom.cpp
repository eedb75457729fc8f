#include "lrom/rom.hpp"

#include "lrom/errors.hpp"
#include "lrom/filter.hpp"

#include <cstdint>
#include <fstream>

namespace lrom {

namespace {

// (Cv)_l = v_{l+1} - v_{l-1}, periodic. The quadrature weight h of the
// convection integral cancels against the central difference's 1/(2h), so
// the tensor entries are built from shift differences alone.
Matrix shift_difference(const Matrix& columns) {
  const Index n = columns.rows();
  Matrix out(n, columns.cols());
  for (Index l = 0; l < n; ++l) {
    out.row(l) = columns.row((l + 1) % n) - columns.row((l + n - 1) % n);
  }
  return out;
}

} // namespace

double convection_form(const Vector& u, const Vector& v, const Vector& w) {
  const Index n = u.size();
  if (v.size() != n || w.size() != n) {
    throw ValidationError("convection_form: dimension mismatch");
  }
  double first = 0.0, second = 0.0;
  for (Index l = 0; l < n; ++l) {
    const Index up = (l + 1) % n;
    const Index dn = (l + n - 1) % n;
    first += u[l] * (v[up] - v[dn]) * w[l];
    second += u[l] * (w[up] - w[dn]) * v[l];
  }
  return 0.25 * (first - second);
}

std::vector<Matrix> convection_tensor(const Matrix& advecting,
                                      const Matrix& basis) {
  if (advecting.rows() != basis.rows()) {
    throw ValidationError("convection_tensor: dimension mismatch");
  }
  const Index r = basis.cols();
  if (advecting.cols() != r) {
    throw ValidationError("convection_tensor: advecting basis must have the "
                          "same number of columns");
  }
  const Matrix diffs = shift_difference(basis);
  std::vector<Matrix> slices;
  slices.reserve(static_cast<std::size_t>(r));
  for (Index j = 0; j < r; ++j) {
    const Matrix k = basis.transpose() *
                     (advecting.col(j).asDiagonal() * diffs);
    // K - K' is antisymmetric exactly in floating point, which keeps
    // a' (a' B a) at machine zero.
    slices.push_back(-0.25 * (k - k.transpose()));
  }
  return slices;
}

RomOperators assemble_galerkin(const PodBasis& basis, Index r,
                               const SnapshotSet& set) {
  if (r < 1 || r > basis.rank()) {
    throw ValidationError("assembly rank " + std::to_string(r) +
                          " outside [1, " + std::to_string(basis.rank()) + "]");
  }
  if (basis.dof_count() != set.dof_count()) {
    throw ValidationError("basis and snapshot set disagree on n");
  }
  const Matrix modes = basis.modes.leftCols(r);

  RomOperators ops;
  ops.r = r;
  ops.M_r = modes.transpose() * (set.mass * modes);
  ops.S_r = modes.transpose() * (set.stiffness * modes);
  ops.A = -set.meta.viscosity * ops.S_r;
  ops.B = convection_tensor(modes, modes);
  return ops;
}

RomOperators assemble_leray_fe(RomOperators ops, const PodBasis& basis,
                               const SnapshotSet& set, double delta) {
  if (ops.r < 1 || ops.r > basis.rank()) {
    throw ValidationError("operators were assembled for an incompatible rank");
  }
  const Matrix filtered =
      filter_basis(basis, ops.r, set.mass, set.stiffness, delta);
  ops.B_leray = convection_tensor(filtered, basis.modes.leftCols(ops.r));
  ops.leray_delta = delta;
  return ops;
}

void save_rom(const RomOperators& ops, const std::filesystem::path& base) {
  std::filesystem::path bin = base;
  bin += ".rom.bin";
  if (base.has_parent_path()) {
    std::filesystem::create_directories(base.parent_path());
  }
  std::ofstream out(bin, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write ROM operators: " + bin.string());

  const std::uint64_t header[2] = {static_cast<std::uint64_t>(ops.r),
                                   ops.has_leray() ? 1ull : 0ull};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(&ops.leray_delta),
            sizeof(ops.leray_delta));
  auto put_matrix = [&](const Matrix& m) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) *
                                           static_cast<std::size_t>(m.size())));
  };
  put_matrix(ops.A);
  put_matrix(ops.M_r);
  put_matrix(ops.S_r);
  for (const auto& slice : ops.B) put_matrix(slice);
  for (const auto& slice : ops.B_leray) put_matrix(slice);
  if (!out) throw IoError("write failed: " + bin.string());
}

RomOperators load_rom(const std::filesystem::path& base) {
  std::filesystem::path bin = base;
  bin += ".rom.bin";
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw IoError("cannot open ROM operators: " + bin.string());

  std::uint64_t header[2] = {0, 0};
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  double leray_delta = 0.0;
  in.read(reinterpret_cast<char*>(&leray_delta), sizeof(leray_delta));
  if (!in) throw FormatError("truncated ROM header: " + bin.string());
  const Index r = static_cast<Index>(header[0]);
  if (r <= 0) {
    throw FormatError("ROM header has nonpositive rank: " + bin.string());
  }

  RomOperators ops;
  ops.r = r;
  ops.leray_delta = leray_delta;
  auto get_matrix = [&](Matrix& m) {
    m.resize(r, r);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) *
                                         static_cast<std::size_t>(m.size())));
  };
  get_matrix(ops.A);
  get_matrix(ops.M_r);
  get_matrix(ops.S_r);
  ops.B.resize(static_cast<std::size_t>(r));
  for (auto& slice : ops.B) get_matrix(slice);
  if (header[1] == 1) {
    ops.B_leray.resize(static_cast<std::size_t>(r));
    for (auto& slice : ops.B_leray) get_matrix(slice);
  }
  if (!in) throw FormatError("truncated ROM payload: " + bin.string());
  return ops;
}

} // namespace lrom
