#include "lrom/snapshot_io.hpp"

#include "lrom/burgers.hpp"
#include "lrom/errors.hpp"
#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <random>

using namespace lrom;
using namespace lrom::testing;

namespace {

SnapshotSet tiny_set(Index n, Index s) {
  SnapshotSet set;
  set.states = Matrix::Constant(n, s, 1.5);
  set.times = Vector::LinSpaced(s, 0.0, static_cast<double>(s - 1));
  set.mass = sparse_identity(n);
  set.stiffness = SparseMatrix(n, n);
  set.meta.grid_size = n;
  set.meta.domain_length = 1.0;
  set.meta.viscosity = 0.25;
  set.meta.boundary = BoundaryKind::periodic;
  return set;
}

void write_raw(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::trunc);
  out << text;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("hand-written bundle reads back verbatim") {
  TempDir dir("io-verbatim");
  const auto base = dir.path() / "tiny";

  write_raw(dir.path() / "tiny.meta",
            "n=4\ns=3\nnu=0.25\ndomain_length=1\nbc=periodic\n");
  std::ofstream bin(dir.path() / "tiny.states.bin", std::ios::binary);
  for (int k = 0; k < 12; ++k) {
    const double value = 1.5;
    bin.write(reinterpret_cast<const char*>(&value), sizeof(value));
  }
  bin.close();
  write_raw(dir.path() / "tiny.times.txt", "0\n1\n2\n");
  write_raw(dir.path() / "tiny.mass.coo", "0 0 1\n1 1 1\n2 2 1\n3 3 1\n");
  write_raw(dir.path() / "tiny.stiffness.coo", "");

  const SnapshotSet set = read_snapshot_set(base);
  CHECK(set.dof_count() == 4);
  CHECK(set.snapshot_count() == 3);
  CHECK(set.meta.viscosity == 0.25);
  CHECK(set.meta.domain_length == 1.0);
  CHECK(set.meta.boundary == BoundaryKind::periodic);
  CHECK((set.states.array() == 1.5).all());
  CHECK(set.times[2] == 2.0);
  CHECK(Matrix(set.mass).isIdentity(0.0));
  CHECK(Matrix(set.stiffness).isZero(0.0));
}

TEST_CASE("stiffness entry with index n is a consistency error") {
  TempDir dir("io-badindex");
  SnapshotSet set = tiny_set(4, 3);
  write_snapshot_set(set, dir.path() / "t");
  write_raw(dir.path() / "t.stiffness.coo", "0 4 1.0\n");
  CHECK_THROWS_AS(read_snapshot_set(dir.path() / "t"), ConsistencyError);
}

TEST_CASE("burgers-generated bundle round-trips bit-exactly") {
  const SnapshotSet set = run_fom(small_burgers(64, 0.02, 1e-3, 1.0, 10));
  TempDir dir("io-roundtrip");
  write_snapshot_set(set, dir.path() / "a");
  const SnapshotSet back = read_snapshot_set(dir.path() / "a");

  CHECK(back.states == set.states); // element-wise, bit-exact
  CHECK(back.times == set.times);
  CHECK(Matrix(back.mass) == Matrix(set.mass));
  CHECK(Matrix(back.stiffness) == Matrix(set.stiffness));
  CHECK(back.meta.viscosity == set.meta.viscosity);

  // write(read(p)) reproduces every file byte for byte
  write_snapshot_set(back, dir.path() / "b");
  for (const char* ext :
       {".meta", ".states.bin", ".times.txt", ".mass.coo", ".stiffness.coo"}) {
    CHECK(slurp(dir.path() / ("a" + std::string(ext))) ==
          slurp(dir.path() / ("b" + std::string(ext))));
  }
}

TEST_CASE("one-DOF two-snapshot set is valid") {
  SnapshotSet set = tiny_set(1, 2);
  TempDir dir("io-minimal");
  write_snapshot_set(set, dir.path() / "m");
  const SnapshotSet back = read_snapshot_set(dir.path() / "m");
  CHECK(back.dof_count() == 1);
  CHECK(back.snapshot_count() == 2);
}

TEST_CASE("round-trip equality on random small sets") {
  std::mt19937_64 rng(2024);
  TempDir dir("io-random");
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 9);
    const Index s = 2 + static_cast<Index>(rng() % 5);
    SnapshotSet set;
    set.states = random_matrix(rng, n, s);
    set.times.resize(s);
    double t = 0.0;
    for (Index k = 0; k < s; ++k) {
      t += 0.01 + std::abs(random_vector(rng, 1)[0]);
      set.times[k] = t;
    }
    // the symmetric-storage format reconstructs the lower triangle from the
    // upper one, so the input must be exactly symmetric
    auto symmetrized = [](const Matrix& m) {
      return Matrix(0.5 * (m + m.transpose()));
    };
    const Matrix g = random_matrix(rng, n, n);
    set.mass = symmetrized(g * g.transpose() + 0.1 * Matrix::Identity(n, n))
                   .sparseView();
    const Matrix g2 = random_matrix(rng, n, n);
    set.stiffness = symmetrized(g2 * g2.transpose()).sparseView();
    set.meta.grid_size = n;
    set.meta.viscosity = std::abs(random_vector(rng, 1)[0]);

    const auto base = dir.path() / ("set" + std::to_string(trial));
    write_snapshot_set(set, base);
    const SnapshotSet back = read_snapshot_set(base);
    CHECK(back.states == set.states);
    CHECK(back.times == set.times);
    CHECK(Matrix(back.mass) == Matrix(set.mass));
    CHECK(Matrix(back.stiffness) == Matrix(set.stiffness));
  }
}

TEST_CASE("weighted inner product") {
  const Index n = 6;
  const SparseMatrix id = sparse_identity(n);
  Vector e1 = Vector::Zero(n), e2 = Vector::Zero(n);
  e1[0] = 1.0;
  e2[1] = 1.0;

  CHECK(weighted_inner_product(e1, e1, id) == 1.0);
  CHECK(weighted_inner_product(e1, e2, id) == 0.0);

  // dense three-loop oracle on a tridiagonal weight
  std::mt19937_64 rng(7);
  std::vector<Eigen::Triplet<double>> trip;
  for (Index i = 0; i < n; ++i) {
    trip.emplace_back(i, i, 2.0 + 0.1 * static_cast<double>(i));
    if (i + 1 < n) {
      trip.emplace_back(i, i + 1, -0.5);
      trip.emplace_back(i + 1, i, -0.5);
    }
  }
  SparseMatrix tri(n, n);
  tri.setFromTriplets(trip.begin(), trip.end());
  const Matrix dense(tri);

  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = random_vector(rng, n);
    const Vector y = random_vector(rng, n);
    double oracle = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        oracle += x[i] * dense(i, j) * y[j];
      }
    }
    const double got = weighted_inner_product(x, y, tri);
    CHECK(std::abs(got - oracle) <= 1e-13 * std::abs(oracle));

    // symmetry
    const double flipped = weighted_inner_product(y, x, tri);
    CHECK(std::abs(got - flipped) <= 1e-14 * x.norm() * y.norm());
  }

  CHECK_THROWS_AS(weighted_inner_product(e1, Vector::Zero(n + 1), id),
                  ValidationError);
}

TEST_CASE("mass-weighted square norm is positive on random vectors") {
  const SnapshotSet set = run_fom(small_burgers(32, 0.02, 1e-3, 0.2, 10));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const Vector x = random_vector(rng, set.dof_count());
    CHECK(weighted_inner_product(x, x, set.mass) > 0.0);
  }
}

TEST_CASE("reader rejects malformed inputs") {
  TempDir dir("io-errors");
  const SnapshotSet set = tiny_set(4, 3);
  write_snapshot_set(set, dir.path() / "ok");

  SUBCASE("missing bundle") {
    CHECK_THROWS_AS(read_snapshot_set(dir.path() / "absent"), IoError);
  }
  SUBCASE("malformed meta header") {
    write_raw(dir.path() / "ok.meta", "n 4\n");
    CHECK_THROWS_AS(read_snapshot_set(dir.path() / "ok"), FormatError);
  }
  SUBCASE("missing meta key") {
    write_raw(dir.path() / "ok.meta", "n=4\ns=3\nnu=0.25\n");
    CHECK_THROWS_AS(read_snapshot_set(dir.path() / "ok"), FormatError);
  }
  SUBCASE("payload size mismatch") {
    write_raw(dir.path() / "ok.meta",
              "n=4\ns=5\nnu=0.25\ndomain_length=1\nbc=periodic\n");
    CHECK_THROWS_AS(read_snapshot_set(dir.path() / "ok"), ConsistencyError);
  }
  SUBCASE("non-monotone times") {
    write_raw(dir.path() / "ok.times.txt", "0\n2\n1\n");
    CHECK_THROWS_AS(read_snapshot_set(dir.path() / "ok"), ValidationError);
  }
  SUBCASE("duplicate operator entry") {
    write_raw(dir.path() / "ok.mass.coo",
              "0 0 1\n0 0 1\n1 1 1\n2 2 1\n3 3 1\n");
    CHECK_THROWS_AS(read_snapshot_set(dir.path() / "ok"), FormatError);
  }
  SUBCASE("lower-triangle entry violates symmetric storage") {
    write_raw(dir.path() / "ok.mass.coo", "1 0 0.5\n0 0 1\n1 1 1\n2 2 1\n3 3 1\n");
    CHECK_THROWS_AS(read_snapshot_set(dir.path() / "ok"), FormatError);
  }
  SUBCASE("indefinite mass fails the SPD spot check") {
    write_raw(dir.path() / "ok.mass.coo", "0 0 -1\n1 1 1\n2 2 1\n3 3 1\n");
    CHECK_THROWS_AS(read_snapshot_set(dir.path() / "ok"), ValidationError);
  }
}
