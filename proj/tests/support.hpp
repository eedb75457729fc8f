#pragma once

#include "lrom/burgers.hpp"
#include "lrom/pod.hpp"
#include "lrom/rom.hpp"
#include "lrom/types.hpp"

#include <Eigen/Eigenvalues>

#include <filesystem>
#include <atomic>
#include <numbers>
#include <random>
#include <string>
#include <unistd.h>

namespace lrom::testing {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("lrom-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

inline Vector random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = std::normal_distribution<double>(0.0, 1.0)(rng);
    }
  }
  return m;
}

inline SparseMatrix sparse_identity(Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

/// Small Burgers config for oracle-sized cases.
inline BurgersConfig small_burgers(Index n, double nu, double dt, double t_end,
                                   Index stride,
                                   BurgersConfig::Initial initial =
                                       BurgersConfig::Initial::two_wave) {
  BurgersConfig config;
  config.n = n;
  config.domain_length = 1.0;
  config.nu = nu;
  config.dt = dt;
  config.t_end = t_end;
  config.snapshot_stride = stride;
  config.initial = initial;
  return config;
}

/// Long-domain smooth case: the filter-radius ladder 0.2 .. 0.0125 sits in
/// the asymptotic regime only when the reduced Laplacian eigenvalues are
/// O(10) or less, which needs L = 2 pi.
inline BurgersConfig smooth_long_domain_case() {
  BurgersConfig config;
  config.n = 128;
  config.domain_length = 2.0 * std::numbers::pi;
  config.nu = 0.2;
  config.dt = 2e-3;
  config.t_end = 4.0;
  config.snapshot_stride = 5;
  config.initial = BurgersConfig::Initial::two_wave;
  return config;
}

/// Independent quadrature oracle for the convection form: trapezoid-free
/// nodal quadrature with weight h against an explicit central-difference
/// matrix, 0.5*(h sum u (Dv) w - h sum u (Dw) v). Same value as the
/// production form, different arithmetic route.
inline double convection_form_oracle(const Vector& u, const Vector& v,
                                     const Vector& w, double h) {
  const Index n = u.size();
  auto central = [&](const Vector& f, Index l) {
    return (f[(l + 1) % n] - f[(l + n - 1) % n]) / (2.0 * h);
  };
  double first = 0.0, second = 0.0;
  for (Index l = 0; l < n; ++l) {
    first += h * u[l] * central(v, l) * w[l];
    second += h * u[l] * central(w, l) * v[l];
  }
  return 0.5 * (first - second);
}

/// Generalized eigenpairs of (S, M), M-orthonormal eigenvectors, ascending.
inline std::pair<Vector, Matrix> generalized_eigs(const SparseMatrix& S,
                                                  const SparseMatrix& M) {
  const Matrix dense_s(S);
  const Matrix dense_m(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(dense_s, dense_m);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Full-order right-hand side of the semi-discrete Burgers system,
/// M du/dt = -N(u) - nu S u, via a dense solve (oracle path).
inline Vector fom_rhs_oracle(const Vector& u, const SparseMatrix& M,
                             const SparseMatrix& S, double nu) {
  const Vector load = -burgers_nonlinearity(u) - nu * (S * u);
  return Matrix(M).ldlt().solve(load);
}

} // namespace lrom::testing
