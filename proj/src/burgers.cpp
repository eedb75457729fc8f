#include "lrom/burgers.hpp"

#include "lrom/errors.hpp"
#include "lrom/numfmt.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace lrom {

Index BurgersConfig::step_count() const {
  return static_cast<Index>(std::llround(t_end / dt));
}

Vector BurgersConfig::initial_state() const {
  if (initial == Initial::custom) {
    return custom_samples;
  }
  Vector u0(n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (Index i = 0; i < n; ++i) {
    const double x = domain_length * static_cast<double>(i) /
                     static_cast<double>(n);
    const double phase = two_pi * x / domain_length;
    u0[i] = std::sin(phase);
    if (initial == Initial::two_wave) {
      u0[i] += 0.5 * std::sin(2.0 * phase);
    }
  }
  return u0;
}

void BurgersConfig::validate() const {
  if (n < 8) {
    throw ValidationError("grid needs n >= 8, got n = " + std::to_string(n));
  }
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw ValidationError("dt and t_end must be positive");
  }
  if (snapshot_stride < 1) {
    throw ValidationError("snapshot_stride must be >= 1");
  }
  if (!(nu >= 0.0)) {
    throw ValidationError("viscosity must be nonnegative");
  }
  if (initial == Initial::custom && custom_samples.size() != n) {
    throw ValidationError("custom initial condition has " +
                          std::to_string(custom_samples.size()) +
                          " samples, grid has " + std::to_string(n));
  }
  if (step_count() / snapshot_stride < 2) {
    throw ValidationError("fewer than two snapshots: increase t_end or "
                          "decrease snapshot_stride");
  }

  const double h = domain_length / static_cast<double>(n);
  const double u_max = initial_state().cwiseAbs().maxCoeff();
  const double cfl = 0.9;
  const double advective =
      u_max > 0.0 ? h / u_max : std::numeric_limits<double>::infinity();
  const double diffusive =
      nu > 0.0 ? h * h / (2.0 * nu) : std::numeric_limits<double>::infinity();
  if (dt > cfl * advective) {
    throw ValidationError("CFL guard violated: dt = " +
                          numfmt::format_double(dt) +
                          " exceeds the advective bound 0.9*h/u_max = " +
                          numfmt::format_double(cfl * advective));
  }
  if (dt > cfl * diffusive) {
    throw ValidationError("CFL guard violated: dt = " +
                          numfmt::format_double(dt) +
                          " exceeds the diffusive bound 0.9*h^2/(2 nu) = " +
                          numfmt::format_double(cfl * diffusive));
  }
}

std::pair<SparseMatrix, SparseMatrix> assemble_operators(
    const BurgersConfig& config) {
  const Index n = config.n;
  const double h = config.domain_length / static_cast<double>(n);
  const double mass_off = h / 6.0;
  const double stiff_off = 1.0 / h; // diagonal 2/h as 2*stiff_off keeps S*1 = 0 exact

  std::vector<Eigen::Triplet<double>> m_trip, s_trip;
  m_trip.reserve(3 * n);
  s_trip.reserve(3 * n);
  for (Index i = 0; i < n; ++i) {
    const Index up = (i + 1) % n;
    const Index dn = (i + n - 1) % n;
    m_trip.emplace_back(i, i, 4.0 * mass_off);
    m_trip.emplace_back(i, up, mass_off);
    m_trip.emplace_back(i, dn, mass_off);
    s_trip.emplace_back(i, i, 2.0 * stiff_off);
    s_trip.emplace_back(i, up, -stiff_off);
    s_trip.emplace_back(i, dn, -stiff_off);
  }
  SparseMatrix mass(n, n), stiffness(n, n);
  mass.setFromTriplets(m_trip.begin(), m_trip.end());
  stiffness.setFromTriplets(s_trip.begin(), s_trip.end());
  mass.makeCompressed();
  stiffness.makeCompressed();
  return {std::move(mass), std::move(stiffness)};
}

Vector burgers_nonlinearity(const Vector& u) {
  const Index n = u.size();
  Vector out(n);
  for (Index i = 0; i < n; ++i) {
    const double up = u[(i + 1) % n];
    const double dn = u[(i + n - 1) % n];
    out[i] = 0.25 * (u[i] * (up - dn) + (up * up - dn * dn));
  }
  return out;
}

SnapshotSet run_fom(const BurgersConfig& config) {
  config.validate();
  auto [mass, stiffness] = assemble_operators(config);

  Eigen::SimplicialLLT<SparseMatrix> mass_solver(mass);
  if (mass_solver.info() != Eigen::Success) {
    throw NumericalError("mass matrix factorization failed");
  }
  const double nu = config.nu;
  const SparseMatrix& S = stiffness;
  auto rhs = [&](const Vector& u) -> Vector {
    return mass_solver.solve(-burgers_nonlinearity(u) - nu * (S * u));
  };

  const Index steps = config.step_count();
  const Index s = steps / config.snapshot_stride;
  SnapshotSet set;
  set.states.resize(config.n, s);
  set.times.resize(s);

  Vector u = config.initial_state();
  const double dt = config.dt;
  Index stored = 0;
  for (Index k = 1; k <= steps; ++k) {
    const Vector k1 = rhs(u);
    const Vector k2 = rhs(u + (0.5 * dt) * k1);
    const Vector k3 = rhs(u + (0.5 * dt) * k2);
    const Vector k4 = rhs(u + dt * k3);
    u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!u.allFinite()) {
      throw BlowupError("full-order state left the finite range at step " +
                            std::to_string(k),
                        static_cast<std::size_t>(k));
    }
    if (k % config.snapshot_stride == 0 && stored < s) {
      set.states.col(stored) = u;
      set.times[stored] = static_cast<double>(k) * dt;
      ++stored;
    }
  }

  set.mass = std::move(mass);
  set.stiffness = std::move(stiffness);
  set.meta.grid_size = config.n;
  set.meta.domain_length = config.domain_length;
  set.meta.viscosity = config.nu;
  set.meta.boundary = BoundaryKind::periodic;
  set.validate();
  return set;
}

} // namespace lrom
