#include "lrom/calibrate.hpp"

#include "lrom/diagnostics.hpp"
#include "lrom/errors.hpp"
#include "lrom/rom.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace lrom {

double mean_kinetic_energy(const Trajectory& traj, double warmup_fraction) {
  if (!(warmup_fraction >= 0.0) || warmup_fraction >= 1.0) {
    throw ValidationError("warmup fraction must lie in [0, 1)");
  }
  const Index k = traj.step_count();
  const Index start = static_cast<Index>(
      std::floor(warmup_fraction * static_cast<double>(k)));
  if (k == 0 || start >= k) {
    throw ValidationError("trajectory has no samples after the warmup "
                          "discard; kinetic energy is undefined");
  }
  double sum = 0.0;
  for (Index row = start; row < k; ++row) {
    sum += 0.5 * traj.coeffs.row(row).squaredNorm();
  }
  return sum / static_cast<double>(k - start);
}

namespace {

std::vector<double> sweep_grid(double delta_min, double delta_max,
                               int points) {
  if (points < 2) {
    throw ValidationError("calibration sweep needs at least two grid points");
  }
  if (!(delta_max > delta_min) || delta_min < 0.0) {
    throw ValidationError("calibration range must satisfy 0 <= delta_min < "
                          "delta_max");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  // log spacing; a zero lower end keeps an exact zero as the first point
  const double lo = delta_min > 0.0 ? delta_min : 1e-4 * delta_max;
  const int first_spaced = delta_min > 0.0 ? 0 : 1;
  if (first_spaced == 1) grid[0] = 0.0;
  const int m = points - 1;
  for (int i = first_spaced; i < points; ++i) {
    const double t = first_spaced == 0
                         ? static_cast<double>(i) / m
                         : static_cast<double>(i - 1) / (m - 1);
    grid[static_cast<std::size_t>(i)] =
        lo * std::pow(delta_max / lo, t);
  }
  grid.back() = delta_max;
  return grid;
}

} // namespace

CalibrationResult calibrate_delta(const RomOperators& ops,
                                  const PodBasis& basis,
                                  const SnapshotSet& set, Index r,
                                  const CalibrationOptions& options) {
  if (ops.r != r) {
    throw ValidationError("operators were assembled at rank " +
                          std::to_string(ops.r) + ", calibration asked for " +
                          std::to_string(r));
  }
  if (options.variant == FilterVariant::none) {
    throw ValidationError("calibration needs an fe or rom filter variant");
  }

  const double t_end = options.rom_t_end > 0.0
                           ? options.rom_t_end
                           : set.times[set.times.size() - 1];
  const double target =
      options.target_ke
          ? *options.target_ke
          : mean_kinetic_energy(project_snapshots(basis, r, set),
                                options.warmup_fraction);

  auto run_ke = [&](double delta) -> double {
    RomRunConfig config;
    config.r = r;
    config.dt = options.rom_dt;
    config.t_end = t_end;
    config.model = RomModel::leray;
    config.filter = {options.variant, delta};
    // delta = 0 degenerates to the Galerkin model; keep variant tags valid
    if (delta == 0.0) {
      config.model = RomModel::galerkin;
      config.filter = {FilterVariant::none, 0.0};
    }
    const RomOperators* run_ops = &ops;
    RomOperators refit;
    if (config.model == RomModel::leray &&
        options.variant == FilterVariant::fe_level) {
      refit = assemble_leray_fe(ops, basis, set, delta);
      run_ops = &refit;
    }
    const Trajectory traj = integrate(*run_ops, config, basis, set);
    if (traj.blown_up) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    return mean_kinetic_energy(traj, options.warmup_fraction);
  };

  const std::vector<double> grid =
      sweep_grid(options.delta_min, options.delta_max, options.grid_points);
  std::vector<double> energies(grid.size());
  const int workers = std::max(1, options.threads);
  for (std::size_t begin = 0; begin < grid.size();
       begin += static_cast<std::size_t>(workers)) {
    const std::size_t end =
        std::min(grid.size(), begin + static_cast<std::size_t>(workers));
    std::vector<std::future<double>> batch;
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, run_ke, grid[i]));
    }
    for (std::size_t i = begin; i < end; ++i) {
      energies[i] = batch[i - begin].get();
    }
  }

  CalibrationResult result;
  result.sweep.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    result.sweep.emplace_back(grid[i], energies[i]);
  }

  auto objective_of = [&](double ke) {
    return std::isnan(ke) ? std::numeric_limits<double>::infinity()
                          : std::abs(ke - target);
  };
  std::size_t best = grid.size();
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double obj = objective_of(energies[i]);
    if (obj < best_obj) {
      best = i;
      best_obj = obj;
    }
  }
  if (best == grid.size()) {
    throw CalibrationError("every sweep run blew up; calibration infeasible "
                           "over the given delta range");
  }

  if (best == 0 || best + 1 == grid.size()) {
    // objective does not bracket an interior minimum; report the boundary
    result.delta_star = grid[best];
    result.objective_value = best_obj;
    result.converged = false;
    return result;
  }

  auto objective = [&](double delta) { return objective_of(run_ke(delta)); };

  double lo = grid[best - 1];
  double hi = grid[best + 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = objective(c);
  double fd = objective(d);
  for (int it = 0; it < options.refine_iters; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = objective(d);
    }
  }
  result.delta_star = 0.5 * (lo + hi);
  result.objective_value = objective(result.delta_star);
  result.converged = true;
  return result;
}

} // namespace lrom
