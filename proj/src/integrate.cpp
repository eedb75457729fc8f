#include "lrom/integrate.hpp"

#include "lrom/errors.hpp"
#include "lrom/numfmt.hpp"
#include "lrom/pod.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace lrom {

namespace {

constexpr double kBlowupThreshold = 1e8;

Vector contract(const std::vector<Matrix>& slices, const Vector& advecting,
                const Vector& a) {
  Vector out = Vector::Zero(a.size());
  for (Index j = 0; j < advecting.size(); ++j) {
    out.noalias() += advecting[j] * (slices[static_cast<std::size_t>(j)] * a);
  }
  return out;
}

bool finite_and_bounded(const Vector& a) {
  return a.allFinite() && a.cwiseAbs().maxCoeff() <= kBlowupThreshold;
}

} // namespace

std::string to_string(RomModel model) {
  return model == RomModel::galerkin ? "galerkin" : "leray";
}

RomModel rom_model_from_string(const std::string& text) {
  if (text == "galerkin") return RomModel::galerkin;
  if (text == "leray") return RomModel::leray;
  throw FormatError("unknown ROM model: '" + text + "'");
}

void RomRunConfig::validate() const {
  if (r < 1) throw ValidationError("ROM rank must be >= 1");
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw ValidationError("dt and t_end must be positive");
  }
  filter.validate();
  if (model == RomModel::galerkin && filter.variant != FilterVariant::none) {
    throw ValidationError("galerkin model requires filter variant 'none'");
  }
  if (model == RomModel::leray && filter.variant == FilterVariant::none) {
    throw ValidationError("leray model requires an fe or rom filter variant");
  }
  if (initial == Initial::explicit_coefficients &&
      initial_coefficients.size() != r) {
    throw ValidationError("explicit initial coefficients have length " +
                          std::to_string(initial_coefficients.size()) +
                          ", expected r = " + std::to_string(r));
  }
}

Vector rhs_galerkin(const RomOperators& ops, const Vector& a) {
  if (a.size() != ops.r) {
    throw ValidationError("coefficient vector length does not match ROM rank");
  }
  return ops.A * a + contract(ops.B, a, a);
}

Vector rhs_leray(const RomOperators& ops, const RomFilterOperator* filter_op,
                 const Vector& a, FilterVariant variant) {
  if (a.size() != ops.r) {
    throw ValidationError("coefficient vector length does not match ROM rank");
  }
  switch (variant) {
    case FilterVariant::fe_level:
      if (!ops.has_leray()) {
        throw ConfigError("fe-level Leray RHS requested but the filtered "
                          "tensor was never assembled");
      }
      return ops.A * a + contract(ops.B_leray, a, a);
    case FilterVariant::rom_level:
      if (filter_op == nullptr) {
        throw ConfigError("rom-level Leray RHS requested without a ROM filter "
                          "operator");
      }
      return ops.A * a + contract(ops.B, filter_op->apply(a), a);
    case FilterVariant::none:
      break;
  }
  throw ConfigError("leray RHS requires an fe or rom filter variant");
}

Trajectory integrate(const RomOperators& ops, const RomRunConfig& config,
                     const PodBasis& basis, const SnapshotSet& set) {
  config.validate();
  if (config.r != ops.r) {
    throw ValidationError("run rank " + std::to_string(config.r) +
                          " does not match the assembled operator rank " +
                          std::to_string(ops.r));
  }
  if (config.model == RomModel::leray &&
      config.filter.variant == FilterVariant::fe_level) {
    if (!ops.has_leray()) {
      throw ConfigError("fe-level run requested but operators carry no "
                        "filtered tensor");
    }
    if (ops.leray_delta != config.filter.delta) {
      throw ConfigError("filtered tensor was assembled for delta = " +
                        numfmt::format_double(ops.leray_delta) +
                        ", run asks for delta = " +
                        numfmt::format_double(config.filter.delta));
    }
  }

  double t0 = 0.0;
  Vector a;
  if (config.initial == RomRunConfig::Initial::project_first_snapshot) {
    t0 = set.times[0];
    a = project(basis, config.r, set.states.col(0), set.mass);
  } else {
    a = config.initial_coefficients;
  }
  if (!(config.t_end > t0)) {
    throw ValidationError("t_end must exceed the trajectory start time");
  }

  // rom-level filtering is part of the RHS, so it runs in every RK stage
  std::optional<RomFilterOperator> rom_filter;
  if (config.model == RomModel::leray &&
      config.filter.variant == FilterVariant::rom_level) {
    rom_filter.emplace(ops.M_r, ops.S_r, config.filter.delta);
  }
  auto rhs = [&](const Vector& state) -> Vector {
    if (config.model == RomModel::galerkin) {
      return rhs_galerkin(ops, state);
    }
    return rhs_leray(ops, rom_filter ? &*rom_filter : nullptr, state,
                     config.filter.variant);
  };

  const double dt = config.dt;
  const Index steps =
      static_cast<Index>(std::llround((config.t_end - t0) / dt));
  if (steps < 1) {
    throw ValidationError("horizon shorter than one time step");
  }

  Trajectory traj;
  traj.model_tag = config.model == RomModel::galerkin
                       ? "galerkin"
                       : "leray-" + to_string(config.filter.variant);
  traj.delta = config.filter.delta;
  traj.times.resize(steps + 1);
  traj.coeffs.resize(steps + 1, config.r);
  traj.times[0] = t0;
  traj.coeffs.row(0) = a;

  Index recorded = 1;
  for (Index k = 1; k <= steps; ++k) {
    const Vector k1 = rhs(a);
    const Vector k2 = rhs(a + (0.5 * dt) * k1);
    const Vector k3 = rhs(a + (0.5 * dt) * k2);
    const Vector k4 = rhs(a + dt * k3);
    a += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!finite_and_bounded(a)) {
      traj.blown_up = true;
      traj.blowup_step = k;
      break;
    }
    traj.times[k] = t0 + static_cast<double>(k) * dt;
    traj.coeffs.row(k) = a;
    ++recorded;
  }
  traj.times.conservativeResize(recorded);
  traj.coeffs.conservativeResize(recorded, config.r);
  return traj;
}

void write_trajectory_csv(const Trajectory& traj,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write trajectory CSV: " + path.string());
  out << 't';
  for (Index j = 0; j < traj.rank(); ++j) {
    out << ",a" << (j + 1);
  }
  out << '\n';
  for (Index k = 0; k < traj.step_count(); ++k) {
    out << numfmt::format_double(traj.times[k]);
    for (Index j = 0; j < traj.rank(); ++j) {
      out << ',' << numfmt::format_double(traj.coeffs(k, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("empty trajectory CSV: " + path.string());
  }
  Index r = 0;
  for (char c : line) {
    if (c == ',') ++r;
  }
  if (r < 1) {
    throw FormatError("trajectory CSV header needs t and at least one "
                      "coefficient column");
  }

  std::vector<double> times;
  std::vector<double> coeffs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) {
      throw FormatError("bad trajectory CSV row: " + line);
    }
    times.push_back(numfmt::parse_double(cell));
    Index got = 0;
    while (std::getline(row, cell, ',')) {
      coeffs.push_back(numfmt::parse_double(cell));
      ++got;
    }
    if (got != r) {
      throw FormatError("trajectory CSV row has " + std::to_string(got) +
                        " coefficients, header implies " + std::to_string(r));
    }
  }

  Trajectory traj;
  const Index k = static_cast<Index>(times.size());
  traj.times = Eigen::Map<const Vector>(times.data(), k);
  traj.coeffs.resize(k, r);
  for (Index row = 0; row < k; ++row) {
    for (Index col = 0; col < r; ++col) {
      traj.coeffs(row, col) = coeffs[static_cast<std::size_t>(row * r + col)];
    }
  }
  traj.model_tag = "file";
  return traj;
}

} // namespace lrom
