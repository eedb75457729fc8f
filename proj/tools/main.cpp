// Command-line front end wiring the pipeline:
//   generate -> pod -> assemble -> run -> calibrate -> bench -> report
// Every command reads one key = value config file; --set overrides single
// entries; outputs land in a per-run directory named by the hash of the
// effective configuration.

#include "lrom/benchmark.hpp"
#include "lrom/burgers.hpp"
#include "lrom/calibrate.hpp"
#include "lrom/diagnostics.hpp"
#include "lrom/errors.hpp"
#include "lrom/integrate.hpp"
#include "lrom/numfmt.hpp"
#include "lrom/pod.hpp"
#include "lrom/rom.hpp"
#include "lrom/run_config.hpp"
#include "lrom/snapshot_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace lrom;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::string> overrides;
};

ConfigFile load_config(const GlobalOptions& opts) {
  ConfigFile config = opts.config_path.empty()
                          ? ConfigFile()
                          : ConfigFile::parse_file(opts.config_path);
  for (const auto& spec : opts.overrides) {
    config.apply_override(spec);
  }
  return config;
}

fs::path make_run_dir(const GlobalOptions& opts, const ConfigFile& config,
                      const std::string& command) {
  const fs::path dir = fs::path(opts.out_dir) /
                       (command + "-" + config_hash(config, command, opts.seed));
  fs::create_directories(dir);
  std::ofstream snapshot(dir / "config.txt", std::ios::trunc);
  snapshot << "command=" << command << '\n'
           << "seed=" << opts.seed << '\n'
           << config.canonical();
  std::cout << "run-dir: " << dir.string() << '\n';
  return dir;
}

// Prints to stdout and mirrors into <run dir>/summary.txt.
class Summary {
public:
  explicit Summary(const fs::path& dir) : file_(dir / "summary.txt") {}
  template <typename T>
  Summary& operator<<(const T& value) {
    std::cout << value;
    file_ << value;
    return *this;
  }

private:
  std::ofstream file_;
};

BurgersConfig::Initial initial_from_string(const std::string& text) {
  if (text == "sine") return BurgersConfig::Initial::sine;
  if (text == "two-wave") return BurgersConfig::Initial::two_wave;
  if (text == "custom") return BurgersConfig::Initial::custom;
  throw ConfigError("unknown initial condition tag: '" + text + "'");
}

BurgersConfig burgers_config_from(const ConfigFile& config,
                                  std::uint64_t seed) {
  config.check_known_keys(
      "generate", {"n", "domain_length", "nu", "dt", "t_end", "snapshot_stride",
                   "initial", "custom_samples", "perturb_amplitude", "bundle"});
  BurgersConfig fom;
  fom.n = config.get_integer("generate", "n", 256);
  fom.domain_length = config.get_double("generate", "domain_length", 1.0);
  fom.nu = config.get_double("generate", "nu", 0.01);
  fom.dt = config.get_double("generate", "dt", 2.5e-4);
  fom.t_end = config.get_double("generate", "t_end", 2.0);
  fom.snapshot_stride = config.get_integer("generate", "snapshot_stride", 16);
  fom.initial =
      initial_from_string(config.get_string("generate", "initial", "two-wave"));
  if (fom.initial == BurgersConfig::Initial::custom) {
    const auto samples = config.get_double_list("generate", "custom_samples");
    fom.custom_samples =
        Eigen::Map<const Vector>(samples.data(),
                                 static_cast<Index>(samples.size()));
  }

  const double amp = config.get_double("generate", "perturb_amplitude", 0.0);
  if (amp > 0.0) {
    // seeded low-mode Fourier perturbation; this is what --seed feeds
    Vector u0 = fom.initial_state();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (int k = 1; k <= 4; ++k) {
      const double amplitude = amp * gauss(rng);
      const double shift = phase(rng);
      for (Index i = 0; i < fom.n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(fom.n);
        u0[i] += amplitude * std::sin(2.0 * std::numbers::pi * k * x + shift);
      }
    }
    fom.initial = BurgersConfig::Initial::custom;
    fom.custom_samples = std::move(u0);
  }
  return fom;
}

int cmd_generate(const GlobalOptions& opts) {
  const ConfigFile config = load_config(opts);
  const BurgersConfig fom = burgers_config_from(config, opts.seed);
  const fs::path dir = make_run_dir(opts, config, "generate");

  const SnapshotSet set = run_fom(fom);
  const std::string bundle = config.get_string("generate", "bundle", "burgers");
  write_snapshot_set(set, dir / bundle);

  Summary out(dir);
  out << "bundle: " << (dir / bundle).string() << '\n'
      << "n: " << set.dof_count() << '\n'
      << "s: " << set.snapshot_count() << '\n'
      << "t: [" << numfmt::format_double(set.times[0]) << ", "
      << numfmt::format_double(set.times[set.times.size() - 1]) << "]\n";
  return 0;
}

int cmd_pod(const GlobalOptions& opts) {
  const ConfigFile config = load_config(opts);
  config.check_known_keys("pod", {"bundle", "d_max", "drop_tol", "basis"});
  const fs::path dir = make_run_dir(opts, config, "pod");

  const SnapshotSet set =
      read_snapshot_set(config.require_string("pod", "bundle"));
  const Index d_cap = std::min(set.dof_count(), set.snapshot_count());
  const Index d_max = config.get_integer("pod", "d_max", d_cap);
  const double drop_tol = config.get_double("pod", "drop_tol", 1e-12);

  const PodBasis basis = compute_pod(set, d_max, drop_tol);
  save_pod(basis, dir / config.get_string("pod", "basis", "basis"));
  write_spectrum_csv(basis, dir / "spectrum.csv");

  Summary out(dir);
  out << "d: " << basis.rank() << '\n'
      << "lambda_1: " << numfmt::format_double(basis.eigenvalues[0]) << '\n'
      << "captured energy: "
      << numfmt::format_double(basis.eigenvalues.sum()) << '\n';
  return 0;
}

int cmd_assemble(const GlobalOptions& opts) {
  const ConfigFile config = load_config(opts);
  config.check_known_keys(
      "assemble", {"bundle", "basis", "r", "delta", "rom", "save_filtered_basis"});
  const fs::path dir = make_run_dir(opts, config, "assemble");

  const SnapshotSet set =
      read_snapshot_set(config.require_string("assemble", "bundle"));
  const PodBasis basis =
      load_pod(config.require_string("assemble", "basis"));
  const Index r = config.get_integer("assemble", "r", 4);
  const double delta = config.get_double("assemble", "delta", 0.0);

  RomOperators ops = assemble_galerkin(basis, r, set);
  if (delta > 0.0) {
    ops = assemble_leray_fe(std::move(ops), basis, set, delta);
    if (config.get_bool("assemble", "save_filtered_basis", false)) {
      PodBasis filtered = basis;
      filtered.modes = filter_basis(basis, basis.rank(), set.mass,
                                    set.stiffness, delta);
      save_pod(filtered, dir / "filtered_basis", delta);
    }
  }
  save_rom(ops, dir / config.get_string("assemble", "rom", "rom"));

  Summary out(dir);
  out << "r: " << ops.r << '\n'
      << "leray tensor: " << (ops.has_leray() ? "yes" : "no") << '\n'
      << "delta: " << numfmt::format_double(ops.leray_delta) << '\n';
  return 0;
}

struct PipelineArtifacts {
  SnapshotSet set;
  PodBasis basis;
  RomOperators ops;
  RomRunConfig run;
};

PipelineArtifacts build_pipeline(const ConfigFile& config,
                                 const std::string& section) {
  PipelineArtifacts art;
  art.set = read_snapshot_set(config.require_string(section, "bundle"));
  const Index d_cap = std::min(art.set.dof_count(), art.set.snapshot_count());
  art.basis = compute_pod(art.set,
                          config.get_integer(section, "d_max", d_cap),
                          config.get_double(section, "drop_tol", 1e-12));

  art.run.r = config.get_integer(section, "r", 4);
  art.run.dt = config.get_double(section, "dt", 5e-4);
  art.run.t_end = config.get_double(
      section, "t_end", art.set.times[art.set.times.size() - 1]);
  art.run.model =
      rom_model_from_string(config.get_string(section, "model", "galerkin"));
  art.run.filter.variant = filter_variant_from_string(
      config.get_string(section, "variant", "none"));
  art.run.filter.delta = config.get_double(section, "delta", 0.0);

  const std::string initial =
      config.get_string(section, "initial", "project");
  if (initial == "project") {
    art.run.initial = RomRunConfig::Initial::project_first_snapshot;
  } else if (initial == "explicit") {
    art.run.initial = RomRunConfig::Initial::explicit_coefficients;
    const auto a0 = config.get_double_list(section, "initial_coefficients");
    art.run.initial_coefficients =
        Eigen::Map<const Vector>(a0.data(), static_cast<Index>(a0.size()));
  } else {
    throw ConfigError("initial must be 'project' or 'explicit', got '" +
                      initial + "'");
  }

  art.ops = assemble_galerkin(art.basis, art.run.r, art.set);
  if (art.run.model == RomModel::leray &&
      art.run.filter.variant == FilterVariant::fe_level) {
    art.ops = assemble_leray_fe(std::move(art.ops), art.basis, art.set,
                                art.run.filter.delta);
  }
  return art;
}

int cmd_run(const GlobalOptions& opts) {
  const ConfigFile config = load_config(opts);
  config.check_known_keys(
      "run", {"bundle", "r", "dt", "t_end", "model", "variant", "delta",
              "d_max", "drop_tol", "warmup", "initial", "initial_coefficients",
              "phase_i", "phase_j"});
  const fs::path dir = make_run_dir(opts, config, "run");

  PipelineArtifacts art = build_pipeline(config, "run");
  const Trajectory traj = integrate(art.ops, art.run, art.basis, art.set);

  write_trajectory_csv(traj, dir / "trajectory.csv");
  write_norm_series_csv(l2_norm_series(traj), dir / "l2norm.csv");
  const Index pi = config.get_integer("run", "phase_i", 1);
  const Index pj = config.get_integer("run", "phase_j", 2);
  if (art.run.r >= std::max(pi, pj)) {
    std::ostringstream name;
    name << "phase_" << pi << "_" << pj << ".csv";
    write_phase_csv(phase_portrait(traj, pi, pj), dir / name.str());
  }
  write_spectrum_csv(art.basis, dir / "spectrum.csv");
  const Trajectory projection =
      project_snapshots(art.basis, art.run.r, art.set);
  write_trajectory_csv(projection, dir / "projection.csv");

  const double warmup = config.get_double("run", "warmup", 0.2);
  std::string rom_ke = "n/a";
  try {
    rom_ke = numfmt::format_double(mean_kinetic_energy(traj, warmup));
  } catch (const ValidationError&) {
    // trajectory truncated before the averaging window opened
  }

  Summary out(dir);
  out << "model: " << traj.model_tag << '\n';
  out << "r delta mean_ke blowup\n"
      << art.run.r << ' ' << numfmt::format_double(traj.delta) << ' '
      << rom_ke << ' ' << (traj.blown_up ? "yes" : "no") << '\n';
  out << "projection mean_ke: "
      << numfmt::format_double(mean_kinetic_energy(projection, warmup))
      << '\n';
  if (traj.blown_up) {
    out << "blowup step: " << traj.blowup_step << '\n';
  }
  return 0;
}

int cmd_calibrate(const GlobalOptions& opts) {
  const ConfigFile config = load_config(opts);
  config.check_known_keys(
      "calibrate", {"bundle", "r", "dt", "t_end", "variant", "delta_min",
                    "delta_max", "n_grid", "refine_iters", "warmup", "d_max",
                    "drop_tol"});
  const fs::path dir = make_run_dir(opts, config, "calibrate");

  const SnapshotSet set =
      read_snapshot_set(config.require_string("calibrate", "bundle"));
  const Index d_cap = std::min(set.dof_count(), set.snapshot_count());
  const PodBasis basis =
      compute_pod(set, config.get_integer("calibrate", "d_max", d_cap),
                  config.get_double("calibrate", "drop_tol", 1e-12));
  const Index r = config.get_integer("calibrate", "r", 4);
  const RomOperators ops = assemble_galerkin(basis, r, set);

  CalibrationOptions cal;
  cal.delta_min = config.get_double("calibrate", "delta_min", 1e-3);
  cal.delta_max = config.get_double("calibrate", "delta_max", 1.0);
  cal.grid_points =
      static_cast<int>(config.get_integer("calibrate", "n_grid", 12));
  cal.refine_iters =
      static_cast<int>(config.get_integer("calibrate", "refine_iters", 20));
  cal.warmup_fraction = config.get_double("calibrate", "warmup", 0.2);
  cal.variant = filter_variant_from_string(
      config.get_string("calibrate", "variant", "rom"));
  cal.rom_dt = config.get_double("calibrate", "dt", 5e-4);
  cal.rom_t_end = config.get_double("calibrate", "t_end", 0.0);
  cal.threads = opts.threads;

  const CalibrationResult result = calibrate_delta(ops, basis, set, r, cal);

  {
    std::ofstream sweep(dir / "calibration.csv", std::ios::trunc);
    sweep << "delta,mean_ke\n";
    for (const auto& [delta, ke] : result.sweep) {
      sweep << numfmt::format_double(delta) << ','
            << numfmt::format_double(ke) << '\n';
    }
  }

  Summary out(dir);
  out << "delta_star: " << numfmt::format_double(result.delta_star) << '\n'
      << "objective: " << numfmt::format_double(result.objective_value) << '\n'
      << "converged: " << (result.converged ? "yes" : "no") << '\n';
  return 0;
}

int cmd_bench(const GlobalOptions& opts) {
  const ConfigFile config = load_config(opts);
  config.check_known_keys("bench", {"ranks", "min_block_ms"});
  const fs::path dir = make_run_dir(opts, config, "bench");

  std::vector<Index> ranks;
  for (double r : config.get_double_list("bench", "ranks")) {
    ranks.push_back(static_cast<Index>(r));
  }
  if (ranks.empty()) ranks = {8, 16, 32, 64};
  const double block =
      config.get_double("bench", "min_block_ms", 20.0) / 1000.0;

  const BenchReport report = run_complexity_bench(ranks, opts.seed, block);

  {
    std::ofstream csv(dir / "bench.csv", std::ios::trunc);
    csv << "r,rhs_ns,filter_ns\n";
    for (const auto& s : report.samples) {
      csv << s.r << ',' << numfmt::format_double(s.rhs_ns) << ','
          << numfmt::format_double(s.filter_ns) << '\n';
    }
  }

  std::cout << "r rhs_ns filter_ns\n";
  for (const auto& s : report.samples) {
    std::cout << s.r << ' ' << s.rhs_ns << ' ' << s.filter_ns << '\n';
  }
  std::cout << "rhs slope: " << report.rhs_slope << '\n'
            << "filter slope: " << report.filter_slope << '\n'
            << "max filter/rhs ratio: " << report.worst_filter_to_rhs_ratio
            << '\n';
  return 0;
}

int cmd_report(const GlobalOptions& opts) {
  const ConfigFile config = load_config(opts);
  config.check_known_keys(
      "report", {"trajectory", "bundle", "r", "d_max", "drop_tol", "warmup",
                 "phase_i", "phase_j"});
  const fs::path dir = make_run_dir(opts, config, "report");

  const Trajectory traj =
      read_trajectory_csv(config.require_string("report", "trajectory"));
  write_norm_series_csv(l2_norm_series(traj), dir / "l2norm.csv");
  const Index pi = config.get_integer("report", "phase_i", 1);
  const Index pj = config.get_integer("report", "phase_j", 2);
  if (traj.rank() >= std::max(pi, pj)) {
    std::ostringstream name;
    name << "phase_" << pi << "_" << pj << ".csv";
    write_phase_csv(phase_portrait(traj, pi, pj), dir / name.str());
  }

  Summary out(dir);
  const double warmup = config.get_double("report", "warmup", 0.2);
  out << "steps: " << traj.step_count() << '\n'
      << "mean_ke: "
      << numfmt::format_double(mean_kinetic_energy(traj, warmup)) << '\n';

  if (config.has("report", "bundle")) {
    const SnapshotSet set =
        read_snapshot_set(config.require_string("report", "bundle"));
    const Index d_cap = std::min(set.dof_count(), set.snapshot_count());
    const PodBasis basis =
        compute_pod(set, config.get_integer("report", "d_max", d_cap),
                    config.get_double("report", "drop_tol", 1e-12));
    write_spectrum_csv(basis, dir / "spectrum.csv");
    const Index r = config.get_integer("report", "r", traj.rank());
    const Trajectory projection = project_snapshots(basis, r, set);
    write_trajectory_csv(projection, dir / "projection.csv");
    out << "projection mean_ke: "
        << numfmt::format_double(mean_kinetic_energy(projection, warmup))
        << '\n';
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"POD-Galerkin reduced order models with Leray differential "
               "filtering"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "configuration file");
  app.add_option("--out-dir", opts.out_dir, "root directory for run outputs");
  app.add_option("--seed", opts.seed, "RNG seed for seeded stages");
  app.add_option("--threads", opts.threads, "worker threads for sweeps");
  app.add_option("--set", opts.overrides,
                 "override a config entry: section.key=value");

  auto* generate = app.add_subcommand("generate", "run the full-order model "
                                                  "and write a snapshot bundle");
  auto* pod = app.add_subcommand("pod", "compute a POD basis from a bundle");
  auto* assemble =
      app.add_subcommand("assemble", "assemble reduced operators");
  auto* run = app.add_subcommand("run", "full pipeline: POD, assembly, time "
                                        "integration, diagnostics");
  auto* calibrate =
      app.add_subcommand("calibrate", "match the L-ROM mean kinetic energy "
                                      "to the snapshot data");
  auto* bench =
      app.add_subcommand("bench", "time the online kernels over a rank ladder");
  auto* report =
      app.add_subcommand("report", "diagnostics for an existing trajectory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(opts);
    if (pod->parsed()) return cmd_pod(opts);
    if (assemble->parsed()) return cmd_assemble(opts);
    if (run->parsed()) return cmd_run(opts);
    if (calibrate->parsed()) return cmd_calibrate(opts);
    if (bench->parsed()) return cmd_bench(opts);
    if (report->parsed()) return cmd_report(opts);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 1;
  } catch (const BlowupError& e) {
    std::cerr << "blow-up: " << e.what() << '\n';
    return 3;
  } catch (const CalibrationError& e) {
    std::cerr << "calibration: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    // format, consistency, validation, config, numerical
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
