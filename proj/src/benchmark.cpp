#include "lrom/benchmark.hpp"

#include "lrom/errors.hpp"
#include "lrom/filter.hpp"
#include "lrom/integrate.hpp"
#include "lrom/rom.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace lrom {

namespace {

using Clock = std::chrono::steady_clock;

RomOperators synthetic_operators(Index r, std::uint64_t seed) {
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
  std::normal_distribution<double> dist(0.0, 1.0);
  auto random_matrix = [&](Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
    }
    return m;
  };

  RomOperators ops;
  ops.r = r;
  const Matrix g = random_matrix(r, r);
  ops.S_r = g * g.transpose() + Matrix::Identity(r, r); // SPD
  ops.M_r = Matrix::Identity(r, r);
  ops.A = -0.01 * ops.S_r;
  ops.B.reserve(static_cast<std::size_t>(r));
  for (Index j = 0; j < r; ++j) {
    const Matrix k = random_matrix(r, r);
    ops.B.push_back(0.5 * (k - k.transpose()));
  }
  return ops;
}

// Median per-call time of `call`, measured in blocks long enough for the
// clock to resolve. The data dependence through `sink` keeps the optimizer
// from hoisting or eliding the kernel.
template <typename Call>
double per_call_ns(Call&& call, double min_block_seconds) {
  double sink = 0.0;
  // estimate
  const auto est_start = Clock::now();
  constexpr int kProbe = 16;
  for (int i = 0; i < kProbe; ++i) sink += call(sink);
  const double est =
      std::chrono::duration<double>(Clock::now() - est_start).count() / kProbe;
  const long long per_block = std::max<long long>(
      1, static_cast<long long>(std::ceil(min_block_seconds /
                                          std::max(est, 1e-9))));

  constexpr int kBlocks = 7;
  std::vector<double> block_ns(kBlocks);
  for (int b = 0; b < kBlocks; ++b) {
    const auto start = Clock::now();
    for (long long i = 0; i < per_block; ++i) sink += call(sink);
    const auto stop = Clock::now();
    block_ns[static_cast<std::size_t>(b)] =
        std::chrono::duration<double, std::nano>(stop - start).count() /
        static_cast<double>(per_block);
  }
  std::nth_element(block_ns.begin(), block_ns.begin() + kBlocks / 2,
                   block_ns.end());
  if (!std::isfinite(sink)) {
    throw NumericalError("benchmark kernel diverged");
  }
  return block_ns[kBlocks / 2];
}

double fit_slope(const std::vector<BenchSample>& samples, bool filter_column) {
  const auto m = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& s : samples) {
    const double x = std::log(static_cast<double>(s.r));
    const double y = std::log(filter_column ? s.filter_ns : s.rhs_ns);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace

BenchReport run_complexity_bench(const std::vector<Index>& ranks,
                                 std::uint64_t seed,
                                 double min_block_seconds) {
  if (ranks.size() < 2) {
    throw ValidationError("complexity bench needs at least two ranks");
  }
  BenchReport report;
  report.samples.reserve(ranks.size());

  for (const Index r : ranks) {
    const RomOperators ops = synthetic_operators(r, seed);
    const RomFilterOperator filter(ops.M_r, ops.S_r, 0.1);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector a(r);
    for (Index i = 0; i < r; ++i) a[i] = dist(rng);

    Index bump = 0;
    auto perturbed = [&](double sink) -> Vector& {
      a[bump] += sink * 1e-300 + 1e-12;
      ++bump;
      if (bump == r) bump = 0;
      return a;
    };
    BenchSample sample;
    sample.r = r;
    sample.rhs_ns = per_call_ns(
        [&](double sink) { return rhs_galerkin(ops, perturbed(sink))[0]; },
        min_block_seconds);
    Vector filtered(r);
    sample.filter_ns = per_call_ns(
        [&](double sink) {
          filter.apply_into(perturbed(sink), filtered);
          return filtered[0];
        },
        min_block_seconds);
    report.samples.push_back(sample);
  }

  report.rhs_slope = fit_slope(report.samples, false);
  report.filter_slope = fit_slope(report.samples, true);
  report.worst_filter_to_rhs_ratio = 0.0;
  for (const auto& s : report.samples) {
    report.worst_filter_to_rhs_ratio =
        std::max(report.worst_filter_to_rhs_ratio, s.filter_ns / s.rhs_ns);
  }
  return report;
}

} // namespace lrom
