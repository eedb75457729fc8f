#pragma once

#include "lrom/types.hpp"

#include <cstdint>
#include <vector>

namespace lrom {

/// Timing of the two online kernels on synthetic operators of rank r.
struct BenchSample {
  Index r = 0;
  double rhs_ns = 0.0;    // per call, G-ROM right-hand side (O(r^3))
  double filter_ns = 0.0; // per call, ROM filter application (O(r^2))
};

struct BenchReport {
  std::vector<BenchSample> samples;
  double rhs_slope = 0.0;    // log-log least-squares fit over the r ladder
  double filter_slope = 0.0;
  double worst_filter_to_rhs_ratio = 0.0; // max over r of filter/rhs time
};

/// Measures per-call time of rhs_galerkin and apply_rom_filter across the
/// rank ladder using synthetic (seeded random) operators, and fits log-log
/// slopes. The filter must stay cheap relative to the nonlinearity for the
/// online stage to keep its O(r^3) cost profile.
BenchReport run_complexity_bench(const std::vector<Index>& ranks,
                                 std::uint64_t seed = 42,
                                 double min_block_seconds = 0.02);

} // namespace lrom
