#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

namespace exactbs {

/// Median wall times (seconds) for one problem size.
struct BenchRow {
  int n = 0;
  int m = 0;
  double sample_b = 0.0;   ///< one sample_B call on an m x n Haar input
  double permanent = 0.0;  ///< permanent_glynn of an n x n block
  double minors = 0.0;     ///< minors_last_row of the same block
};

/// Times each kernel `reps` times on inputs derived from `seed` and reports
/// the medians.
BenchRow bench_size(int n, int m, int reps, std::uint64_t seed);

/// Median of `reps` timed calls of fn.
double median_seconds(int reps, const std::function<void()>& fn);

/// Mode-count rule for benchmarks: "<c>n^2" (e.g. "2n^2") or "fixed:<m>".
std::function<int(int)> parse_mode_rule(std::string_view rule);

}  // namespace exactbs
