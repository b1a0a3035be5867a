#include "exactbs/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <string>
#include <vector>

#include "exactbs/linalg.hpp"
#include "exactbs/permanent.hpp"
#include "exactbs/rng.hpp"
#include "exactbs/sampler.hpp"

namespace exactbs {

double median_seconds(int reps, const std::function<void()>& fn) {
  std::vector<double> times;
  times.reserve(std::max(reps, 1));
  for (int i = 0; i < std::max(reps, 1); ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  return times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
}

BenchRow bench_size(int n, int m, int reps, std::uint64_t seed) {
  const ComplexMatrix a = input_matrix(haar_unitary(m, seed), n);
  const ComplexMatrix block = a.topRows(n);

  BenchRow row;
  row.n = n;
  row.m = m;
  // Keeps the optimizer from discarding results.
  volatile double sink = 0.0;
  std::uint64_t stream = 0;
  row.sample_b = median_seconds(reps, [&] {
    Rng rng = Rng::stream(seed, ++stream);
    sink = sink + *sample_B(a, rng).probability;
  });
  row.permanent = median_seconds(reps, [&] { sink = sink + std::abs(permanent_glynn(block)); });
  row.minors = median_seconds(reps, [&] { sink = sink + std::abs(minors_last_row(block)(0)); });
  return row;
}

std::function<int(int)> parse_mode_rule(std::string_view rule) {
  const auto bad = [&] { return InputError("bad mode rule '" + std::string(rule) + "'"); };
  if (rule.starts_with("fixed:")) {
    int m = 0;
    const auto text = rule.substr(6);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), m);
    if (ec != std::errc() || ptr != text.data() + text.size() || m < 1) throw bad();
    return [m](int) { return m; };
  }
  if (rule.ends_with("n^2")) {
    const auto text = rule.substr(0, rule.size() - 3);
    int factor = 1;
    if (!text.empty()) {
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), factor);
      if (ec != std::errc() || ptr != text.data() + text.size() || factor < 1) throw bad();
    }
    return [factor](int n) { return factor * n * n; };
  }
  throw bad();
}

}  // namespace exactbs
