#include "exactbs/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "exactbs/linalg.hpp"
#include "exactbs/permanent.hpp"

namespace exactbs {

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::brute: return "brute";
    case SamplerKind::A: return "A";
    case SamplerKind::B: return "B";
    case SamplerKind::collision_free: return "collision-free";
  }
  return "?";
}

SamplerKind parse_sampler_kind(std::string_view text) {
  if (text == "brute") return SamplerKind::brute;
  if (text == "A") return SamplerKind::A;
  if (text == "B") return SamplerKind::B;
  if (text == "collision-free") return SamplerKind::collision_free;
  throw InputError("unknown sampler '" + std::string(text) + "'");
}

int draw_weighted(std::span<const double> w, Rng& rng, int stage) {
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw SamplerError("weight vector has a negative or non-finite entry", stage);
    total += x;
  }
  if (!(total > 0.0)) throw SamplerError("all weights are zero", stage);

  const double target = rng.uniform() * total;
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    cumulative += w[i];
    last_positive = static_cast<int>(i) + 1;
    if (target <= cumulative) return last_positive;
  }
  // Rounding can leave the final cumulative sum a hair below target.
  return last_positive;
}

std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> perm = iota_indices(n);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

BruteSampler::BruteSampler(const ComplexMatrix& a, std::uint64_t cap) : table_(exact_table(a, cap)) {
  weights_.reserve(table_.outcomes.size());
  for (const auto& o : table_.outcomes) weights_.push_back(o.probability);
}

SampleRecord BruteSampler::sample(Rng& rng) const {
  const int idx = draw_weighted(weights_, rng) - 1;
  SampleRecord rec;
  rec.z = table_.outcomes[idx].z;
  rec.probability = table_.outcomes[idx].probability;
  rec.sampler = SamplerKind::brute;
  rec.seed = rng.seed();
  return rec;
}

SampleRecord sample_brute(const ComplexMatrix& a, Rng& rng, std::uint64_t cap) {
  return BruteSampler(a, cap).sample(rng);
}

namespace {

void require_sampling_shape(const ComplexMatrix& a, const char* who) {
  if (a.cols() < 1) throw InputError(std::string(who) + ": matrix has no columns");
  if (a.rows() < 1) throw InputError(std::string(who) + ": matrix has no rows");
}

double multiplicity(const ModeMultiset& z) {
  double out = 1.0;
  double run = 0.0;
  const auto modes = z.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    run = (i > 0 && modes[i] == modes[i - 1]) ? run + 1.0 : 1.0;
    out *= run;
  }
  return out;
}

}  // namespace

SampleRecord sample_A(const ComplexMatrix& a, Rng& rng, int max_n) {
  require_sampling_shape(a, "sample_A");
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (n > max_n)
    throw GuardError("Algorithm A costs O(m n 3^n); n=" + std::to_string(n) + " exceeds its guard " +
                     std::to_string(max_n) + ", use Algorithm B");

  std::vector<int> r;
  r.reserve(n);
  std::vector<double> w(m);
  ComplexMatrix block;
  for (int k = 1; k <= n; ++k) {
    std::fill(w.begin(), w.end(), 0.0);
    block.resize(k, k);
    for_each_combination(n, k, [&](std::span<const int> cols) {
      for (int i = 0; i < k - 1; ++i)
        for (int j = 0; j < k; ++j) block(i, j) = a(r[i] - 1, cols[j] - 1);
      for (int mode = 0; mode < m; ++mode) {
        for (int j = 0; j < k; ++j) block(k - 1, j) = a(mode, cols[j] - 1);
        w[mode] += std::norm(permanent_glynn(block));
      }
    });
    r.push_back(draw_weighted(w, rng, k));
  }

  SampleRecord rec;
  rec.z = ModeMultiset::from_array(r, m);
  // Stage n sums over the single column set [n], so the chosen weight is |Per A_r|^2.
  rec.probability = w[r.back() - 1] / multiplicity(rec.z);
  rec.sampler = SamplerKind::A;
  rec.seed = rng.seed();
  return rec;
}

SampleRecord sample_B(const ComplexMatrix& a, Rng& rng, const OptionsB& options) {
  require_sampling_shape(a, "sample_B");
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (n > kMaxGrayOrder) throw GuardError("sample_B: n exceeds 64");
  if (m < n) throw InputError("sample_B: needs m >= n");

  std::vector<int> alpha =
      options.alpha == AlphaMode::identity ? iota_indices(n) : random_permutation(n, rng);
  ComplexMatrix permuted(m, n);
  for (int j = 0; j < n; ++j) permuted.col(j) = a.col(alpha[j] - 1);

  std::vector<int> r;
  r.reserve(n);
  std::vector<double> w(m);
  bool underflow = false;
  const auto finish_stage = [&](int k) {
    const double peak = *std::max_element(w.begin(), w.end());
    if (peak < kWeightUnderflowLevel) underflow = true;
    if (options.observer) options.observer(StageWeights{k, alpha, r, w});
    r.push_back(draw_weighted(w, rng, k));
  };

  for (int i = 0; i < m; ++i) w[i] = std::norm(permuted(i, 0));
  finish_stage(1);

  ComplexMatrix top;
  ComplexVector laplace(m);
  for (int k = 2; k <= n; ++k) {
    top.resize(k - 1, k);
    for (int i = 0; i < k - 1; ++i) top.row(i) = permuted.row(r[i] - 1).head(k);
    const ComplexVector minors = minors_from_leading_rows(top);
    laplace.noalias() = permuted.leftCols(k) * minors;
    for (int i = 0; i < m; ++i) w[i] = std::norm(laplace(i));
    finish_stage(k);
  }

  SampleRecord rec;
  rec.z = ModeMultiset::from_array(r, m);
  rec.probability = w[r.back() - 1] / multiplicity(rec.z);
  rec.sampler = SamplerKind::B;
  rec.seed = rng.seed();
  rec.alpha = std::move(alpha);
  rec.weight_underflow = underflow;
  return rec;
}

std::vector<SampleRecord> sample_B_batch(const ComplexMatrix& a, std::size_t count,
                                         std::uint64_t seed, const BatchOptions& options) {
  std::vector<SampleRecord> out(count);
  const OptionsB single{options.alpha, {}};
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        const std::uint64_t stream = options.first_stream + i;
        Rng rng = Rng::stream(seed, stream);
        out[i] = sample_B(a, rng, single);
        out[i].seed = seed;
        out[i].stream = stream;
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1 || count < 2) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

RejectionLimitError::RejectionLimitError(int attempts)
    : SamplerError("no collision-free outcome after " + std::to_string(attempts) + " attempts", 0),
      attempts_(attempts) {}

SampleRecord sample_collision_free(const ComplexMatrix& a, Rng& rng, int max_tries,
                                   const OptionsB& options) {
  if (a.rows() < a.cols())
    throw InputError("collision-free sampling needs m >= n");
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    SampleRecord rec = sample_B(a, rng, options);
    if (!rec.z.has_collision()) {
      rec.sampler = SamplerKind::collision_free;
      rec.rejections = attempt;
      return rec;
    }
  }
  throw RejectionLimitError(max_tries);
}

}  // namespace exactbs
