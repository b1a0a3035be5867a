#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "exactbs/distribution.hpp"
#include "exactbs/rng.hpp"
#include "exactbs/types.hpp"

namespace exactbs {

enum class SamplerKind { brute, A, B, collision_free };

std::string_view to_string(SamplerKind kind);
/// Accepts "brute", "A", "B", "collision-free".
SamplerKind parse_sampler_kind(std::string_view text);

struct SampleRecord {
  ModeMultiset z;
  /// q(z) when the sampler had it for free.
  std::optional<double> probability;
  SamplerKind sampler = SamplerKind::B;
  /// Seed of the generator the sample was drawn with, and its stream index
  /// for batch runs.
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  /// Column permutation used by Algorithm B, 1-based.
  std::vector<int> alpha;
  /// Rejected draws before acceptance (collision-free sampler only).
  int rejections = 0;
  /// Some stage's largest weight fell below kWeightUnderflowLevel.
  bool weight_underflow = false;
};

inline constexpr double kWeightUnderflowLevel = 1e-280;

/// Draws a 1-based index with probability w_i / sum(w) using one uniform
/// and a cumulative scan. A uniform landing exactly on a cumulative
/// boundary resolves to the lower index. Throws SamplerError if the weights
/// are all zero, negative, or not finite.
int draw_weighted(std::span<const double> w, Rng& rng, int stage = 0);

/// Uniform permutation of 1..n (Fisher-Yates).
std::vector<int> random_permutation(int n, Rng& rng);

/// Exact sampler over the full outcome table. The table is built once and
/// reused for every draw.
class BruteSampler {
 public:
  explicit BruteSampler(const ComplexMatrix& a, std::uint64_t cap = kDefaultEnumerationCap);
  SampleRecord sample(Rng& rng) const;
  const OutcomeTable& table() const noexcept { return table_; }

 private:
  OutcomeTable table_;
  std::vector<double> weights_;
};

SampleRecord sample_brute(const ComplexMatrix& a, Rng& rng,
                          std::uint64_t cap = kDefaultEnumerationCap);

/// Algorithm A refuses n above this unless told otherwise.
inline constexpr int kDefaultMaxNForA = 16;

/// Chain-rule sampler: stage k draws r_k with weight
/// sum over k-subsets c of columns of |Per A^c_{(r_1..r_{k-1}, i)}|^2.
/// O(m n 3^n) per sample.
SampleRecord sample_A(const ComplexMatrix& a, Rng& rng, int max_n = kDefaultMaxNForA);

/// Snapshot of one stage of Algorithm B, passed to OptionsB::observer.
struct StageWeights {
  int stage;                         ///< 1-based k
  std::span<const int> alpha;        ///< full column permutation, 1-based
  std::span<const int> prefix;       ///< r_1..r_{k-1}, 1-based
  std::span<const double> weights;   ///< unnormalized pmf over the m modes
};

enum class AlphaMode {
  uniform,
  /// Use alpha = (1..n). Only valid for a single sample from a Haar random
  /// input, whose columns are already exchangeable.
  identity,
};

struct OptionsB {
  AlphaMode alpha = AlphaMode::uniform;
  std::function<void(const StageWeights&)> observer;
};

/// Auxiliary-permutation sampler. Draws alpha, then r_1 from |a_{i,alpha_1}|^2
/// and each later r_k from |sum_l a_{i,alpha_l} Per B_l|^2, where the B_l are
/// the k last-row minors of A^{alpha_1..alpha_k}_{r_1..r_{k-1}, .} computed
/// in one sweep. The last stage's chosen weight is |Per A_r|^2, so the
/// returned record carries q(z). O(n 2^n + m n^2) per sample.
SampleRecord sample_B(const ComplexMatrix& a, Rng& rng, const OptionsB& options = {});

struct BatchOptions {
  AlphaMode alpha = AlphaMode::uniform;
  /// Worker threads; results do not depend on this.
  int jobs = 1;
  /// Stream index of the first sample, for drawing a long run in chunks.
  std::uint64_t first_stream = 0;
};

/// `count` samples, sample i drawn from Rng::stream(seed, first_stream + i).
std::vector<SampleRecord> sample_B_batch(const ComplexMatrix& a, std::size_t count,
                                         std::uint64_t seed, const BatchOptions& options = {});

/// The rejection budget of sample_collision_free ran out.
class RejectionLimitError : public SamplerError {
 public:
  explicit RejectionLimitError(int attempts);
  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

/// Repeats sample_B until the outcome has n distinct modes. The record's
/// probability is the unconditional q(z).
SampleRecord sample_collision_free(const ComplexMatrix& a, Rng& rng, int max_tries,
                                   const OptionsB& options = {});

}  // namespace exactbs
