#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iterator>
#include <span>
#include <vector>

#include "exactbs/types.hpp"

namespace exactbs {

/// Outcome of a boson sampling experiment: n mode indices in [1, m],
/// non-decreasing.
class ModeMultiset {
 public:
  ModeMultiset() = default;

  /// Validates 1 <= z_1 <= ... <= z_n <= m.
  static ModeMultiset from_sorted(std::vector<int> modes, int m);
  /// Sorts an arbitrary mode array.
  static ModeMultiset from_array(std::span<const int> modes, int m);

  std::span<const int> modes() const noexcept { return modes_; }
  const std::vector<int>& vec() const noexcept { return modes_; }
  int size() const noexcept { return static_cast<int>(modes_.size()); }
  bool has_collision() const noexcept;

  auto operator<=>(const ModeMultiset&) const = default;

 private:
  explicit ModeMultiset(std::vector<int> modes) : modes_(std::move(modes)) {}
  std::vector<int> modes_;
};

/// Unordered array of modes, 1-based; the expanded sample space [m]^n.
using ModeArray = std::vector<int>;

/// prod_j s_j! over mode multiplicities. Throws InputError when the result
/// does not fit 64 bits.
std::uint64_t mu(const ModeMultiset& z);

/// |Per A_z|^2 / mu(z), with A_z the n x n matrix whose k-th row is row z_k.
double prob_q(const ModeMultiset& z, const ComplexMatrix& a);

/// |Per A_r|^2 / n! over the expanded sample space.
double prob_p(std::span<const int> r, const ComplexMatrix& a);

/// Joint probability of a leading subsequence (r_1..r_k) under prob_p:
/// ((n-k)!/n!) * sum over k-subsets c of columns of |Per A^c_{r_1..r_k}|^2.
double marginal_p(std::span<const int> prefix, const ComplexMatrix& a);

/// Calls fn with each k-subset of {1..n} in lexicographic order.
void for_each_combination(int n, int k, const std::function<void(std::span<const int>)>& fn);

/// C(m+n-1, n), saturating at UINT64_MAX.
std::uint64_t multichoose(int m, int n);

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Lazily streams every non-decreasing n-array over [m] in lexicographic
/// order. Single consumer.
class MultisetStream {
 public:
  class iterator {
   public:
    using value_type = ModeMultiset;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    const ModeMultiset& operator*() const { return stream_->current_; }
    const ModeMultiset* operator->() const { return &stream_->current_; }
    iterator& operator++() {
      if (!stream_->advance()) stream_ = nullptr;
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return stream_ == nullptr; }

   private:
    friend class MultisetStream;
    explicit iterator(MultisetStream* s) : stream_(s) {}
    MultisetStream* stream_ = nullptr;
  };

  MultisetStream(int m, int n);
  iterator begin() { return iterator(started_ ? nullptr : (started_ = true, this)); }
  std::default_sentinel_t end() const { return {}; }
  std::uint64_t cardinality() const noexcept { return cardinality_; }

 private:
  bool advance();

  int m_;
  int n_;
  std::uint64_t cardinality_;
  bool started_ = false;
  std::vector<int> z_;
  ModeMultiset current_;
};

/// Enumerates Phi_{m,n}; refuses with GuardError when its cardinality
/// exceeds `cap`.
MultisetStream enumerate_phi(int m, int n, std::uint64_t cap = kDefaultEnumerationCap);

struct Outcome {
  ModeMultiset z;
  double probability = 0.0;
};

/// Every outcome of Phi_{m,n} with its probability, in lexicographic order.
struct OutcomeTable {
  int m = 0;
  int n = 0;
  std::vector<Outcome> outcomes;

  double total() const;
  /// Index of z in `outcomes` (binary search), or -1.
  std::ptrdiff_t find(const ModeMultiset& z) const;
};

OutcomeTable exact_table(const ComplexMatrix& a, std::uint64_t cap = kDefaultEnumerationCap);

/// Upper bound on the probability that a sample contains a repeated mode:
/// 2 * sum_i sum_{k<l} |a_ik a_il|^2. `raw` may exceed 1.
struct CollisionBound {
  double raw = 0.0;
  double clamped = 0.0;
};

CollisionBound collision_bound(const ComplexMatrix& a);

/// Haar average of the collision bound, n(n-1)/(m+1).
double haar_collision_reference(int m, int n);

/// Number of probabilities that came out negative and were clamped to 0.
std::uint64_t clamped_probability_count() noexcept;

}  // namespace exactbs
