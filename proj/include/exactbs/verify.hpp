#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string_view>

#include "exactbs/distribution.hpp"
#include "exactbs/sampler.hpp"

namespace exactbs {

/// Empirical counts of outcomes. Merging is associative, so partial
/// histograms built concurrently can be combined in any order.
class Histogram {
 public:
  void add(const ModeMultiset& z, std::uint64_t times = 1);
  void merge(const Histogram& other);

  std::uint64_t count(const ModeMultiset& z) const;
  std::uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }
  const std::map<ModeMultiset, std::uint64_t>& counts() const noexcept { return counts_; }

  static Histogram from_samples(std::span<const SampleRecord> samples);

 private:
  std::map<ModeMultiset, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

enum class Verdict { pass, fail };
std::string_view to_string(Verdict v);

struct TestReport {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
  double tvd = 0.0;
  /// Significance level the verdict was taken at.
  double alpha = 0.001;
  Verdict verdict = Verdict::pass;
};

inline constexpr double kDefaultMinExpected = 5.0;
inline constexpr double kDefaultAlpha = 0.001;

/// P(X > statistic) for X ~ chi-square with `dof` degrees of freedom, via the
/// regularized upper incomplete gamma function Q(dof/2, statistic/2).
double chi_square_survival(double statistic, double dof);

/// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double gamma_q(double a, double x);

/// Half the L1 distance between the exact pmf and the empirical frequencies.
/// Throws InputError if the histogram holds an outcome not in the table or
/// is empty.
double tvd(const OutcomeTable& exact, const Histogram& emp);

/// Half the L1 distance between two empirical distributions.
double tvd(const Histogram& a, const Histogram& b);

/// Pearson goodness-of-fit against the exact table. Cells are sorted by
/// expected count and pooled until each pooled cell expects at least
/// `min_expected`; dof = pooled cells - 1.
TestReport chisq_exact(const OutcomeTable& exact, const Histogram& emp,
                       double min_expected = kDefaultMinExpected, double alpha = kDefaultAlpha);

/// Two-sample homogeneity test on the 2 x K contingency table of outcome
/// counts, pooling cells the same way.
TestReport chisq_two_sample(const Histogram& h1, const Histogram& h2,
                            double min_expected = kDefaultMinExpected,
                            double alpha = kDefaultAlpha);

struct CollisionAudit {
  std::uint64_t samples = 0;
  std::uint64_t duplicates = 0;
  double frequency = 0.0;
  /// Binomial standard error of the frequency at the clamped bound.
  double sigma = 0.0;
  CollisionBound bound;
  double haar_reference = 0.0;
  /// frequency exceeds bound.clamped by more than 3 sigma.
  bool violation = false;
};

CollisionAudit collision_audit(std::span<const ModeMultiset> samples, const ComplexMatrix& a);
CollisionAudit collision_audit(std::span<const SampleRecord> samples, const ComplexMatrix& a);

}  // namespace exactbs
