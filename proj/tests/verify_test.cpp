#include "exactbs/verify.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "exactbs/linalg.hpp"
#include "test_support.hpp"

namespace exactbs {
namespace {

using testing::load_fixture;

ModeMultiset ms(std::vector<int> z, int m) { return ModeMultiset::from_sorted(std::move(z), m); }

OutcomeTable fixture_table() { return exact_table(load_fixture("haar_5x3.json")); }

Histogram draw_from(const OutcomeTable& table, std::size_t count, std::uint64_t seed) {
  std::vector<double> w;
  for (const Outcome& o : table.outcomes) w.push_back(o.probability);
  Rng rng(seed);
  Histogram h;
  for (std::size_t i = 0; i < count; ++i) h.add(table.outcomes[draw_weighted(w, rng) - 1].z);
  return h;
}

// Expected counts N * p rounded to the nearest integer.
Histogram proportional(const OutcomeTable& table, double count) {
  Histogram h;
  for (const Outcome& o : table.outcomes) {
    const auto c = static_cast<std::uint64_t>(std::llround(o.probability * count));
    if (c > 0) h.add(o.z, c);
  }
  return h;
}

// Survival values frozen from scipy.stats.chi2.sf.
TEST(ChiSquareSurvival, ReferenceValues) {
  EXPECT_NEAR(chi_square_survival(3.841458820694124, 1), 0.05, 1e-4);
  EXPECT_NEAR(chi_square_survival(10, 5), 0.07523524614651217, 1e-12);
  EXPECT_NEAR(chi_square_survival(0.5, 3), 0.9188914116546758, 1e-12);
  EXPECT_NEAR(chi_square_survival(100, 80), 0.064570368921133, 1e-12);
  EXPECT_NEAR(chi_square_survival(1e-3, 2), 0.9995001249791693, 1e-12);
  EXPECT_NEAR(chi_square_survival(30, 4) / 4.894437128029217e-06, 1.0, 1e-9);
  EXPECT_NEAR(chi_square_survival(250, 200), 0.009379131668826098, 1e-11);
  EXPECT_NEAR(chi_square_survival(1e4, 9000) / 3.031801838549065e-13, 1.0, 1e-7);
  EXPECT_EQ(chi_square_survival(0, 3), 1.0);
  EXPECT_THROW(chi_square_survival(1, 0), InputError);
}

TEST(GammaQ, ReferenceValues) {
  EXPECT_NEAR(gamma_q(0.5, 0.1), 0.6547208460185768, 1e-12);
  EXPECT_NEAR(gamma_q(3, 2.5), 0.5438131158833297, 1e-12);
  EXPECT_NEAR(gamma_q(10, 20), 0.0049954123083075785, 1e-13);
  EXPECT_EQ(gamma_q(2.5, 0.0), 1.0);
  EXPECT_THROW(gamma_q(0.0, 1.0), InputError);
}

TEST(Histogram, CountsAndMerge) {
  Histogram a, b;
  a.add(ms({1, 2}, 3));
  a.add(ms({1, 2}, 3), 4);
  b.add(ms({3, 3}, 3), 2);
  b.add(ms({1, 2}, 3));
  a.merge(b);
  EXPECT_EQ(a.total(), 8u);
  EXPECT_EQ(a.count(ms({1, 2}, 3)), 6u);
  EXPECT_EQ(a.count(ms({3, 3}, 3)), 2u);
  EXPECT_EQ(a.count(ms({1, 1}, 3)), 0u);
  EXPECT_TRUE(Histogram().empty());
}

TEST(Tvd, ProportionalHistogramIsNearZero) {
  const OutcomeTable table = fixture_table();
  EXPECT_LE(tvd(table, proportional(table, 1e9)), 1e-7);
}

TEST(Tvd, PointMass) {
  const OutcomeTable table = fixture_table();
  const Outcome& o = table.outcomes[7];
  Histogram h;
  h.add(o.z, 10);
  EXPECT_NEAR(tvd(table, h), 1.0 - o.probability, 1e-14);
}

TEST(Tvd, Errors) {
  const OutcomeTable table = fixture_table();
  EXPECT_THROW(tvd(table, Histogram()), InputError);
  Histogram foreign;
  foreign.add(ms({1, 2}, 5));
  EXPECT_THROW(tvd(table, foreign), InputError);
}

TEST(Tvd, BetweenHistograms) {
  Histogram a, b;
  a.add(ms({1}, 2), 3);
  a.add(ms({2}, 2), 1);
  b.add(ms({2}, 2), 2);
  EXPECT_NEAR(tvd(a, b), 0.75, 1e-15);
  EXPECT_EQ(tvd(a, a), 0.0);
}

TEST(ChisqExact, PoolingKeepsBinsAboveFloor) {
  const OutcomeTable table = fixture_table();
  const Histogram h = draw_from(table, 200, 1);
  const TestReport r = chisq_exact(table, h, 5.0);
  EXPECT_GE(r.dof, 1);
  EXPECT_LT(r.dof, 34);
  EXPECT_GE(r.statistic, 0.0);

  const TestReport unpooled = chisq_exact(table, draw_from(table, 1000000, 2), 1e-9);
  EXPECT_EQ(unpooled.dof, 34);
}

TEST(ChisqExact, ExactCountsGiveZeroStatistic) {
  const OutcomeTable table = fixture_table();
  // Fractions with a common denominator make exact integer expected counts.
  OutcomeTable dyadic{5, 3, {}};
  for (std::size_t i = 0; i < 4; ++i) dyadic.outcomes.push_back({table.outcomes[i].z, 0.25});
  Histogram h;
  for (const Outcome& o : dyadic.outcomes) h.add(o.z, 100);
  const TestReport r = chisq_exact(dyadic, h);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.dof, 3);
  EXPECT_EQ(r.verdict, Verdict::pass);
}

TEST(ChisqExact, TooFewCellsThrows) {
  const OutcomeTable table = fixture_table();
  Histogram h;
  h.add(table.outcomes[0].z, 3);
  EXPECT_THROW(chisq_exact(table, h), InputError);
  EXPECT_THROW(chisq_exact(table, h, 0.0), InputError);
}

TEST(ChisqExact, CalibratedUnderNull) {
  const OutcomeTable table = fixture_table();
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    rejections += chisq_exact(table, draw_from(table, 20000, 100 + seed), 5.0, 0.01).verdict ==
                  Verdict::fail;
  EXPECT_LE(rejections / 50.0, 0.06);
}

TEST(ChisqExact, DetectsDoubledOutcome) {
  OutcomeTable table = fixture_table();
  OutcomeTable skewed = table;
  auto biggest = std::max_element(skewed.outcomes.begin(), skewed.outcomes.end(),
                                  [](const Outcome& x, const Outcome& y) { return x.probability < y.probability; });
  biggest->probability *= 2.0;
  const double total = skewed.total();
  for (Outcome& o : skewed.outcomes) o.probability /= total;
  const TestReport r = chisq_exact(table, draw_from(skewed, 20000, 3));
  EXPECT_LT(r.p_value, 1e-6);
  EXPECT_EQ(r.verdict, Verdict::fail);
}

TEST(ChisqTwoSample, IdenticalHistograms) {
  const OutcomeTable table = fixture_table();
  const Histogram h = draw_from(table, 5000, 4);
  const TestReport r = chisq_two_sample(h, h);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.tvd, 0.0);
}

TEST(ChisqTwoSample, SameAndDifferentSources) {
  const OutcomeTable table = fixture_table();
  EXPECT_GT(chisq_two_sample(draw_from(table, 20000, 5), draw_from(table, 30000, 6)).p_value, 0.001);
  const OutcomeTable other = exact_table(input_matrix(haar_unitary(5, 77), 3));
  EXPECT_LT(chisq_two_sample(draw_from(table, 20000, 7), draw_from(other, 20000, 8)).p_value, 1e-6);
  EXPECT_THROW(chisq_two_sample(Histogram(), draw_from(table, 10, 9)), InputError);
}

TEST(CollisionAudit, SinglePhoton) {
  const ComplexMatrix a = input_matrix(haar_unitary(5, 1), 1);
  const std::vector<ModeMultiset> zs{ms({2}, 5), ms({4}, 5)};
  const CollisionAudit audit = collision_audit(zs, a);
  EXPECT_EQ(audit.duplicates, 0u);
  EXPECT_EQ(audit.bound.raw, 0.0);
  EXPECT_EQ(audit.sigma, 0.0);
  EXPECT_FALSE(audit.violation);
}

TEST(CollisionAudit, HaarInput) {
  const ComplexMatrix a = input_matrix(haar_unitary(20, 2), 4);
  const auto samples = sample_B_batch(a, 20000, 10, {AlphaMode::uniform, 4, 0});
  const CollisionAudit audit = collision_audit(samples, a);
  EXPECT_EQ(audit.samples, 20000u);
  EXPECT_FALSE(audit.violation);
  EXPECT_GT(audit.duplicates, 0u);
  EXPECT_NEAR(audit.haar_reference, 12.0 / 21.0, 1e-15);
}

TEST(CollisionAudit, Violation) {
  const ComplexMatrix a = input_matrix(haar_unitary(50, 3), 2);
  std::vector<ModeMultiset> zs(100, ms({7, 7}, 50));
  EXPECT_TRUE(collision_audit(zs, a).violation);
}

TEST(CollisionAudit, Errors) {
  const ComplexMatrix a = input_matrix(haar_unitary(5, 1), 2);
  EXPECT_THROW(collision_audit(std::vector<ModeMultiset>{}, a), InputError);
  EXPECT_THROW(collision_audit(std::vector<ModeMultiset>{ms({1}, 5)}, a), InputError);
}

}  // namespace
}  // namespace exactbs
