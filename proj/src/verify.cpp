#include "exactbs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace exactbs {

void Histogram::add(const ModeMultiset& z, std::uint64_t times) {
  if (times == 0) return;
  counts_[z] += times;
  total_ += times;
}

void Histogram::merge(const Histogram& other) {
  for (const auto& [z, c] : other.counts_) add(z, c);
}

std::uint64_t Histogram::count(const ModeMultiset& z) const {
  const auto it = counts_.find(z);
  return it == counts_.end() ? 0 : it->second;
}

Histogram Histogram::from_samples(std::span<const SampleRecord> samples) {
  Histogram h;
  for (const auto& s : samples) h.add(s.z);
  return h;
}

std::string_view to_string(Verdict v) { return v == Verdict::pass ? "pass" : "fail"; }

namespace {

// Series expansion of the lower regularized gamma P(a, x); converges for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz); converges for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_against_table(const OutcomeTable& exact, const Histogram& emp) {
  if (emp.empty()) throw InputError("histogram is empty");
  for (const auto& [z, c] : emp.counts()) {
    if (z.size() != exact.n || exact.find(z) < 0)
      throw InputError("histogram outcome does not belong to Phi_{" + std::to_string(exact.m) +
                       "," + std::to_string(exact.n) + "}");
  }
}

struct Cell {
  double weight;  // expected count, or combined count for two-sample pooling
  std::size_t index;
};

// Groups cells (sorted ascending by weight) into bins of at least `floor`
// weight. A trailing bin below the floor is folded into its predecessor.
std::vector<std::vector<std::size_t>> pool_cells(std::vector<Cell> cells, double floor) {
  std::stable_sort(cells.begin(), cells.end(),
                   [](const Cell& x, const Cell& y) { return x.weight < y.weight; });
  std::vector<std::vector<std::size_t>> bins;
  std::vector<std::size_t> open;
  double open_weight = 0.0;
  for (const Cell& c : cells) {
    open.push_back(c.index);
    open_weight += c.weight;
    if (open_weight >= floor) {
      bins.push_back(std::move(open));
      open.clear();
      open_weight = 0.0;
    }
  }
  if (!open.empty()) {
    if (bins.empty())
      bins.push_back(std::move(open));
    else
      bins.back().insert(bins.back().end(), open.begin(), open.end());
  }
  return bins;
}

TestReport finish_report(double statistic, std::size_t bins, double tvd_value, double alpha) {
  if (bins < 2)
    throw InputError("chi-square test needs at least 2 pooled cells, got " + std::to_string(bins));
  TestReport report;
  report.statistic = statistic;
  report.dof = static_cast<int>(bins) - 1;
  report.p_value = chi_square_survival(statistic, report.dof);
  report.tvd = tvd_value;
  report.alpha = alpha;
  report.verdict = report.p_value >= alpha ? Verdict::pass : Verdict::fail;
  return report;
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw InputError("gamma_q: need a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_fraction(a, x), 0.0, 1.0);
}

double chi_square_survival(double statistic, double dof) {
  if (!(dof > 0.0)) throw InputError("chi-square needs dof > 0");
  if (statistic <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * statistic);
}

double tvd(const OutcomeTable& exact, const Histogram& emp) {
  check_against_table(exact, emp);
  const double total = static_cast<double>(emp.total());
  double sum = 0.0;
  for (const auto& o : exact.outcomes) sum += std::abs(o.probability - emp.count(o.z) / total);
  return std::min(1.0, 0.5 * sum);
}

double tvd(const Histogram& a, const Histogram& b) {
  if (a.empty() || b.empty()) throw InputError("histogram is empty");
  const double ta = static_cast<double>(a.total());
  const double tb = static_cast<double>(b.total());
  double sum = 0.0;
  for (const auto& [z, c] : a.counts()) sum += std::abs(c / ta - b.count(z) / tb);
  for (const auto& [z, c] : b.counts())
    if (a.count(z) == 0) sum += c / tb;
  return std::min(1.0, 0.5 * sum);
}

TestReport chisq_exact(const OutcomeTable& exact, const Histogram& emp, double min_expected,
                       double alpha) {
  if (!(min_expected > 0.0)) throw InputError("min_expected must be positive");
  check_against_table(exact, emp);
  const double total = static_cast<double>(emp.total());
  std::vector<Cell> cells;
  cells.reserve(exact.outcomes.size());
  for (std::size_t i = 0; i < exact.outcomes.size(); ++i)
    cells.push_back({exact.outcomes[i].probability * total, i});
  const auto bins = pool_cells(std::move(cells), min_expected);

  double statistic = 0.0;
  for (const auto& bin : bins) {
    double expected = 0.0;
    double observed = 0.0;
    for (std::size_t i : bin) {
      expected += exact.outcomes[i].probability * total;
      observed += static_cast<double>(emp.count(exact.outcomes[i].z));
    }
    if (expected > 0.0)
      statistic += (observed - expected) * (observed - expected) / expected;
    else if (observed > 0.0)
      statistic = std::numeric_limits<double>::infinity();
  }
  return finish_report(statistic, bins.size(), tvd(exact, emp), alpha);
}

TestReport chisq_two_sample(const Histogram& h1, const Histogram& h2, double min_expected,
                            double alpha) {
  if (!(min_expected > 0.0)) throw InputError("min_expected must be positive");
  if (h1.empty() || h2.empty()) throw InputError("histogram is empty");

  std::vector<ModeMultiset> keys;
  for (const auto& [z, c] : h1.counts()) keys.push_back(z);
  for (const auto& [z, c] : h2.counts())
    if (h1.count(z) == 0) keys.push_back(z);

  const double n1 = static_cast<double>(h1.total());
  const double n2 = static_cast<double>(h2.total());
  const double n = n1 + n2;
  // A cell's smaller expected count is combined * min(n1, n2) / n.
  const double floor = min_expected * n / std::min(n1, n2);
  std::vector<Cell> cells;
  cells.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    cells.push_back({static_cast<double>(h1.count(keys[i]) + h2.count(keys[i])), i});
  const auto bins = pool_cells(std::move(cells), floor);

  double statistic = 0.0;
  for (const auto& bin : bins) {
    double o1 = 0.0;
    double o2 = 0.0;
    for (std::size_t i : bin) {
      o1 += static_cast<double>(h1.count(keys[i]));
      o2 += static_cast<double>(h2.count(keys[i]));
    }
    const double combined = o1 + o2;
    const double e1 = combined * n1 / n;
    const double e2 = combined * n2 / n;
    statistic += (o1 - e1) * (o1 - e1) / e1 + (o2 - e2) * (o2 - e2) / e2;
  }
  return finish_report(statistic, bins.size(), tvd(h1, h2), alpha);
}

CollisionAudit collision_audit(std::span<const ModeMultiset> samples, const ComplexMatrix& a) {
  if (samples.empty()) throw InputError("collision audit needs at least one sample");
  CollisionAudit audit;
  audit.samples = samples.size();
  for (const auto& z : samples) {
    if (z.size() != a.cols())
      throw InputError("sample size does not match the matrix column count");
    if (z.has_collision()) ++audit.duplicates;
  }
  const double count = static_cast<double>(audit.samples);
  audit.frequency = audit.duplicates / count;
  audit.bound = collision_bound(a);
  audit.haar_reference =
      haar_collision_reference(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  const double b = audit.bound.clamped;
  audit.sigma = std::sqrt(b * (1.0 - b) / count);
  audit.violation = audit.frequency > b + 3.0 * audit.sigma;
  return audit;
}

CollisionAudit collision_audit(std::span<const SampleRecord> samples, const ComplexMatrix& a) {
  std::vector<ModeMultiset> zs;
  zs.reserve(samples.size());
  for (const auto& s : samples) zs.push_back(s.z);
  return collision_audit(std::span<const ModeMultiset>(zs), a);
}

}  // namespace exactbs
