#include "exactbs/distribution.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <string>

#include "exactbs/linalg.hpp"
#include "exactbs/permanent.hpp"

namespace exactbs {

namespace {

std::atomic<std::uint64_t> g_clamped{0};

double clamp_probability(double p) {
  if (p < 0.0) {
    g_clamped.fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  return p;
}

// n! / (n-k)! as a double.
double falling_factorial(int n, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= static_cast<double>(n - i);
  return out;
}

void require_rows_match(std::span<const int> r, const ComplexMatrix& a, const char* who) {
  if (static_cast<Eigen::Index>(r.size()) != a.cols())
    throw InputError(std::string(who) + ": outcome has " + std::to_string(r.size()) +
                     " modes but the matrix has " + std::to_string(a.cols()) + " columns");
}

}  // namespace

ModeMultiset ModeMultiset::from_sorted(std::vector<int> modes, int m) {
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] < 1 || modes[i] > m)
      throw InputError("mode " + std::to_string(modes[i]) + " outside [1, " + std::to_string(m) +
                       "]");
    if (i > 0 && modes[i] < modes[i - 1]) throw InputError("multiset is not non-decreasing");
  }
  return ModeMultiset(std::move(modes));
}

ModeMultiset ModeMultiset::from_array(std::span<const int> modes, int m) {
  std::vector<int> sorted(modes.begin(), modes.end());
  std::sort(sorted.begin(), sorted.end());
  return from_sorted(std::move(sorted), m);
}

bool ModeMultiset::has_collision() const noexcept {
  return std::adjacent_find(modes_.begin(), modes_.end()) != modes_.end();
}

std::uint64_t mu(const ModeMultiset& z) {
  std::uint64_t out = 1;
  std::uint64_t run = 0;
  const auto modes = z.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    run = (i > 0 && modes[i] == modes[i - 1]) ? run + 1 : 1;
    if (out > std::numeric_limits<std::uint64_t>::max() / run)
      throw InputError("mu overflows 64 bits");
    out *= run;
  }
  return out;
}

double prob_q(const ModeMultiset& z, const ComplexMatrix& a) {
  require_rows_match(z.modes(), a, "prob_q");
  const ComplexMatrix az = submatrix(a, z.modes(), iota_indices(static_cast<int>(a.cols())));
  double multiplicity = 1.0;
  double run = 0.0;
  const auto modes = z.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    run = (i > 0 && modes[i] == modes[i - 1]) ? run + 1.0 : 1.0;
    multiplicity *= run;
  }
  return clamp_probability(std::norm(permanent_glynn(az)) / multiplicity);
}

double prob_p(std::span<const int> r, const ComplexMatrix& a) {
  require_rows_match(r, a, "prob_p");
  const int n = static_cast<int>(a.cols());
  const ComplexMatrix ar = submatrix(a, r, iota_indices(n));
  return clamp_probability(std::norm(permanent_glynn(ar)) / falling_factorial(n, n));
}

double marginal_p(std::span<const int> prefix, const ComplexMatrix& a) {
  const int n = static_cast<int>(a.cols());
  const int k = static_cast<int>(prefix.size());
  if (k < 1 || k > n)
    throw InputError("marginal_p: prefix length " + std::to_string(k) + " outside [1, " +
                     std::to_string(n) + "]");
  check_indices(prefix, a.rows(), true, "row");
  double sum = 0.0;
  for_each_combination(n, k, [&](std::span<const int> cols) {
    sum += std::norm(permanent_glynn(submatrix(a, prefix, cols)));
  });
  return clamp_probability(sum / falling_factorial(n, k));
}

void for_each_combination(int n, int k, const std::function<void(std::span<const int>)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i + 1;
  for (;;) {
    fn(c);
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i + 1) --i;
    if (i < 0) return;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

std::uint64_t multichoose(int m, int n) {
  if (m < 1 || n < 0) return n == 0 ? 1 : 0;
  // C(m+n-1, n) = prod_{i=1..n} (m-1+i)/i; each partial product is an integer.
  unsigned __int128 out = 1;
  const auto limit = static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max());
  const int r = std::min(n, m - 1);
  for (int i = 1; i <= r; ++i) {
    out = out * static_cast<unsigned __int128>(m + n - r + i - 1) / static_cast<unsigned>(i);
    if (out > limit) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(out);
}

MultisetStream::MultisetStream(int m, int n)
    : m_(m), n_(n), cardinality_(multichoose(m, n)), z_(static_cast<std::size_t>(n), 1) {
  if (m < 1 || n < 0) throw InputError("enumerate_phi: need m >= 1 and n >= 0");
  current_ = ModeMultiset::from_sorted(z_, m_);
}

bool MultisetStream::advance() {
  int i = n_ - 1;
  while (i >= 0 && z_[i] == m_) --i;
  if (i < 0) return false;
  const int v = z_[i] + 1;
  for (int j = i; j < n_; ++j) z_[j] = v;
  current_ = ModeMultiset::from_sorted(z_, m_);
  return true;
}

MultisetStream enumerate_phi(int m, int n, std::uint64_t cap) {
  const std::uint64_t size = multichoose(m, n);
  if (size > cap)
    throw GuardError("enumeration of " + std::to_string(size) + " outcomes (m=" +
                     std::to_string(m) + ", n=" + std::to_string(n) + ") exceeds cap " +
                     std::to_string(cap));
  return MultisetStream(m, n);
}

double OutcomeTable::total() const {
  double sum = 0.0;
  for (const auto& o : outcomes) sum += o.probability;
  return sum;
}

std::ptrdiff_t OutcomeTable::find(const ModeMultiset& z) const {
  const auto it = std::lower_bound(outcomes.begin(), outcomes.end(), z,
                                   [](const Outcome& o, const ModeMultiset& key) { return o.z < key; });
  if (it == outcomes.end() || it->z != z) return -1;
  return it - outcomes.begin();
}

OutcomeTable exact_table(const ComplexMatrix& a, std::uint64_t cap) {
  OutcomeTable table;
  table.m = static_cast<int>(a.rows());
  table.n = static_cast<int>(a.cols());
  auto stream = enumerate_phi(table.m, table.n, cap);
  table.outcomes.reserve(stream.cardinality());
  for (const ModeMultiset& z : stream) table.outcomes.push_back({z, prob_q(z, a)});
  return table;
}

CollisionBound collision_bound(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    // sum_{k<l} x_k x_l = ((sum x)^2 - sum x^2) / 2 would cancel; pair directly.
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      const double xk = std::norm(a(i, k));
      for (Eigen::Index l = k + 1; l < a.cols(); ++l) sum += xk * std::norm(a(i, l));
    }
  }
  CollisionBound out;
  out.raw = 2.0 * sum;
  out.clamped = std::clamp(out.raw, 0.0, 1.0);
  return out;
}

double haar_collision_reference(int m, int n) {
  return static_cast<double>(n) * (n - 1) / (m + 1.0);
}

std::uint64_t clamped_probability_count() noexcept { return g_clamped.load(); }

}  // namespace exactbs
