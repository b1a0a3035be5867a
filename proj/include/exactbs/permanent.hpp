#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "exactbs/types.hpp"

namespace exactbs {

/// Largest order handled by the Gray-coded kernels: the sign-vector counter
/// is a single 64-bit word.
inline constexpr int kMaxGrayOrder = 64;

/// Largest order accepted by the permutation-enumeration oracle.
inline constexpr int kMaxNaiveOrder = 10;

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& b, const char* who) {
  if (b.rows() != b.cols())
    throw InputError(std::string(who) + ": matrix is " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ", expected square");
}

}  // namespace detail

/// Walk over sign vectors delta in {-1,+1}^L with delta_1 = +1 in binary
/// reflected Gray code order, maintaining the column sums
/// v_j(delta) = sum_i delta_i * b_ij over the first L rows of b.
///
/// Step t flips component ctz(t) + 1 (0-based), so exactly one sign changes
/// per step and each update costs one pass over the columns. Column sums are
/// stored as separate real and imaginary arrays.
template <typename Real>
class GrayState {
 public:
  using Complex = ComplexT<Real>;

  template <typename Derived>
  GrayState(const Eigen::MatrixBase<Derived>& b, Eigen::Index leading_rows)
      : rows_(leading_rows),
        cols_(b.cols()),
        twice_re_(static_cast<std::size_t>(leading_rows * b.cols())),
        twice_im_(twice_re_.size()),
        sum_re_(static_cast<std::size_t>(b.cols()), Real(0)),
        sum_im_(sum_re_.size(), Real(0)),
        delta_(static_cast<std::size_t>(leading_rows), 1) {
    if (leading_rows < 1 || leading_rows > kMaxGrayOrder)
      throw GuardError("Gray sweep needs 1..64 rows, got " + std::to_string(leading_rows));
    for (Eigen::Index i = 0; i < rows_; ++i)
      for (Eigen::Index j = 0; j < cols_; ++j) {
        const Complex x = b(i, j);
        sum_re_[j] += x.real();
        sum_im_[j] += x.imag();
        twice_re_[i * cols_ + j] = Real(2) * x.real();
        twice_im_[i * cols_ + j] = Real(2) * x.imag();
      }
    steps_ = rows_ == kMaxGrayOrder ? (std::uint64_t{1} << 63) : (std::uint64_t{1} << (rows_ - 1));
  }

  /// Number of sign vectors visited, 2^(L-1).
  std::uint64_t steps() const noexcept { return steps_; }
  std::uint64_t step() const noexcept { return step_; }
  bool done() const noexcept { return step_ + 1 >= steps_; }

  /// prod_i delta_i.
  int sign() const noexcept { return sign_; }
  std::span<const signed char> delta() const noexcept { return delta_; }
  Eigen::Index columns() const noexcept { return cols_; }
  Complex colsum(Eigen::Index j) const noexcept { return {sum_re_[j], sum_im_[j]}; }
  const Real* colsums_re() const noexcept { return sum_re_.data(); }
  const Real* colsums_im() const noexcept { return sum_im_.data(); }

  /// Moves to the next sign vector. Precondition: !done().
  void advance() noexcept {
    ++step_;
    const auto flip = static_cast<Eigen::Index>(std::countr_zero(step_)) + 1;
    delta_[flip] = static_cast<signed char>(-delta_[flip]);
    sign_ = -sign_;
    const Real* row_re = twice_re_.data() + flip * cols_;
    const Real* row_im = twice_im_.data() + flip * cols_;
    Real* re = sum_re_.data();
    Real* im = sum_im_.data();
    if (delta_[flip] > 0) {
      for (Eigen::Index j = 0; j < cols_; ++j) {
        re[j] += row_re[j];
        im[j] += row_im[j];
      }
    } else {
      for (Eigen::Index j = 0; j < cols_; ++j) {
        re[j] -= row_re[j];
        im[j] -= row_im[j];
      }
    }
  }

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  std::vector<Real> twice_re_;
  std::vector<Real> twice_im_;
  std::vector<Real> sum_re_;
  std::vector<Real> sum_im_;
  std::vector<signed char> delta_;
  std::uint64_t steps_ = 1;
  std::uint64_t step_ = 0;
  int sign_ = 1;
};

/// Permanent by Glynn's signed column-sum formula, O(k 2^k) with Gray-code
/// updates. The empty matrix has permanent 1.
template <typename Derived>
typename Derived::Scalar permanent_glynn(const Eigen::MatrixBase<Derived>& b) {
  using Complex = typename Derived::Scalar;
  using Real = typename Complex::value_type;
  detail::require_square(b, "permanent_glynn");
  const Eigen::Index k = b.rows();
  if (k == 0) return Complex(1);
  if (k == 1) return b(0, 0);
  if (k > kMaxGrayOrder) throw GuardError("permanent_glynn: order exceeds 64");

  GrayState<Real> gray(b, k);
  const Real* vr = gray.colsums_re();
  const Real* vi = gray.colsums_im();
  Real total_re = 0;
  Real total_im = 0;
  for (;;) {
    Real p_re = vr[0];
    Real p_im = vi[0];
    for (Eigen::Index j = 1; j < k; ++j) {
      const Real t = p_re * vr[j] - p_im * vi[j];
      p_im = p_re * vi[j] + p_im * vr[j];
      p_re = t;
    }
    if (gray.sign() > 0) {
      total_re += p_re;
      total_im += p_im;
    } else {
      total_re -= p_re;
      total_im -= p_im;
    }
    if (gray.done()) break;
    gray.advance();
  }
  return Complex(total_re, total_im) * std::ldexp(Real(1), -static_cast<int>(k - 1));
}

/// Permanent by explicit enumeration of all k! permutations. Test oracle;
/// refuses k > 10.
template <typename Derived>
typename Derived::Scalar permanent_naive(const Eigen::MatrixBase<Derived>& b) {
  using Complex = typename Derived::Scalar;
  detail::require_square(b, "permanent_naive");
  const Eigen::Index k = b.rows();
  if (k > kMaxNaiveOrder)
    throw GuardError("permanent_naive: order " + std::to_string(k) + " exceeds oracle limit 10");
  std::vector<Eigen::Index> sigma(static_cast<std::size_t>(k));
  std::iota(sigma.begin(), sigma.end(), Eigen::Index{0});
  Complex total(0);
  do {
    Complex term(1);
    for (Eigen::Index i = 0; i < k; ++i) term *= b(i, sigma[i]);
    total += term;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

/// Permanents of all k minors obtained by deleting the last row and one
/// column of a k x k matrix, given only its leading (k-1) x k block `top`.
///
/// One Gray sweep over the k-1 sign components; at each step the products
/// over all columns but one come from forward and backward cumulative
/// products of the column sums, so the whole set costs O(k 2^k).
template <typename Derived>
VectorT<typename Derived::Scalar::value_type> minors_from_leading_rows(
    const Eigen::MatrixBase<Derived>& top) {
  using Complex = typename Derived::Scalar;
  using Real = typename Complex::value_type;
  const Eigen::Index k = top.cols();
  if (k < 2 || top.rows() != k - 1)
    throw InputError("minors: expected a (k-1) x k block with k >= 2, got " +
                     std::to_string(top.rows()) + "x" + std::to_string(k));
  if (k - 1 > kMaxGrayOrder) throw GuardError("minors: order exceeds 64");

  GrayState<Real> gray(top, k - 1);
  const Real* vr = gray.colsums_re();
  const Real* vi = gray.colsums_im();
  const auto len = static_cast<std::size_t>(k);
  std::vector<Real> fwd_re(len), fwd_im(len), bwd_re(len), bwd_im(len);
  std::vector<Real> acc_re(len, Real(0)), acc_im(len, Real(0));
  for (;;) {
    // fwd[l] = sign * prod_{j<l} v_j and bwd[l] = prod_{j>l} v_j, built as
    // two interleaved chains.
    Real f_re = static_cast<Real>(gray.sign());
    Real f_im = 0;
    Real g_re = 1;
    Real g_im = 0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const Eigen::Index q = k - 1 - j;
      fwd_re[j] = f_re;
      fwd_im[j] = f_im;
      bwd_re[q] = g_re;
      bwd_im[q] = g_im;
      Real t = f_re * vr[j] - f_im * vi[j];
      f_im = f_re * vi[j] + f_im * vr[j];
      f_re = t;
      t = g_re * vr[q] - g_im * vi[q];
      g_im = g_re * vi[q] + g_im * vr[q];
      g_re = t;
    }
    for (Eigen::Index l = 0; l < k; ++l) {
      acc_re[l] += fwd_re[l] * bwd_re[l] - fwd_im[l] * bwd_im[l];
      acc_im[l] += fwd_re[l] * bwd_im[l] + fwd_im[l] * bwd_re[l];
    }
    if (gray.done()) break;
    gray.advance();
  }
  VectorT<Real> minors(k);
  const Real scale = std::ldexp(Real(1), -static_cast<int>(k - 2));
  for (Eigen::Index l = 0; l < k; ++l) minors(l) = ComplexT<Real>(acc_re[l], acc_im[l]) * scale;
  return minors;
}

/// minors[l] = Per of B with row k and column l removed. Row k is not read.
template <typename Derived>
VectorT<typename Derived::Scalar::value_type> minors_last_row(const Eigen::MatrixBase<Derived>& b) {
  detail::require_square(b, "minors_last_row");
  if (b.rows() < 2) throw InputError("minors_last_row: needs k >= 2");
  return minors_from_leading_rows(b.topRows(b.rows() - 1));
}

}  // namespace exactbs
