#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "exactbs/types.hpp"

namespace exactbs {

/// Ordered 1-based positions into a matrix dimension. Row selectors may
/// repeat; column selectors must not.
using IndexList = std::vector<int>;

/// 1..count.
IndexList iota_indices(int count);

/// Builds a rows x cols matrix from row-major data, rejecting NaN/Inf.
ComplexMatrix make_matrix(Eigen::Index rows, Eigen::Index cols, std::span<const Complex> data);

/// Throws InputError if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& a);

/// Validates a 1-based selector against a dimension of size `extent`.
void check_indices(std::span<const int> indices, Eigen::Index extent, bool allow_repeats,
                   const char* what);

/// Copy of A(rows[i], cols[j]) with 1-based selectors.
template <typename Derived>
MatrixT<typename Derived::Scalar::value_type> submatrix(const Eigen::MatrixBase<Derived>& a,
                                                        std::span<const int> rows,
                                                        std::span<const int> cols) {
  check_indices(rows, a.rows(), true, "row");
  check_indices(cols, a.cols(), false, "column");
  MatrixT<typename Derived::Scalar::value_type> out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i] - 1, cols[j] - 1);
  return out;
}

/// m x m unitary drawn from the Haar measure (Ginibre matrix + QR with the
/// diagonal phase of R moved into Q). Pure given (m, seed).
ComplexMatrix haar_unitary(int m, std::uint64_t seed);

/// First n columns of U.
ComplexMatrix input_matrix(const ComplexMatrix& u, int n);

/// max |(A^H A - I)_ij|.
double orthonormality_deviation(const ComplexMatrix& a);

/// Inputs whose columns deviate from orthonormality by more than this are
/// accepted but flagged.
inline constexpr double kOrthonormalityWarnThreshold = 1e-8;

}  // namespace exactbs
