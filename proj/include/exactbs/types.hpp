#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace exactbs {

template <typename Real>
using ComplexT = std::complex<Real>;

/// Dense complex matrix, row-major. Kernels are templated on the real type;
/// the public pipeline runs in double.
template <typename Real>
using MatrixT = Eigen::Matrix<ComplexT<Real>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Real>
using VectorT = Eigen::Matrix<ComplexT<Real>, Eigen::Dynamic, 1>;

using Complex = ComplexT<double>;
using ComplexMatrix = MatrixT<double>;
using ComplexVector = VectorT<double>;

/// Malformed arguments: bad shapes, out-of-range indices, unparsable files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A cost guard refused the request (enumeration cap, 3^n guard, bit width).
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sampling stage produced an unusable weight vector.
class SamplerError : public std::runtime_error {
 public:
  SamplerError(const std::string& what, int stage)
      : std::runtime_error(what), stage_(stage) {}
  /// 1-based stage index, 0 when not tied to a stage.
  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

}  // namespace exactbs
