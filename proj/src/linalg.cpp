#include "exactbs/linalg.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/QR>

#include "exactbs/rng.hpp"

namespace exactbs {

IndexList iota_indices(int count) {
  IndexList out(count);
  std::iota(out.begin(), out.end(), 1);
  return out;
}

ComplexMatrix make_matrix(Eigen::Index rows, Eigen::Index cols, std::span<const Complex> data) {
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size())
    throw InputError("matrix data length " + std::to_string(data.size()) + " does not match " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  ComplexMatrix a(rows, cols);
  std::copy(data.begin(), data.end(), a.data());
  require_finite(a);
  return a;
}

void require_finite(const ComplexMatrix& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Complex& x = a.data()[i];
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw InputError("matrix entry " + std::to_string(i) + " is not finite");
  }
}

void check_indices(std::span<const int> indices, Eigen::Index extent, bool allow_repeats,
                   const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(extent), false);
  for (int idx : indices) {
    if (idx < 1 || idx > extent)
      throw InputError(std::string(what) + " index " + std::to_string(idx) + " outside [1, " +
                       std::to_string(extent) + "]");
    if (!allow_repeats) {
      if (seen[idx - 1])
        throw InputError(std::string("duplicate ") + what + " index " + std::to_string(idx));
      seen[idx - 1] = true;
    }
  }
}

ComplexMatrix haar_unitary(int m, std::uint64_t seed) {
  if (m < 1) throw InputError("haar_unitary needs m >= 1");
  Rng rng(seed);
  ComplexMatrix g(m, m);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    g.data()[i] = Complex(re, im);
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  // Q * diag(R_jj / |R_jj|) is the unique Q' of G = Q'R' with diag(R') > 0.
  for (int j = 0; j < m; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

ComplexMatrix input_matrix(const ComplexMatrix& u, int n) {
  if (n < 0 || n > u.cols())
    throw InputError("cannot take " + std::to_string(n) + " columns of a " +
                     std::to_string(u.rows()) + "x" + std::to_string(u.cols()) + " matrix");
  return u.leftCols(n);
}

double orthonormality_deviation(const ComplexMatrix& a) {
  if (a.cols() == 0) return 0.0;
  const ComplexMatrix gram = a.adjoint() * a;
  return (gram - ComplexMatrix::Identity(a.cols(), a.cols())).cwiseAbs().maxCoeff();
}

}  // namespace exactbs
