#include "exactbs/linalg.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "test_support.hpp"

namespace exactbs {
namespace {

using testing::load_fixture;
using testing::oracle;

TEST(Submatrix, IdentityWithRepeatedRow) {
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  const IndexList rows{1, 1};
  const IndexList cols{1, 2};
  const ComplexMatrix s = submatrix(id, rows, cols);
  ASSERT_EQ(s.rows(), 2);
  ASSERT_EQ(s.cols(), 2);
  EXPECT_EQ(s(0, 0), Complex(1));
  EXPECT_EQ(s(0, 1), Complex(0));
  EXPECT_EQ(s(1, 0), Complex(1));
  EXPECT_EQ(s(1, 1), Complex(0));
}

TEST(Submatrix, FullSelectionIsIdentity) {
  const ComplexMatrix a = load_fixture("haar_5x3.json");
  EXPECT_EQ(submatrix(a, iota_indices(5), iota_indices(3)), a);
}

TEST(Submatrix, FixtureReadBack) {
  const ComplexMatrix a = load_fixture("haar_5x3.json");
  const IndexList rows{2, 5, 5};
  const IndexList cols{1, 3};
  const ComplexMatrix s = submatrix(a, rows, cols);
  const auto& want = oracle()["haar_5x3_submatrix_r255_c13"];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) {
      EXPECT_EQ(s(i, j).real(), want[i][j][0].get<double>());
      EXPECT_EQ(s(i, j).imag(), want[i][j][1].get<double>());
    }
}

TEST(Submatrix, RejectsBadIndices) {
  const ComplexMatrix a = ComplexMatrix::Identity(3, 3);
  const IndexList ok{1, 2};
  EXPECT_THROW(submatrix(a, IndexList{0}, ok), InputError);
  EXPECT_THROW(submatrix(a, IndexList{4}, ok), InputError);
  EXPECT_THROW(submatrix(a, ok, IndexList{2, 2}), InputError);
  EXPECT_THROW(submatrix(a, ok, IndexList{1, 9}), InputError);
}

TEST(Submatrix, Composition) {
  const ComplexMatrix a = testing::random_complex(6, 5, 11);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    IndexList rows, cols;
    for (int i = 0; i < 4; ++i) rows.push_back(1 + static_cast<int>(rng.below(6)));
    for (int j = 1; j <= 5; ++j)
      if (rng.below(2)) cols.push_back(j);
    if (cols.empty()) cols.push_back(3);
    const ComplexMatrix two_step = submatrix(submatrix(a, rows, iota_indices(5)), iota_indices(4), cols);
    EXPECT_EQ(two_step, submatrix(a, rows, cols));
  }
}

TEST(MakeMatrix, RejectsNonFinite) {
  const std::vector<Complex> good{{1, 0}, {0, 1}};
  EXPECT_NO_THROW(make_matrix(1, 2, good));
  EXPECT_THROW(make_matrix(2, 2, good), InputError);
  const std::vector<Complex> nan{{std::numeric_limits<double>::quiet_NaN(), 0}};
  EXPECT_THROW(make_matrix(1, 1, nan), InputError);
  const std::vector<Complex> inf{{0, std::numeric_limits<double>::infinity()}};
  EXPECT_THROW(make_matrix(1, 1, inf), InputError);
}

TEST(HaarUnitary, OneByOneHasUnitModulus) {
  const ComplexMatrix u = haar_unitary(1, 3);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-12);
}

TEST(HaarUnitary, ZeroRejected) { EXPECT_THROW(haar_unitary(0, 1), InputError); }

TEST(HaarUnitary, IsUnitary) {
  for (std::uint64_t seed : {1, 2, 3, 99}) {
    const ComplexMatrix u = haar_unitary(8, seed);
    const ComplexMatrix gram = u.adjoint() * u;
    EXPECT_LE((gram - ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(std::abs(u.determinant()), 1.0, 1e-9);
    for (int i = 0; i < 8; ++i) {
      EXPECT_NEAR(u.row(i).norm(), 1.0, 1e-12);
      EXPECT_NEAR(u.col(i).norm(), 1.0, 1e-12);
    }
  }
}

TEST(HaarUnitary, SeedsDiffer) {
  const ComplexMatrix a = haar_unitary(4, 1);
  const ComplexMatrix b = haar_unitary(4, 2);
  EXPECT_GT((a - b).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_EQ(haar_unitary(4, 1), a);
}

// |u_11|^2 is uniform on [0,1] under Haar measure at m=2; the phase of u_11
// is uniform too, which plain QR without the phase correction breaks.
TEST(HaarUnitary, StatisticalCheck) {
  double mean = 0.0;
  double cos_phase = 0.0;
  constexpr int draws = 2000;
  for (int s = 0; s < draws; ++s) {
    const ComplexMatrix u = haar_unitary(2, 1000 + s);
    mean += std::norm(u(0, 0));
    cos_phase += std::cos(std::arg(u(0, 0)));
  }
  EXPECT_NEAR(mean / draws, 0.5, 0.03);
  // sd of cos(uniform phase) is 1/sqrt(2); 4 standard errors.
  EXPECT_NEAR(cos_phase / draws, 0.0, 4 * 0.7072 / std::sqrt(draws));
}

TEST(InputMatrix, Columns) {
  const ComplexMatrix u = haar_unitary(4, 8);
  EXPECT_EQ(input_matrix(u, 4), u);
  const ComplexMatrix a = input_matrix(u, 2);
  ASSERT_EQ(a.cols(), 2);
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(a.col(j).norm(), 1.0, 1e-12);
  EXPECT_THROW(input_matrix(u, 5), InputError);
}

TEST(InputMatrix, ColumnsOrthogonal) {
  const ComplexMatrix a = input_matrix(haar_unitary(6, 21), 3);
  EXPECT_LE(std::abs(a.col(0).dot(a.col(1))), 1e-12);
  EXPECT_LE(orthonormality_deviation(a), 1e-12);
}

TEST(Orthonormality, FlagsScaledColumns) {
  ComplexMatrix a = input_matrix(haar_unitary(5, 2), 3);
  EXPECT_LT(orthonormality_deviation(a), kOrthonormalityWarnThreshold);
  a.col(1) *= 1.001;
  EXPECT_GT(orthonormality_deviation(a), kOrthonormalityWarnThreshold);
}

}  // namespace
}  // namespace exactbs
